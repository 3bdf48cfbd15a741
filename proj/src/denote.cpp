#include "mil/denote.hpp"

#include <algorithm>

namespace mil {

namespace {

class Denoter {
public:
    Denoter(const Routine& r, const Domain& d, int fuel)
        : r_(r), domain_(d), fuel_(fuel), binding_(Binding::of(r)) {}

    DenoteResult run() {
        DenoteResult out;
        TraceSet start;
        InputSpace space(r_, domain_);
        for (uint64_t idx = 0; idx < space.size(); ++idx) {
            std::vector<Value> args = space.decode(idx);
            if (!satisfies_require(r_, args)) continue;
            auto env = initial_env(args);
            if (!env) continue; // a failing initializer leaves no trace
            State s = intern(*env);
            out.initial.push_back(s);
            start.insert(stationary(s));
        }

        out.traces = flow_block(std::move(start), r_.body);

        std::set<State> stuck;
        for (const Trace& t : pending_) stuck.insert(t.front());
        out.unresolved.assign(stuck.begin(), stuck.end());
        out.states = states_;
        out.u = Universe{static_cast<int>(states_.size())};
        return out;
    }

private:
    std::optional<EnvState> initial_env(const std::vector<Value>& args) {
        EnvState env;
        for (size_t i = 0; i < binding_.names.size(); ++i)
            env.values.push_back(i < args.size()
                                     ? args[i]
                                     : binding_.types[i] == Type::Bool ? Value::boolean(false)
                                       : binding_.types[i] == Type::IntArray
                                           ? Value::array({})
                                           : Value::integer(0));
        try {
            for (const Local& l : r_.locals)
                if (l.init)
                    env.values[static_cast<size_t>(binding_.slot(l.name))] =
                        eval_expr(binding_, env, *l.init);
        } catch (const ExecError&) {
            return std::nullopt;
        }
        return env;
    }

    State intern(const EnvState& env) {
        auto it = ids_.find(env);
        if (it != ids_.end()) return it->second;
        State s = static_cast<State>(states_.size());
        states_.push_back(env);
        ids_.emplace(env, s);
        return s;
    }

    // Predicate of `cond` over every state interned so far. States where the
    // condition fails to evaluate satisfy neither the predicate nor its
    // complement-by-want, so their traces drop out of both slices.
    Predicate eval_predicate(const Expr& cond, bool want) {
        Universe u{static_cast<int>(states_.size())};
        Predicate p = Predicate::none(u);
        for (size_t s = 0; s < states_.size(); ++s) {
            try {
                if (eval_expr(binding_, states_[s], cond).truth() == want) p.member[s] = true;
            } catch (const ExecError&) {
            }
        }
        return p;
    }

    static std::vector<State> end_states(const TraceSet& a) {
        std::set<State> ends;
        for (const Trace& t : a) ends.insert(t.back());
        return {ends.begin(), ends.end()};
    }

    static TraceSet stationaries(const std::vector<State>& states) {
        TraceSet out;
        for (State s : states) out.insert(stationary(s));
        return out;
    }

    TraceSet flow_block(TraceSet a, const Block& block) {
        for (const InstrPtr& instr : block) {
            if (a.empty()) break;
            a = flow_instr(std::move(a), *instr);
        }
        return a;
    }

    TraceSet flow_instr(TraceSet a, const Instr& instr) {
        switch (instr.kind) {
        case Instr::Kind::Assign:
        case Instr::Kind::AssignIndex: {
            // one two-state step trace per reachable pre-state
            TraceSet steps;
            for (State s : end_states(a)) {
                auto post = apply_assign(states_[static_cast<size_t>(s)], instr);
                if (post) steps.insert(Trace{s, intern(*post)});
            }
            return concat_sets(a, steps);
        }
        case Instr::Kind::Check:
            // check c == c / skip; composed against a prefix set that is
            // A \ c (the laws make the two readings coincide)
            return corestrict_set(a, eval_predicate(*instr.check_expr, true));
        case Instr::Kind::If: {
            Predicate p_true = eval_predicate(*instr.cond, true);
            TraceSet then_in = stationaries(end_states(corestrict_set(a, p_true)));
            TraceSet then_traces =
                restrict_set(p_true, flow_block(std::move(then_in), instr.then_block));
            TraceSet out = concat_sets(a, then_traces);
            Predicate p_false = eval_predicate(*instr.cond, false);
            if (instr.else_block) {
                TraceSet else_in = stationaries(end_states(corestrict_set(a, p_false)));
                TraceSet else_traces =
                    restrict_set(p_false, flow_block(std::move(else_in), *instr.else_block));
                out = set_union(out, concat_sets(a, else_traces));
            } else {
                // (not v / skip) glued onto A is exactly A \ not v
                out = set_union(out, corestrict_set(a, p_false));
            }
            return out;
        }
        case Instr::Kind::Loop: {
            TraceSet c = flow_block(std::move(a), instr.from_block);
            TraceSet acc;
            for (int executions = 0;; ++executions) {
                acc = set_union(acc, corestrict_set(c, eval_predicate(*instr.until, true)));
                c = corestrict_set(c, eval_predicate(*instr.until, false));
                if (c.empty()) break;
                if (executions == fuel_) {
                    pending_.insert(c.begin(), c.end());
                    break;
                }
                Predicate p_continue = eval_predicate(*instr.until, false);
                TraceSet body_in = stationaries(end_states(c));
                TraceSet body =
                    restrict_set(p_continue, flow_block(std::move(body_in), instr.body));
                c = concat_sets(c, body);
            }
            return acc;
        }
        }
        return a;
    }

    std::optional<EnvState> apply_assign(const EnvState& env, const Instr& instr) {
        EnvState out = env;
        try {
            if (instr.kind == Instr::Kind::Assign) {
                out.values[static_cast<size_t>(binding_.slot(instr.target))] =
                    eval_expr(binding_, env, *instr.value);
            } else {
                int64_t idx = eval_expr(binding_, env, *instr.index).num;
                Value v = eval_expr(binding_, env, *instr.value);
                Value& arr = out.values[static_cast<size_t>(binding_.slot(instr.target))];
                if (idx < 0 || idx >= static_cast<int64_t>(arr.arr.size())) return std::nullopt;
                arr.arr[static_cast<size_t>(idx)] = v.num;
            }
        } catch (const ExecError&) {
            return std::nullopt;
        }
        return out;
    }

    const Routine& r_;
    Domain domain_;
    int fuel_;
    Binding binding_;
    std::vector<EnvState> states_;
    std::map<EnvState, State> ids_;
    TraceSet pending_;
};

} // namespace

std::vector<EnvState> DenoteResult::decode(const Trace& t) const {
    std::vector<EnvState> out;
    out.reserve(t.size());
    for (State s : t) out.push_back(states[static_cast<size_t>(s)]);
    return out;
}

std::vector<Trace> DenoteResult::traces_from(State s) const {
    std::vector<Trace> out;
    for (const Trace& t : traces)
        if (t.front() == s) out.push_back(t);
    return out;
}

DenoteResult denote(const Routine& r, const Domain& d, int fuel) {
    return Denoter(r, d, fuel).run();
}

std::vector<EnvState> collapse_envs(const std::vector<EnvState>& envs) {
    std::vector<EnvState> out;
    for (const EnvState& e : envs)
        if (out.empty() || !(out.back() == e)) out.push_back(e);
    return out;
}

std::vector<EnvState> env_projection(const std::vector<TraceState>& trace) {
    std::vector<EnvState> envs;
    envs.reserve(trace.size());
    for (const TraceState& s : trace) envs.push_back(s.env);
    return collapse_envs(envs);
}

std::set<std::vector<EnvState>> decoded_traces(const DenoteResult& result) {
    std::set<std::vector<EnvState>> out;
    for (const Trace& t : result.traces) out.insert(result.decode(t));
    return out;
}

} // namespace mil
