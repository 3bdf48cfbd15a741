#include "mil/interp.hpp"

#include <sstream>
#include <stdexcept>

namespace mil {

std::string to_string(const Value& v) {
    switch (v.kind) {
    case Type::Int: return std::to_string(v.num);
    case Type::Bool: return v.num ? "true" : "false";
    case Type::IntArray: {
        std::ostringstream os;
        os << '[';
        for (size_t i = 0; i < v.arr.size(); ++i) {
            if (i) os << ',';
            os << v.arr[i];
        }
        os << ']';
        return os.str();
    }
    }
    return "?";
}

std::string to_string(RunStatus s) {
    switch (s) {
    case RunStatus::Ok: return "ok";
    case RunStatus::CheckViolation: return "check_violation";
    case RunStatus::ContractViolation: return "contract_violation";
    case RunStatus::RuntimeError: return "runtime_error";
    case RunStatus::FuelExhausted: return "fuel_exhausted";
    }
    return "?";
}

Binding Binding::of(const Routine& r) {
    Binding b;
    for (const Param& p : r.params) {
        b.index.emplace(p.name, static_cast<int>(b.names.size()));
        b.names.push_back(p.name);
        b.types.push_back(p.type);
    }
    b.param_count = r.params.size();
    for (const Local& l : r.locals) {
        b.index.emplace(l.name, static_cast<int>(b.names.size()));
        b.names.push_back(l.name);
        b.types.push_back(l.type);
    }
    return b;
}

namespace {

Value default_value(Type t) {
    switch (t) {
    case Type::Int: return Value::integer(0);
    case Type::Bool: return Value::boolean(false);
    case Type::IntArray: return Value::array({});
    }
    return Value::integer(0);
}

int64_t checked(int64_t v, SourceLoc loc) {
    if (v > kSafeIntRange || v < -kSafeIntRange) throw ExecError{"overflow", loc};
    return v;
}

} // namespace

Value eval_expr(const Binding& binding, const EnvState& env, const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::IntLit: return Value::integer(e.int_val);
    case Expr::Kind::BoolLit: return Value::boolean(e.bool_val);
    case Expr::Kind::Var: return env.values[static_cast<size_t>(binding.slot(e.name))];
    case Expr::Kind::Count: {
        const Value& a = env.values[static_cast<size_t>(binding.slot(e.name))];
        return Value::integer(static_cast<int64_t>(a.arr.size()));
    }
    case Expr::Kind::Index: {
        const Value& a = env.values[static_cast<size_t>(binding.slot(e.name))];
        int64_t i = eval_expr(binding, env, *e.lhs).num;
        if (i < 0 || i >= static_cast<int64_t>(a.arr.size()))
            throw ExecError{"index_out_of_range", e.loc};
        return Value::integer(a.arr[static_cast<size_t>(i)]);
    }
    case Expr::Kind::Unary: {
        Value v = eval_expr(binding, env, *e.lhs);
        if (e.un_op == UnOp::Not) return Value::boolean(!v.truth());
        return Value::integer(checked(-v.num, e.loc));
    }
    case Expr::Kind::Binary: {
        if (e.bin_op == BinOp::And) {
            Value l = eval_expr(binding, env, *e.lhs);
            if (!l.truth()) return Value::boolean(false);
            return Value::boolean(eval_expr(binding, env, *e.rhs).truth());
        }
        if (e.bin_op == BinOp::Or) {
            Value l = eval_expr(binding, env, *e.lhs);
            if (l.truth()) return Value::boolean(true);
            return Value::boolean(eval_expr(binding, env, *e.rhs).truth());
        }
        Value l = eval_expr(binding, env, *e.lhs);
        Value r = eval_expr(binding, env, *e.rhs);
        switch (e.bin_op) {
        case BinOp::Add: return Value::integer(checked(l.num + r.num, e.loc));
        case BinOp::Sub: return Value::integer(checked(l.num - r.num, e.loc));
        case BinOp::Mul: return Value::integer(checked(l.num * r.num, e.loc));
        case BinOp::Div:
            if (r.num == 0) throw ExecError{"div_by_zero", e.loc};
            return Value::integer(l.num / r.num);
        case BinOp::Mod:
            if (r.num == 0) throw ExecError{"div_by_zero", e.loc};
            return Value::integer(l.num % r.num);
        case BinOp::Lt: return Value::boolean(l.num < r.num);
        case BinOp::Le: return Value::boolean(l.num <= r.num);
        case BinOp::Gt: return Value::boolean(l.num > r.num);
        case BinOp::Ge: return Value::boolean(l.num >= r.num);
        case BinOp::Eq: return Value::boolean(l == r);
        case BinOp::Ne: return Value::boolean(!(l == r));
        default: break;
        }
        break;
    }
    }
    throw std::logic_error("malformed expression");
}

namespace {

// Raised for check failures so deep instruction nesting unwinds cleanly.
struct CheckSignal {
    const Instr* check;
};
struct FuelSignal {
    const Instr* loop;
};

class Interp {
public:
    Interp(const Routine& r, const RunOptions& opts)
        : r_(r), opts_(opts), binding_(Binding::of(r)) {}

    RunOutcome exec(const std::vector<Value>& args) {
        RunOutcome out;
        env_.values.clear();
        for (size_t i = 0; i < binding_.names.size(); ++i)
            env_.values.push_back(i < args.size() ? args[i]
                                                  : default_value(binding_.types[i]));

        // one branch map per loop, for iteration-level branch logging
        walk(r_.body, [&](const Instr& instr) {
            if (instr.kind != Instr::Kind::Loop) return;
            BranchStructure bs = branch_structure(instr.body);
            auto& map = branch_maps_[&instr];
            for (const BranchLeaf& leaf : bs.leaves)
                map.emplace(std::make_pair(leaf.owner->id, leaf.in_else), leaf.branch);
            loop_stats_.emplace(instr.label, LoopStats{});
        });

        try {
            for (const Local& l : r_.locals) {
                if (l.init) {
                    Value v = eval_expr(binding_, env_, *l.init);
                    env_.values[static_cast<size_t>(binding_.slot(l.name))] = std::move(v);
                }
            }
            exec_block(r_.body);
            record(0, 0); // done
            check_ensures(out);
        } catch (const ExecError& err) {
            out.status = RunStatus::RuntimeError;
            out.tag = err.kind;
            out.line = err.loc.line;
        } catch (const CheckSignal& sig) {
            out.status = RunStatus::CheckViolation;
            out.tag = sig.check->origin == CheckOrigin::Seeded ? "seeded" : "check";
            out.target_id = sig.check->target_id;
            out.location = sig.check->id;
            out.line = sig.check->loc.line;
        } catch (const FuelSignal& sig) {
            out.status = RunStatus::FuelExhausted;
            out.tag = "nontermination";
            out.location = sig.loop->id;
            out.line = sig.loop->loc.line;
        }

        out.trace = std::move(trace_);
        out.loops = std::move(loop_stats_);
        out.final_env = std::move(env_);
        return out;
    }

private:
    void record(int location, int line) {
        if (opts_.record_trace) trace_.push_back(TraceState{location, line, env_});
    }

    void exec_block(const Block& block) {
        for (const InstrPtr& instr : block) exec_instr(*instr);
    }

    void exec_instr(const Instr& instr) {
        record(instr.id, instr.loc.line);
        switch (instr.kind) {
        case Instr::Kind::Assign: {
            Value v = eval_expr(binding_, env_, *instr.value);
            env_.values[static_cast<size_t>(binding_.slot(instr.target))] = std::move(v);
            break;
        }
        case Instr::Kind::AssignIndex: {
            int64_t idx = eval_expr(binding_, env_, *instr.index).num;
            Value v = eval_expr(binding_, env_, *instr.value);
            Value& a = env_.values[static_cast<size_t>(binding_.slot(instr.target))];
            if (idx < 0 || idx >= static_cast<int64_t>(a.arr.size()))
                throw ExecError{"index_out_of_range", instr.index->loc};
            a.arr[static_cast<size_t>(idx)] = v.num;
            break;
        }
        case Instr::Kind::If: {
            bool taken = eval_expr(binding_, env_, *instr.cond).truth();
            log_branch(instr, !taken);
            if (taken) {
                exec_block(instr.then_block);
            } else if (instr.else_block) {
                exec_block(*instr.else_block);
            }
            break;
        }
        case Instr::Kind::Loop:
            exec_loop(instr);
            break;
        case Instr::Kind::Check: {
            bool holds = eval_expr(binding_, env_, *instr.check_expr).truth();
            if (!holds) throw CheckSignal{&instr};
            break;
        }
        }
    }

    void exec_loop(const Instr& loop) {
        exec_block(loop.from_block);
        LoopStats& stats = loop_stats_[loop.label];
        loop_ctx_.push_back(&loop);
        for (;;) {
            record(loop.id, loop.loc.line);
            stats.tested = true;
            if (eval_expr(binding_, env_, *loop.until).truth()) {
                stats.exited = true;
                break;
            }
            if (stats.started >= opts_.fuel) {
                loop_ctx_.pop_back();
                throw FuelSignal{&loop};
            }
            ++stats.started;
            stats.branch_at_level.push_back(0);
            exec_block(loop.body);
            ++stats.completed;
        }
        loop_ctx_.pop_back();
    }

    // Records which leaf branch of the enclosing loop's conditional structure
    // this iteration went through. Chain links (elseif descents) have no map
    // entry and are skipped; the leaf eventually reached does.
    void log_branch(const Instr& cond_if, bool else_side) {
        if (loop_ctx_.empty()) return;
        auto maps = branch_maps_.find(loop_ctx_.back());
        if (maps == branch_maps_.end()) return;
        auto it = maps->second.find(std::make_pair(cond_if.id, else_side));
        if (it == maps->second.end()) return;
        LoopStats& stats = loop_stats_[loop_ctx_.back()->label];
        if (!stats.branch_at_level.empty()) stats.branch_at_level.back() = it->second;
    }

    void check_ensures(RunOutcome& out) {
        for (const EnsureClause& clause : r_.ensures) {
            if (!eval_expr(binding_, env_, *clause.expr).truth()) {
                out.status = RunStatus::ContractViolation;
                out.tag = clause.tag;
                out.line = clause.loc.line;
                return;
            }
        }
    }

    const Routine& r_;
    const RunOptions& opts_;
    Binding binding_;
    EnvState env_;
    std::vector<TraceState> trace_;
    std::map<std::string, LoopStats> loop_stats_;
    std::vector<const Instr*> loop_ctx_;
    std::map<const Instr*, std::map<std::pair<int, bool>, int>> branch_maps_;
};

} // namespace

RunOutcome run(const Routine& r, const std::vector<Value>& args, const RunOptions& opts) {
    return Interp(r, opts).exec(args);
}

bool satisfies_require(const Routine& r, const std::vector<Value>& args) {
    if (!r.require) return true;
    Binding binding = Binding::of(r);
    EnvState env;
    for (size_t i = 0; i < binding.names.size(); ++i)
        env.values.push_back(i < args.size() ? args[i] : default_value(binding.types[i]));
    try {
        return eval_expr(binding, env, *r.require).truth();
    } catch (const ExecError&) {
        return false;
    }
}

std::string dump_trace(const Binding& binding, const std::vector<TraceState>& trace) {
    std::ostringstream os;
    for (const TraceState& s : trace) {
        os << '@' << s.line << ':';
        for (size_t i = 0; i < binding.names.size(); ++i)
            os << ' ' << binding.names[i] << '=' << to_string(s.env.values[i]);
        os << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Input enumeration

InputSpace::InputSpace(const Routine& r, const Domain& d) : domain_(d) {
    if (d.int_max < d.int_min) throw std::invalid_argument("empty integer domain");
    for (const Param& p : r.params) {
        param_types_.push_back(p.type);
        uint64_t card = param_card(p.type);
        cards_.push_back(card);
        if (total_ > (uint64_t{1} << 62) / (card ? card : 1))
            throw std::invalid_argument("input domain too large to enumerate");
        total_ *= card;
    }
}

uint64_t InputSpace::param_card(Type t) const {
    uint64_t range = static_cast<uint64_t>(domain_.int_max - domain_.int_min + 1);
    switch (t) {
    case Type::Int: return range;
    case Type::Bool: return 2;
    case Type::IntArray: {
        // sum of range^len over len 0..array_len_max
        uint64_t total = 0;
        uint64_t pow = 1;
        for (int len = 0; len <= domain_.array_len_max; ++len) {
            total += pow;
            if (pow > (uint64_t{1} << 56) / (range ? range : 1))
                throw std::invalid_argument("array domain too large to enumerate");
            pow *= range;
        }
        return total;
    }
    }
    return 1;
}

Value InputSpace::decode_param(Type t, uint64_t index) const {
    uint64_t range = static_cast<uint64_t>(domain_.int_max - domain_.int_min + 1);
    switch (t) {
    case Type::Int: return Value::integer(domain_.int_min + static_cast<int64_t>(index));
    case Type::Bool: return Value::boolean(index != 0);
    case Type::IntArray: {
        int len = 0;
        uint64_t pow = 1;
        while (index >= pow) { // find the length bucket
            index -= pow;
            pow *= range;
            ++len;
        }
        std::vector<int64_t> elems(static_cast<size_t>(len));
        for (int i = len - 1; i >= 0; --i) { // last element least significant
            elems[static_cast<size_t>(i)] =
                domain_.int_min + static_cast<int64_t>(index % range);
            index /= range;
        }
        return Value::array(std::move(elems));
    }
    }
    return Value::integer(0);
}

std::vector<Value> InputSpace::decode(uint64_t index) const {
    std::vector<Value> out(param_types_.size());
    for (size_t i = param_types_.size(); i-- > 0;) {
        uint64_t card = cards_[i];
        out[i] = decode_param(param_types_[i], index % card);
        index /= card;
    }
    return out;
}

} // namespace mil
