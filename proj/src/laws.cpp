#include "mil/laws.hpp"

#include <sstream>
#include <stdexcept>

#include "mil/rng.hpp"

namespace mil {

Instance random_instance(const LawBounds& bounds, uint64_t seed) {
    if (bounds.universe < 1 || bounds.max_trace_len < 1 || bounds.max_set_size < 1)
        throw std::invalid_argument("instance bounds must be at least 1");
    Rng rng(seed);
    Instance inst;
    inst.u = Universe{bounds.universe};

    auto gen_trace = [&]() {
        int len = static_cast<int>(rng.range(1, bounds.max_trace_len));
        Trace t;
        t.reserve(static_cast<size_t>(len));
        for (int k = 0; k < len; ++k)
            t.push_back(static_cast<State>(rng.below(static_cast<uint64_t>(bounds.universe))));
        return t;
    };
    auto gen_set = [&]() {
        int size = static_cast<int>(rng.range(0, bounds.max_set_size));
        TraceSet s;
        for (int k = 0; k < size; ++k) s.insert(gen_trace());
        return s;
    };
    auto gen_pred = [&]() {
        Predicate p = Predicate::none(inst.u);
        for (int s = 0; s < bounds.universe; ++s) p.member[static_cast<size_t>(s)] = rng.coin();
        return p;
    };

    inst.A = gen_set();
    inst.B = gen_set();
    inst.C = gen_set();
    inst.c = gen_pred();
    inst.d = gen_pred();
    inst.x = gen_trace();
    inst.y = gen_trace();
    inst.z = gen_trace();
    inst.i = static_cast<int>(rng.range(0, bounds.max_loop_index));
    return inst;
}

std::vector<Trace> all_traces(const Universe& u, int max_len) {
    std::vector<Trace> out;
    std::vector<Trace> frontier;
    for (State s = 0; s < u.size; ++s) frontier.push_back(stationary(s));
    for (int len = 1; len <= max_len; ++len) {
        out.insert(out.end(), frontier.begin(), frontier.end());
        std::vector<Trace> next;
        for (const Trace& t : frontier)
            for (State s = 0; s < u.size; ++s) {
                Trace e = t;
                e.push_back(s);
                next.push_back(std::move(e));
            }
        frontier = std::move(next);
    }
    return out;
}

std::vector<TraceSet> all_trace_sets(const Universe& u, int max_len) {
    std::vector<Trace> traces = all_traces(u, max_len);
    std::vector<TraceSet> out;
    size_t combos = size_t{1} << traces.size();
    out.reserve(combos);
    for (size_t mask = 0; mask < combos; ++mask) {
        TraceSet s;
        for (size_t k = 0; k < traces.size(); ++k)
            if (mask & (size_t{1} << k)) s.insert(traces[k]);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<Predicate> all_predicates(const Universe& u) {
    std::vector<Predicate> out;
    size_t combos = size_t{1} << u.size;
    for (size_t mask = 0; mask < combos; ++mask) {
        Predicate p = Predicate::none(u);
        for (int s = 0; s < u.size; ++s)
            if (mask & (size_t{1} << s)) p.member[static_cast<size_t>(s)] = true;
        out.push_back(std::move(p));
    }
    return out;
}

namespace {

bool eq(const TraceSet& a, const TraceSet& b) { return a == b; }

// Prefix check against the defining property: x <= z iff the junction suffix
// y reassembles z. Keeps the law independent of the slice-based fast path.
bool prefix_by_definition(const Trace& x, const Trace& z) {
    if (x.size() > z.size()) return false;
    Trace y(z.begin() + static_cast<long>(x.size()) - 1, z.end());
    auto glued = concat_traces(x, y);
    return glued && *glued == z;
}

const std::vector<LawCase>& registry_impl() {
    static const std::vector<LawCase> laws = [] {
        std::vector<LawCase> r;
        auto add = [&](const char* name, unsigned fields,
                       std::function<bool(const Instance&)> holds) {
            r.push_back(LawCase{name, fields, std::move(holds)});
        };

        add("Concat_assoc", FieldX | FieldY | FieldZ, [](const Instance& t) {
            auto xy = concat_traces(t.x, t.y);
            auto yz = concat_traces(t.y, t.z);
            auto lhs = xy ? concat_traces(*xy, t.z) : std::nullopt;
            auto rhs = yz ? concat_traces(t.x, *yz) : std::nullopt;
            if (lhs.has_value() != rhs.has_value()) return false;
            return !lhs || *lhs == *rhs;
        });
        add("Concat_station", FieldX | FieldY, [](const Instance& t) {
            auto z = concat_traces(t.x, t.y);
            if (!z) return true;
            if (is_stationary(t.x) && *z != t.y) return false;
            if (is_stationary(t.y) && *z != t.x) return false;
            return true;
        });
        add("Concat_order", FieldX | FieldY | FieldZ, [](const Instance& t) {
            // partial order: reflexive, antisymmetric, transitive; and the
            // slice-based decision agrees with the concatenation definition.
            if (is_prefix(t.x, t.x) != PrefixRel::Prefix) return false;
            bool xz = is_prefix(t.x, t.z) != PrefixRel::NotPrefix;
            bool zx = is_prefix(t.z, t.x) != PrefixRel::NotPrefix;
            if (xz && zx && t.x != t.z) return false;
            bool xy = is_prefix(t.x, t.y) != PrefixRel::NotPrefix;
            bool yz = is_prefix(t.y, t.z) != PrefixRel::NotPrefix;
            if (xy && yz && !xz) return false;
            if (xz != prefix_by_definition(t.x, t.z)) return false;
            if ((is_prefix(t.x, t.z) == PrefixRel::ProperPrefix) != (xz && t.x.size() < t.z.size()))
                return false;
            return true;
        });
        add("Extension_stable", FieldX | FieldZ | FieldPredC, [](const Instance& t) {
            if (satisfies(t.x, t.c) && is_prefix(t.x, t.z) != PrefixRel::NotPrefix)
                return satisfies(t.z, t.c);
            return true;
        });
        add("Concat_fail1", FieldA, [](const Instance& t) {
            return concat_sets(fail_set(), t.A).empty();
        });
        add("Concat_fail2", FieldA, [](const Instance& t) {
            return concat_sets(t.A, fail_set()).empty();
        });
        add("Concat_skip1", FieldA, [](const Instance& t) {
            return eq(concat_sets(t.A, skip_set(t.u)), t.A);
        });
        add("Concat_skip2", FieldA, [](const Instance& t) {
            return eq(concat_sets(skip_set(t.u), t.A), t.A);
        });
        add("False_restrict", FieldA, [](const Instance& t) {
            return restrict_set(Predicate::none(t.u), t.A).empty();
        });
        add("True_restrict", FieldA, [](const Instance& t) {
            return eq(restrict_set(Predicate::all(t.u), t.A), t.A);
        });
        add("False_corestrict", FieldA, [](const Instance& t) {
            return corestrict_set(t.A, Predicate::none(t.u)).empty();
        });
        add("True_corestrict", FieldA, [](const Instance& t) {
            return eq(corestrict_set(t.A, Predicate::all(t.u)), t.A);
        });
        add("Two_restrict", FieldA | FieldPredC | FieldPredD, [](const Instance& t) {
            return eq(restrict_set(t.c, restrict_set(t.d, t.A)),
                      restrict_set(t.c.conj(t.d), t.A));
        });
        add("Two_corestrict", FieldA | FieldPredC | FieldPredD, [](const Instance& t) {
            return eq(corestrict_set(corestrict_set(t.A, t.c), t.d),
                      corestrict_set(t.A, t.c.conj(t.d)));
        });
        add("Corestrict_restrict1", FieldA | FieldB | FieldPredC | FieldPredD,
            [](const Instance& t) {
                return eq(concat_sets(corestrict_set(t.A, t.c), restrict_set(t.d, t.B)),
                          concat_sets(corestrict_set(t.A, t.c.conj(t.d)), t.B));
            });
        add("Corestrict_restrict2", FieldA | FieldB | FieldPredC | FieldPredD,
            [](const Instance& t) {
                return eq(concat_sets(corestrict_set(t.A, t.c), restrict_set(t.d, t.B)),
                          concat_sets(t.A, restrict_set(t.c.conj(t.d), t.B)));
            });
        add("Corestrict_restrict3", FieldA | FieldB | FieldPredC | FieldPredD,
            [](const Instance& t) {
                // stated as an inclusion, not an equality
                return subset_of(concat_sets(corestrict_set(t.A, t.c), restrict_set(t.d, t.B)),
                                 concat_sets(t.A, t.B));
            });
        add("Corestrict_restrict4", FieldA | FieldB | FieldPredC, [](const Instance& t) {
            return concat_sets(corestrict_set(t.A, t.c), restrict_set(t.c.complement(), t.B))
                .empty();
        });
        add("Corestrict_restrict5", FieldA | FieldB | FieldPredC, [](const Instance& t) {
            return eq(concat_sets(corestrict_set(t.A, t.c), t.B),
                      concat_sets(t.A, restrict_set(t.c, t.B)));
        });
        add("Restrict_compose", FieldA | FieldB | FieldPredC, [](const Instance& t) {
            return eq(concat_sets(restrict_set(t.c, t.A), t.B),
                      restrict_set(t.c, concat_sets(t.A, t.B)));
        });
        add("Compose_corestrict", FieldA | FieldB | FieldPredC, [](const Instance& t) {
            return eq(concat_sets(t.A, corestrict_set(t.B, t.c)),
                      corestrict_set(concat_sets(t.A, t.B), t.c));
        });
        add("Restrict_union", FieldA | FieldB | FieldPredC, [](const Instance& t) {
            return eq(restrict_set(t.c, set_union(t.A, t.B)),
                      set_union(restrict_set(t.c, t.A), restrict_set(t.c, t.B)));
        });
        add("Corestrict_union", FieldA | FieldB | FieldPredC, [](const Instance& t) {
            return eq(corestrict_set(set_union(t.A, t.B), t.c),
                      set_union(corestrict_set(t.A, t.c), corestrict_set(t.B, t.c)));
        });
        add("Compose_union1", FieldA | FieldB | FieldC, [](const Instance& t) {
            return eq(concat_sets(t.A, set_union(t.B, t.C)),
                      set_union(concat_sets(t.A, t.B), concat_sets(t.A, t.C)));
        });
        add("Compose_union2", FieldA | FieldB | FieldC, [](const Instance& t) {
            return eq(concat_sets(set_union(t.A, t.B), t.C),
                      set_union(concat_sets(t.A, t.C), concat_sets(t.B, t.C)));
        });
        add("Test_leq", FieldA | FieldB | FieldPredC, [](const Instance& t) {
            if (set_tests(t.A, t.c) && set_leq(t.A, t.B)) return set_tests(t.B, t.c);
            return true;
        });
        add("Loop_Skip1", FieldB | FieldPredC, [](const Instance& t) {
            return eq(loop_union(t.c, t.B, t.u, 1), corestrict_set(skip_set(t.u), t.c));
        });
        add("Loop_Skip2", FieldB | FieldPredC, [](const Instance& t) {
            return eq(loop_union(t.c, t.B, t.u, 1), restrict_set(t.c, skip_set(t.u)));
        });
        add("Loop3_L0", FieldB | FieldPredC, [](const Instance& t) {
            return loop_union(t.c, t.B, t.u, 0).empty();
        });
        add("Loop3_Li", FieldB | FieldPredC | FieldI, [](const Instance& t) {
            TraceSet step = corestrict_set(
                power(restrict_set(t.c.complement(), t.B), t.u, t.i), t.c);
            return eq(loop_union(t.c, t.B, t.u, t.i + 1),
                      set_union(loop_union(t.c, t.B, t.u, t.i), step));
        });
        add("Fixdef2_step", FieldB | FieldPredC | FieldI, [](const Instance& t) {
            TraceSet rhs = set_union(
                restrict_set(t.c, skip_set(t.u)),
                restrict_set(t.c.complement(),
                             concat_sets(t.B, loop_rec(t.c, t.B, t.u, t.i))));
            return eq(loop_rec(t.c, t.B, t.u, t.i + 1), rhs);
        });
        add("Def_equiv", FieldB | FieldPredC | FieldI, [](const Instance& t) {
            return eq(loop_rec(t.c, t.B, t.u, t.i), loop_union(t.c, t.B, t.u, t.i));
        });
        add("Under_approx", FieldB | FieldPredC | FieldI, [](const Instance& t) {
            // finite-fuel form: L_i is included in L_K for any K >= i
            const int k = 8;
            if (t.i > k) return true;
            return subset_of(loop_union(t.c, t.B, t.u, t.i), loop_union(t.c, t.B, t.u, k));
        });

        return r;
    }();
    return laws;
}

std::string describe(const Instance& t, unsigned fields) {
    std::ostringstream os;
    if (fields & FieldA) os << "A=" << to_string(t.A) << ' ';
    if (fields & FieldB) os << "B=" << to_string(t.B) << ' ';
    if (fields & FieldC) os << "C=" << to_string(t.C) << ' ';
    if (fields & FieldPredC) os << "c=" << to_string(t.c) << ' ';
    if (fields & FieldPredD) os << "d=" << to_string(t.d) << ' ';
    if (fields & FieldX) os << "x=" << to_string(t.x) << ' ';
    if (fields & FieldY) os << "y=" << to_string(t.y) << ' ';
    if (fields & FieldZ) os << "z=" << to_string(t.z) << ' ';
    if (fields & FieldI) os << "i=" << t.i << ' ';
    std::string s = os.str();
    if (!s.empty()) s.pop_back();
    return s;
}

std::string strip_slashes(const std::string& name) {
    if (name.size() >= 2 && name.front() == '/' && name.back() == '/')
        return name.substr(1, name.size() - 2);
    return name;
}

} // namespace

const std::vector<LawCase>& law_registry() { return registry_impl(); }

LawReport run_law(const LawCase& law, long samples, uint64_t seed, const LawBounds& bounds) {
    LawReport report;
    report.name = law.name;
    auto start = std::chrono::steady_clock::now();
    for (long k = 0; k < samples; ++k) {
        Instance inst = random_instance(bounds, mix_seed(seed, static_cast<uint64_t>(k)));
        ++report.samples;
        if (!law.holds(inst)) {
            report.counterexample = describe(inst, law.fields);
            break;
        }
    }
    report.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::steady_clock::now() - start);
    return report;
}

LawReport check_law(const std::string& name, long samples, uint64_t seed,
                    const LawBounds& bounds) {
    const std::string bare = strip_slashes(name);
    for (const LawCase& law : law_registry())
        if (law.name == bare) return run_law(law, samples, seed, bounds);
    throw std::invalid_argument("unknown law: " + name);
}

std::vector<LawReport> check_all(long samples, uint64_t seed, const LawBounds& bounds) {
    std::vector<LawReport> out;
    uint64_t salt = 0;
    for (const LawCase& law : law_registry())
        out.push_back(run_law(law, samples, mix_seed(seed, salt++), bounds));
    return out;
}

LawReport run_law_exhaustive(const LawCase& law) {
    const Universe u{2};
    const int max_len = 2;
    const std::vector<TraceSet> sets = all_trace_sets(u, max_len);
    const std::vector<Predicate> preds = all_predicates(u);
    const std::vector<Trace> traces = all_traces(u, max_len);
    const std::vector<TraceSet> one_set = {fail_set()};
    const std::vector<Predicate> one_pred = {Predicate::none(u)};
    const std::vector<Trace> one_trace = {stationary(0)};
    const int max_i = 4;

    auto pick_sets = [&](unsigned f) -> const std::vector<TraceSet>& {
        return (law.fields & f) ? sets : one_set;
    };
    auto pick_preds = [&](unsigned f) -> const std::vector<Predicate>& {
        return (law.fields & f) ? preds : one_pred;
    };
    auto pick_traces = [&](unsigned f) -> const std::vector<Trace>& {
        return (law.fields & f) ? traces : one_trace;
    };
    int top_i = (law.fields & FieldI) ? max_i : 0;

    LawReport report;
    report.name = law.name;
    auto start = std::chrono::steady_clock::now();

    Instance t;
    t.u = u;
    for (const TraceSet& A : pick_sets(FieldA)) {
        t.A = A;
        for (const TraceSet& B : pick_sets(FieldB)) {
            t.B = B;
            for (const TraceSet& C : pick_sets(FieldC)) {
                t.C = C;
                for (const Predicate& c : pick_preds(FieldPredC)) {
                    t.c = c;
                    for (const Predicate& d : pick_preds(FieldPredD)) {
                        t.d = d;
                        for (const Trace& x : pick_traces(FieldX)) {
                            t.x = x;
                            for (const Trace& y : pick_traces(FieldY)) {
                                t.y = y;
                                for (const Trace& z : pick_traces(FieldZ)) {
                                    t.z = z;
                                    for (int i = 0; i <= top_i; ++i) {
                                        t.i = i;
                                        ++report.samples;
                                        if (!law.holds(t)) {
                                            report.counterexample = describe(t, law.fields);
                                            goto done;
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
done:
    report.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::steady_clock::now() - start);
    return report;
}

std::vector<LawReport> check_all_exhaustive() {
    std::vector<LawReport> out;
    for (const LawCase& law : law_registry()) out.push_back(run_law_exhaustive(law));
    return out;
}

} // namespace mil
