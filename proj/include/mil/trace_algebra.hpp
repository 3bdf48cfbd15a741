#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

// Trace-set algebra over an opaque finite state universe.
//
// A trace is a finite, non-empty sequence of states; a trace set is a finite
// set of traces and gives the meaning of an instruction or program. All
// operations here are pure; every value is immutable once built, so the whole
// module is safe to use from multiple threads without synchronization.

namespace mil {

using State = int32_t;

/// The finite state universe. States are the tokens 0 .. size-1.
struct Universe {
    int size = 0;
};

/// Non-empty finite sequence of states. Kept as a plain vector; emptiness is
/// ruled out by construction in this codebase, not by the type.
using Trace = std::vector<State>;

/// Canonical trace order: by length, then lexicographically on state ids.
/// Fixes deterministic iteration and serialization of trace sets.
struct TraceOrder {
    bool operator()(const Trace& a, const Trace& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

/// Finite set of traces. May be empty ("fail").
using TraceSet = std::set<Trace, TraceOrder>;

/// A condition on states, stored extensionally as the subset of the universe
/// where it holds. Total by construction; complement and conjunction are exact.
struct Predicate {
    std::vector<bool> member;

    static Predicate none(const Universe& u) { return Predicate{std::vector<bool>(u.size, false)}; }
    static Predicate all(const Universe& u) { return Predicate{std::vector<bool>(u.size, true)}; }
    static Predicate of(const Universe& u, const std::vector<State>& states);

    bool operator()(State s) const { return member[static_cast<size_t>(s)]; }

    Predicate complement() const;
    Predicate conj(const Predicate& other) const;
};

/// x + y, defined iff the last state of x equals the first state of y; the
/// junction state appears once and |result| = |x| + |y| - 1.
std::optional<Trace> concat_traces(const Trace& x, const Trace& y);

enum class PrefixRel { NotPrefix, Prefix, ProperPrefix };

/// Whether x is a (proper) prefix of z, i.e. some y exists with x + y = z.
PrefixRel is_prefix(const Trace& x, const Trace& z);

/// A trace satisfies a test when some state of it does.
bool satisfies(const Trace& x, const Predicate& v);

/// Stationary trace for s.
inline Trace stationary(State s) { return Trace{s}; }
inline bool is_stationary(const Trace& x) { return x.size() == 1; }

/// A ; B — all concatenations of a trace from A with a trace from B.
/// Total: non-concatenable pairs contribute nothing.
TraceSet concat_sets(const TraceSet& a, const TraceSet& b);

/// c / A — traces of A whose initial state satisfies c.
TraceSet restrict_set(const Predicate& c, const TraceSet& a);

/// A \ c — traces of A whose last state satisfies c.
TraceSet corestrict_set(const TraceSet& a, const Predicate& c);

/// skip — the set of all stationary traces over the universe.
TraceSet skip_set(const Universe& u);

/// fail — the empty trace set.
inline TraceSet fail_set() { return {}; }

/// Whether A contains a trace satisfying c ("A tests c").
bool set_tests(const TraceSet& a, const Predicate& c);

/// A <= B: every trace of A has an extension in B. Not antisymmetric, so this
/// is not an order relation on trace sets (unlike the prefix order on traces).
bool set_leq(const TraceSet& a, const TraceSet& b);

TraceSet set_union(const TraceSet& a, const TraceSet& b);
bool subset_of(const TraceSet& a, const TraceSet& b);

/// A^i: A iterated i times; A^0 = skip.
TraceSet power(const TraceSet& a, const Universe& u, int i);

/// if v then A end == (not v / skip) U (v / A).
TraceSet cond_set(const Predicate& v, const TraceSet& a, const Universe& u);

/// L_i: union over j < i of (not e / B)^j \ e. Executions that reach e by
/// running B strictly fewer than i times. L_0 is fail.
TraceSet loop_union(const Predicate& e, const TraceSet& b, const Universe& u, int i);

/// The recursive-conditional view of the same sequence:
/// L_0 = fail, L_{i+1} = (e / skip) U (not e / (B ; L_i)).
TraceSet loop_rec(const Predicate& e, const TraceSet& b, const Universe& u, int i);

/// Canonical text forms: states a..z then s26, s27, ...; sets sorted by the
/// canonical trace order, e.g. "{<a>,<a,b>}".
std::string to_string(const Trace& x);
std::string to_string(const TraceSet& a);
std::string to_string(const Predicate& p);

} // namespace mil
