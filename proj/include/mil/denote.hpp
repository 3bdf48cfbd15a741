#pragma once

#include <map>
#include <set>
#include <vector>

#include "mil/interp.hpp"
#include "mil/trace_algebra.hpp"

// Bounded denotational evaluator: computes the trace set of a routine over a
// finite input domain, compositionally, with the trace-set algebra doing the
// combining work. Assignments become two-state traces, checks become
// corestrictions, conditionals follow the conditional trace-set definition,
// and loops accumulate the union of their finite approximants up to a fuel
// bound. Exponential in the domain; meant for tiny domains, as the oracle
// against the operational interpreter.
//
// States here are interned valuations. A state could also carry the current
// program location, but the algebra never inspects one, and a location
// component would break the stationary-trace glue of the conditional
// definition (a stationary trace cannot join two distinct control points),
// so the valuation alone is the state.

namespace mil {

struct DenoteResult {
    Universe u;                        // all states discovered
    std::vector<EnvState> states;      // state id -> valuation
    TraceSet traces;                   // complete traces from initial states
    std::vector<State> initial;        // admitted initial states, enumeration order
    std::vector<State> unresolved;     // initial states whose loop outran the fuel

    std::vector<EnvState> decode(const Trace& t) const;

    /// The complete traces beginning at the given initial state (at most one
    /// in this deterministic language).
    std::vector<Trace> traces_from(State s) const;
};

/// Evaluates the routine's trace set over all require-satisfying inputs in
/// the domain. Inputs whose execution fails (runtime error, failing check)
/// contribute no trace; inputs whose loop needs more than `fuel` iterations
/// are reported unresolved.
DenoteResult denote(const Routine& r, const Domain& d, int fuel = 8);

/// Collapses consecutive duplicate valuations. Used to compare denotational
/// traces (where tests and skipped branches are invisible) with interpreter
/// traces (which record every step).
std::vector<EnvState> collapse_envs(const std::vector<EnvState>& envs);

/// The valuation sequence of a recorded interpreter trace, collapsed.
std::vector<EnvState> env_projection(const std::vector<TraceState>& trace);

/// All traces decoded to valuation sequences; stable across interning orders,
/// so results of different denote calls can be compared directly.
std::set<std::vector<EnvState>> decoded_traces(const DenoteResult& result);

} // namespace mil
