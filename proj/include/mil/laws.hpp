#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mil/trace_algebra.hpp"

// Property-based checker for the named identities of the trace-set algebra.
// Each law is a decision procedure over a sampled instance; the registry holds
// one entry per named theorem. Passing here is evidence, not proof: the
// exhaustive small-universe mode exists so that passes on the random mode are
// not sampling artifacts.

namespace mil {

/// Size bounds for sampled instances. The defaults keep single checks cheap
/// while making junction mismatches and empty sets likely.
struct LawBounds {
    int universe = 5;
    int max_trace_len = 4;
    int max_set_size = 8;
    int max_loop_index = 6;
    int fuel_index = 8; // K in the finite under-approximation check
};

/// One sampled input tuple. A law reads only the fields its arity declares.
struct Instance {
    Universe u;
    TraceSet A, B, C;
    Predicate c{{}}, d{{}};
    Trace x, y, z;
    int i = 0;
};

/// Arity flags: which Instance fields a law consumes. Drives both the
/// exhaustive enumeration and counterexample formatting.
enum InstanceField : unsigned {
    FieldA = 1u << 0,
    FieldB = 1u << 1,
    FieldC = 1u << 2,
    FieldPredC = 1u << 3,
    FieldPredD = 1u << 4,
    FieldX = 1u << 5,
    FieldY = 1u << 6,
    FieldZ = 1u << 7,
    FieldI = 1u << 8,
};

struct LawCase {
    std::string name;
    unsigned fields = 0;
    std::function<bool(const Instance&)> holds;
};

struct LawReport {
    std::string name;
    long samples = 0;
    std::optional<std::string> counterexample;
    std::chrono::microseconds elapsed{0};

    bool passed() const { return !counterexample.has_value(); }
};

/// All registered laws, one per named theorem, in presentation order.
const std::vector<LawCase>& law_registry();

/// Deterministic sampled instance for (bounds, seed).
Instance random_instance(const LawBounds& bounds, uint64_t seed);

/// Enumeration helpers for the exhaustive mode (and for oracle tests).
std::vector<Trace> all_traces(const Universe& u, int max_len);
std::vector<TraceSet> all_trace_sets(const Universe& u, int max_len);
std::vector<Predicate> all_predicates(const Universe& u);

/// Checks one law on `samples` random instances; stops at the first
/// counterexample. Accepts names with or without the surrounding slashes.
/// Throws std::invalid_argument for unknown names.
LawReport check_law(const std::string& name, long samples, uint64_t seed,
                    const LawBounds& bounds = {});

/// Runs an arbitrary (possibly unregistered) law case on random instances.
LawReport run_law(const LawCase& law, long samples, uint64_t seed,
                  const LawBounds& bounds = {});

/// Checks the full registry; reports in registry order.
std::vector<LawReport> check_all(long samples, uint64_t seed, const LawBounds& bounds = {});

/// Exhaustive mode: universe of 2 states, traces of length <= 2, every
/// combination of the fields each law consumes (loop indices 0..4).
std::vector<LawReport> check_all_exhaustive();
LawReport run_law_exhaustive(const LawCase& law);

} // namespace mil
