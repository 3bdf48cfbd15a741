#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mil/interp.hpp"
#include "mil/scu.hpp"

// Bounded counterexample search. The SMT prover of the original framework is
// replaced by enumeration over the finite input domain: for each seeded
// target, find an input whose execution violates exactly that check. Lex
// order guarantees completeness (if any input in the domain reaches a target,
// the scan finds one); seeded random order models run-to-run variability.

namespace mil {

enum class SearchOrder { Lex, Random };

struct TestCase {
    int id = 0;
    int target_id = 0;
    TargetKind target_kind = TargetKind::ScBranch;
    int target_level = 0;  // target's level i (scu)
    int target_branch = 0; // target's j (branch targets)
    std::vector<Value> input;
    // observed by replaying the untouched routine
    int certified_iterations = 0;
    int certified_branch = 0; // leaf branch at the target's level (1..m), 0 if plain
    uint64_t origin_seed = 0;
};

struct TestSuite {
    std::string routine;
    std::vector<std::string> param_names;
    std::string mode; // sc | scu
    int depth = 0;
    Domain domain;
    SearchOrder order = SearchOrder::Lex;
    uint64_t seed = 0;
    std::vector<TestCase> tests;    // ordered by target id
    std::vector<int> uncovered;     // exhaustively shown unreachable within the domain
    std::vector<int> unknown;       // search budget hit before a verdict
};

/// Per-input observations of the original routine over a domain, built once
/// and reused across targets, depths, and runs: whether the input is
/// admissible, whether the loop body was entered, the iteration count when
/// the loop exited normally (-1 otherwise), and the leaf branch taken at each
/// level before any failure.
struct InputProfile {
    bool admissible = false;
    bool entered = false;
    int clean_iterations = -1;
    std::vector<uint8_t> branch_at_level;
};

struct ProfileTable {
    std::vector<InputProfile> rows; // aligned with InputSpace enumeration
    uint64_t admissible_count = 0;
};

ProfileTable build_profile(const Routine& r, const std::string& loop_label, const Domain& d,
                           int fuel);

/// Cache of profile tables keyed by domain, for reuse across the runs and
/// depths of one evaluation.
class ProfileCache {
public:
    const ProfileTable& get(const Routine& r, const std::string& loop_label, const Domain& d,
                            int fuel);

private:
    std::map<std::tuple<std::string, int64_t, int64_t, int, int>, ProfileTable> tables_;
};

struct GenOptions {
    int depth = 1;
    Domain domain;
    std::string mode = "scu"; // or "sc"
    SearchOrder order = SearchOrder::Lex;
    uint64_t seed = 0;
    int fuel = 64;
    uint64_t budget = 0; // inputs examined per target; 0 = whole domain
    ProfileCache* cache = nullptr;
};

/// Reference search: runs the instrumented routine on each admissible input
/// in order until one violates exactly the given target's check.
std::optional<std::vector<Value>> solve_target(const InstrumentedRoutine& ir, const Target& t,
                                               const Domain& d, SearchOrder order, uint64_t seed,
                                               int fuel, uint64_t budget = 0);

/// Instruments the routine, solves every target, and certifies each test by
/// replaying it on the instrumented routine (it must violate exactly its
/// target) and on the original (iteration count and branch must match the
/// target). Deterministic given (seed, domain). Throws std::logic_error if a
/// certification fails, which a correct build cannot produce.
TestSuite generate(const Routine& r, const GenOptions& opts);

struct Certificate {
    int iterations = 0;
    std::vector<int> branch_seq;
    bool matches_target = false;
};

/// Replays a test on the untouched routine and checks it exercises exactly
/// the target's (level, branch).
Certificate replay(const Routine& r, const TestCase& tc);

std::string suite_json(const TestSuite& s);
TestSuite suite_from_json(const std::string& text);

} // namespace mil
