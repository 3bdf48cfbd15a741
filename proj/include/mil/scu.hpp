#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mil/ast.hpp"

// Contradiction seeding. SC plants an always-failing check per branch of the
// loop body (or one at the start of a plain body), so each counterexample to
// the seeded program covers one branch. SCU plants per-level checks in the
// unrolled program instead: "check not e end" after level i fires exactly
// when the loop would exit after i iterations, and with branches a fresh
// variable bn records which branch the level took, numbering (level, branch)
// pairs 1..m*n.

namespace mil {

class InstrumentError : public std::runtime_error {
public:
    explicit InstrumentError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class TargetKind { ScBranch, ScuPlainLevel, ScuBranchLevel };

std::string to_string(TargetKind k);

struct Target {
    int id = 0;         // dense 1..T
    TargetKind kind = TargetKind::ScBranch;
    int level = 0;      // 1..n for scu kinds, 0 for sc
    int branch = 0;     // j in [m*(level-1)+1, m*level] for branch targets, else 0
    int location = 0;   // node id of the seeded check in the instrumented routine
    int line = 0;       // its line in the canonical rendering
    std::string tag;    // human-readable: level2_branch3, branch1, level4
    std::string seeded_expr;
};

struct InstrumentedRoutine {
    Routine routine;
    std::vector<Target> targets;
    int m = 0;     // branch count of the loop body
    int depth = 0; // unroll depth (0 for sc)
    std::string mode; // "sc" or "scu"
    std::string loop_label;
};

/// Branch-coverage seeding on the original loop. Precondition: exactly one
/// loop, not nested, with a single conditional chain in its body.
InstrumentedRoutine instrument_sc(const Routine& r);

/// Per-level seeding on the strict depth-n unrolling.
InstrumentedRoutine instrument_scu(const Routine& r, int depth);

/// Target manifest as a JSON document (one record per target).
std::string manifest_json(const InstrumentedRoutine& ir);

} // namespace mil
