#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "mil/ast.hpp"
#include "mil/interp.hpp"

// Syntactic loop unrolling: replaces a loop with a nest of
// "if not e then B; ... end" conditionals, exactly n copies of the body. In
// the strict form the innermost position holds a failing check (the guard),
// so executions needing more than n iterations fail there; the truncated form
// omits the guard and silently stops iterating (diagnostics only). Purely
// AST to AST; the body and exit condition are copied verbatim, keeping line
// provenance for coverage mapping.

namespace mil {

enum class UnrollForm { Strict, Truncated };

struct UnrollConfig {
    int depth = 1;
    std::string loop_label; // empty: the routine's only loop
    UnrollForm form = UnrollForm::Strict;
    int max_depth = 32;
};

class UnrollError : public std::runtime_error {
public:
    explicit UnrollError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The depth-n unrolling. The from clause is preserved in front of the nest.
/// Rejects unknown labels, nested loops inside the target loop, and depths
/// beyond cfg.max_depth.
Routine unroll_routine(const Routine& r, const UnrollConfig& cfg);

/// Hook invoked per unroll level with that level's body copy, before the next
/// level is nested inside. Instrumentation uses this to append per-level
/// seeded checks and branch bookkeeping.
using LevelHook = std::function<void(int level, Block& level_block)>;

Routine unroll_with_hook(const Routine& r, const UnrollConfig& cfg, const LevelHook& hook);

/// Locates the loop a config refers to. Shared by the instrumenter.
const Instr& find_loop(const Routine& r, const std::string& label);

struct UnrollCheckReport {
    uint64_t inputs_checked = 0;
    std::vector<std::string> mismatches;

    bool ok() const { return mismatches.empty(); }
};

/// Compares the strict unrolling against the original over every admissible
/// domain input: acceptance must coincide with "terminates within depth
/// iterations" (with identical final states), and the guard must fire exactly
/// on the inputs needing more.
UnrollCheckReport semantic_check(const Routine& r, const UnrollConfig& cfg, const Domain& d,
                                 int fuel = 64);

} // namespace mil
