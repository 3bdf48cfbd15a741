#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "mil/mutate.hpp"
#include "mil/testgen.hpp"

// Mutation-based evaluation: run generated suites at increasing unrolling
// depths over a batch of faulty variants, collect distinct faults, and
// aggregate the per-run average (Np) and the all-runs union (Na) per depth.
// Run-to-run variability comes from the seeded random search order; one run
// shares its seed across depths, which is what makes its fault sets grow
// monotonically with the depth.

namespace mil {

/// Distinct-fault identity: variant, failed tag, line of failure. Equality of
/// tuples is the distinctness criterion.
struct FaultRecord {
    int variant = 0;
    std::string tag;
    int line = 0;

    auto operator<=>(const FaultRecord&) const = default;
};

using FaultSet = std::set<FaultRecord>;

/// Executes every test of the suite on one routine variant and collects the
/// distinct faults (contract violations, user check violations, runtime
/// errors, and fuel exhaustion as "nontermination").
FaultSet run_suite(const Routine& variant, int variant_id, const TestSuite& suite, int fuel);

struct EvalParams {
    int max_depth = 5;
    int runs = 20;
    uint64_t base_seed = 0;
    Domain domain;
    int fuel = 64;
    int mutant_count = 60;
};

struct EvalReport {
    std::string routine;
    int max_depth = 0;
    int runs = 0;
    // faults[i-1][j-1]: distinct faults of depth i, run j
    std::vector<std::vector<FaultSet>> faults;
    std::vector<double> np; // per depth, average |F(i,j)| over runs
    std::vector<int> na;    // per depth, |union over runs|
    std::vector<double> gen_ms;  // per depth, total generation time
    std::vector<double> exec_ms; // per depth, total execution time
    int mutants_used = 0;
};

/// Fills np/na from the fault matrix (separable so the formulas can be
/// checked against hand-built fixtures).
void aggregate(EvalReport& report);

/// The full protocol: R runs of (generate suites at depths 1..n with the
/// run's seed; execute on every mutant; collect distinct faults).
EvalReport evaluate(const Routine& r, const std::vector<Mutant>& mutants,
                    const EvalParams& params);

/// Normalized curves P(Np), P(Na): each series divided by its maximum.
std::vector<double> normalized(const std::vector<double>& series);

std::string report_json(const EvalReport& report);
std::string report_table(const EvalReport& report);

/// Plot data rows "depth,p_np,p_na", one per depth.
std::string plot_rows(const EvalReport& report);

} // namespace mil
