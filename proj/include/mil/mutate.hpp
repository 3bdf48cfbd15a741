#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mil/ast.hpp"

// Fault injection. Operators were picked so that a good share of the faults
// are iteration-count-sensitive (exit-condition tweaks, constant offsets on
// loop variables) next to garden-variety operator and branch mutations.
// Contracts (require, ensure, user checks) are never mutated: they are the
// oracle that decides whether a fault is observed.

namespace mil {

enum class MutOp { RelopSwap, ArithSwap, ConstOffset, BoundTweak, AssignDrop, BranchNegate };

std::string to_string(MutOp op);

/// One applicable (operator, place, variant) triple. The place is an
/// instruction node plus a child path into its expression trees.
struct MutationSite {
    MutOp op = MutOp::RelopSwap;
    int instr_id = 0;
    std::vector<int> path;   // expression child path (0 = lhs/index, 1 = rhs/value)
    int variant = 0;         // replacement op code, or +1/-1 offset
    std::string description;
};

struct Mutant {
    int id = 0;
    MutOp op = MutOp::RelopSwap;
    int instr_id = 0;
    int line = 0;
    std::string description; // human-readable one-line diff
    Routine routine;
};

/// All applicable sites in deterministic pre-order.
std::vector<MutationSite> enumerate_sites(const Routine& r, const std::vector<MutOp>& ops);

std::vector<MutOp> all_mutation_ops();

/// Applies one site to a copy of the routine. The result parses and
/// type-checks, and differs from the original at exactly one node.
Mutant apply_site(const Routine& r, const MutationSite& site, int mutant_id);

/// k distinct sites sampled without replacement (all of them if fewer exist).
/// Mutants that happen to be semantically equivalent are kept: their
/// detectability is part of what the evaluation measures.
std::vector<Mutant> mutate(const Routine& r, const std::vector<MutOp>& ops, int count,
                           uint64_t seed);

/// Manifest of a generated mutant batch as JSON.
std::string mutants_manifest_json(const std::string& routine,
                                  const std::vector<Mutant>& mutants);

} // namespace mil
