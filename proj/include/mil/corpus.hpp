#pragma once

#include <string>
#include <vector>

#include "mil/ast.hpp"
#include "mil/interp.hpp"

// The bundled benchmark corpus: twelve single-loop routines with contracts as
// the fault oracle. Sources live under corpus/ and are embedded at build
// time; the per-entry configuration pins a generation domain (every level up
// to max_depth is reachable in it, except where noted), a tiny domain for the
// exponential denotational oracle, and the depth cap beyond which levels are
// intrinsically unreachable in the generation domain.

namespace mil {

struct CorpusEntry {
    std::string name;        // table name, e.g. BINARY_SEARCH
    std::string file;        // corpus/<file>.mil
    std::string source;      // embedded text
    int branches = 0;        // branch count m of the loop body
    Domain gen_domain;       // for test generation and evaluation
    Domain tiny_domain;      // for denotational and unrolling oracles
    int max_depth = 0;       // deepest reachable unroll level in gen_domain
    std::string notes;       // documented unreachable targets, quirks
};

const std::vector<CorpusEntry>& corpus();

const CorpusEntry& corpus_entry(const std::string& name);

/// Parses the entry's embedded source.
Routine corpus_routine(const CorpusEntry& entry);

} // namespace mil
