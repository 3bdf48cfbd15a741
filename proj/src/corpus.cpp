#include "mil/corpus.hpp"

#include <map>
#include <stdexcept>

#include "mil/parser.hpp"

namespace mil {

namespace {

struct EmbeddedSource {
    const char* name;
    const char* text;
};

const EmbeddedSource kSources[] = {
#include "corpus_sources.inc"
};

const char* source_for(const std::string& file) {
    for (const EmbeddedSource& s : kSources)
        if (file == s.name) return s.text;
    throw std::logic_error("no embedded source for " + file);
}

std::vector<CorpusEntry> build() {
    // name, file, m, generation domain, tiny oracle domain, max depth, notes
    struct Row {
        const char* name;
        const char* file;
        int m;
        Domain gen;
        Domain tiny;
        int max_depth;
        const char* notes;
    };
    const Row rows[] = {
        {"BINARY_SEARCH", "binary_search", 3, {0, 3, 7}, {0, 1, 2}, 3,
         "log-bounded: levels beyond 3 unreachable for arrays of up to 7 elements"},
        {"MAX_IN_ARRAY", "max_in_array", 2, {0, 2, 7}, {0, 1, 2}, 6, ""},
        {"SQUARE_ROOT", "square_root", 3, {0, 200, 0}, {0, 3, 0}, 8,
         "the bisection span cannot close in one inequality step, so level-1 "
         "branches 2 and 3 are unreachable for every n"},
        {"FACTORIAL", "factorial", 0, {0, 12, 0}, {0, 4, 0}, 12,
         "12! is the largest admissible value in the safe integer range"},
        {"GCD", "gcd", 2, {1, 12, 0}, {1, 4, 0}, 8, ""},
        {"SUM_AND_MAX", "sum_and_max", 2, {0, 3, 6}, {0, 1, 2}, 6, ""},
        {"PRIME_CHECK", "prime_check", 2, {2, 120, 0}, {2, 6, 0}, 8,
         "divisor-found at level i needs smallest prime factor i+1, so levels "
         "3, 5, 7, 8 have an unreachable branch"},
        {"LINEAR_SEARCH", "linear_search", 0, {0, 1, 12}, {0, 1, 2}, 12, ""},
        {"ARITHMETIC_ADD", "arithmetic_add", 0, {0, 16, 0}, {0, 3, 0}, 15, ""},
        {"ARITHMETIC_MULTIPLY", "arithmetic_multiply", 0, {0, 12, 0}, {0, 3, 0}, 12, ""},
        {"ARITHMETIC_DIVIDE", "arithmetic_divide", 0, {0, 20, 0}, {0, 4, 0}, 15, ""},
        {"INVERSE", "inverse", 2, {0, 3, 3}, {0, 1, 2}, 3, ""},
    };

    std::vector<CorpusEntry> out;
    for (const Row& row : rows) {
        CorpusEntry e;
        e.name = row.name;
        e.file = row.file;
        e.source = source_for(row.file);
        e.branches = row.m;
        e.gen_domain = row.gen;
        e.tiny_domain = row.tiny;
        e.max_depth = row.max_depth;
        e.notes = row.notes;
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace

const std::vector<CorpusEntry>& corpus() {
    static const std::vector<CorpusEntry> entries = build();
    return entries;
}

const CorpusEntry& corpus_entry(const std::string& name) {
    for (const CorpusEntry& e : corpus())
        if (e.name == name || e.file == name) return e;
    throw std::invalid_argument("unknown corpus entry: " + name);
}

Routine corpus_routine(const CorpusEntry& entry) { return parse(entry.source); }

} // namespace mil
