#include <doctest.h>

#include "mil/corpus.hpp"
#include "mil/evaluate.hpp"
#include "mil/parser.hpp"
#include "mil/printer.hpp"

using namespace mil;

namespace {

TestSuite gen_suite(const CorpusEntry& e, const Routine& r, int depth) {
    GenOptions opts;
    opts.depth = depth;
    opts.domain = e.gen_domain;
    return generate(r, opts);
}

// the specific arithmetic fault used as a running example: f := f * i
// becomes f := f + i
Mutant product_to_sum(const Routine& factorial) {
    for (const MutationSite& s : enumerate_sites(factorial, {MutOp::ArithSwap})) {
        Mutant m = apply_site(factorial, s, 1);
        if (m.description.find("f * i -> f + i") != std::string::npos) return m;
    }
    throw std::logic_error("site not found");
}

} // namespace

TEST_CASE("the verified originals produce no fault records") {
    for (const char* name : {"GCD", "FACTORIAL", "SUM_AND_MAX"}) {
        const CorpusEntry& e = corpus_entry(name);
        Routine r = corpus_routine(e);
        TestSuite suite = gen_suite(e, r, 2);
        CHECK(run_suite(r, 0, suite, 64).empty());
    }
}

TEST_CASE("a broken product is caught through the tabulated contract") {
    const CorpusEntry& e = corpus_entry("FACTORIAL");
    Routine r = corpus_routine(e);
    Mutant bad = product_to_sum(r);

    // depth-1 suite runs n = 1: f becomes 1 + 1 = 2, violating clause f1
    FaultSet d1 = run_suite(bad.routine, bad.id, gen_suite(e, r, 1), 64);
    REQUIRE(d1.size() == 1);
    CHECK(d1.begin()->tag == "f1");

    // the depth-2 test n = 2 adds the distinct fault on clause f2
    FaultSet d2 = run_suite(bad.routine, bad.id, gen_suite(e, r, 2), 64);
    REQUIRE(d2.size() == 2);
    CHECK(d2.count(*d1.begin()) == 1);
}

TEST_CASE("identical failures collapse to one distinct fault") {
    const CorpusEntry& e = corpus_entry("ARITHMETIC_ADD");
    Routine r = corpus_routine(e);
    // s := s + 1 dropped: every test with b >= 1 fails the same sum clause
    Mutant dropped = [&] {
        for (const MutationSite& s : enumerate_sites(r, {MutOp::AssignDrop})) {
            Mutant m = apply_site(r, s, 7);
            if (m.description.find("s := s + 1") != std::string::npos) return m;
        }
        throw std::logic_error("site not found");
    }();
    TestSuite suite = gen_suite(e, r, 4); // four tests, b = 1..4
    REQUIRE(suite.tests.size() == 4);
    FaultSet faults = run_suite(dropped.routine, dropped.id, suite, 64);
    CHECK(faults.size() == 1);
    CHECK(faults.begin()->tag == "sum");
    CHECK(faults.begin()->variant == 7);
}

TEST_CASE("fault aggregation matches the per-run and all-runs formulas") {
    // hand-built 2-run, 2-depth fixture
    FaultRecord a{1, "t1", 3}, b{2, "t2", 5}, c{3, "t3", 7};
    EvalReport rep;
    rep.routine = "fixture";
    rep.max_depth = 2;
    rep.runs = 2;
    rep.faults = {
        {{a}, {a, b}},    // depth 1: runs {a} and {a,b}
        {{a, c}, {a, b}}, // depth 2: runs {a,c} and {a,b}
    };
    aggregate(rep);
    CHECK(rep.np[0] == doctest::Approx(1.5)); // (1 + 2) / 2
    CHECK(rep.na[0] == 2);                    // |{a, b}|
    CHECK(rep.np[1] == doctest::Approx(2.0)); // (2 + 2) / 2
    CHECK(rep.na[1] == 3);                    // |{a, b, c}|
}

TEST_CASE("normalization tops out at one and keeps monotonicity") {
    std::vector<double> p = normalized({2.0, 3.0, 4.0});
    CHECK(p[2] == doctest::Approx(1.0));
    CHECK(p[0] == doctest::Approx(0.5));
    CHECK(p[0] <= p[1]);
    CHECK(normalized({0.0, 0.0}) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("a single lex-order run also detects monotonically more faults") {
    const CorpusEntry& e = corpus_entry("FACTORIAL");
    Routine r = corpus_routine(e);
    std::vector<Mutant> mutants = mutate(r, all_mutation_ops(), 1000, 2);
    size_t previous = 0;
    for (int depth = 1; depth <= 4; ++depth) {
        GenOptions opts;
        opts.depth = depth;
        opts.domain = e.gen_domain;
        TestSuite suite = generate(r, opts);
        FaultSet all;
        for (const Mutant& m : mutants) {
            FaultSet found = run_suite(m.routine, m.id, suite, 64);
            all.insert(found.begin(), found.end());
        }
        CHECK(all.size() >= previous);
        previous = all.size();
    }
    CHECK(previous > 0);
}

TEST_CASE("evaluation cells grow with depth under shared per-run seeds") {
    const CorpusEntry& e = corpus_entry("GCD");
    Routine r = corpus_routine(e);
    std::vector<Mutant> mutants = mutate(r, all_mutation_ops(), 12, 3);

    EvalParams params;
    params.max_depth = 3;
    params.runs = 3;
    params.base_seed = 99;
    params.domain = e.gen_domain;
    EvalReport rep = evaluate(r, mutants, params);

    for (int depth = 1; depth < rep.max_depth; ++depth)
        for (int j = 1; j <= rep.runs; ++j) {
            const FaultSet& now = rep.faults[depth - 1][j - 1];
            const FaultSet& next = rep.faults[depth][j - 1];
            for (const FaultRecord& f : now) CHECK(next.count(f) == 1);
        }
    for (int depth = 1; depth < rep.max_depth; ++depth) {
        CHECK(rep.na[depth - 1] <= rep.na[depth]);
        CHECK(rep.np[depth - 1] <= rep.np[depth] + 1e-9);
    }
    for (int depth = 0; depth < rep.max_depth; ++depth)
        CHECK(rep.np[depth] <= static_cast<double>(rep.na[depth]) + 1e-9);

    // determinism of the whole protocol (timings aside)
    EvalReport again = evaluate(r, mutants, params);
    CHECK(again.faults == rep.faults);
    CHECK(again.na == rep.na);
    CHECK(again.np == rep.np);

    std::string table = report_table(rep);
    CHECK(table.find("depth 1 -> 2:") != std::string::npos);
    std::string plot = plot_rows(rep);
    CHECK(plot.find("depth,p_np,p_na") == 0);
}
