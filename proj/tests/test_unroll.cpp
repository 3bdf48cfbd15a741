#include <doctest.h>

#include "mil/corpus.hpp"
#include "mil/parser.hpp"
#include "mil/printer.hpp"
#include "mil/unroll.hpp"

using namespace mil;

namespace {

int count_assign_to(const Routine& r, const std::string& target) {
    int n = 0;
    walk(r.body, [&](const Instr& i) {
        if (i.kind == Instr::Kind::Assign && i.target == target) ++n;
    });
    return n;
}

int count_guards(const Routine& r) {
    int n = 0;
    walk(r.body, [&](const Instr& i) {
        if (i.kind == Instr::Kind::Check && i.origin == CheckOrigin::Seeded &&
            i.target_id == kGuardTargetId)
            ++n;
    });
    return n;
}

} // namespace

TEST_CASE("depth zero replaces the loop by the inapplicable check") {
    Routine r = corpus_routine(corpus_entry("FACTORIAL"));
    Routine u = unroll_routine(r, UnrollConfig{0, "", UnrollForm::Strict, 32});
    CHECK(count_assign_to(u, "f") == 0);
    CHECK(count_guards(u) == 1);
    CHECK(analyze(u).loop_count == 0);
    std::string text = pretty(u);
    CHECK(text.find("check false end -- [guard]") != std::string::npos);
    CHECK(text.find("until") == std::string::npos);
}

TEST_CASE("depth one is a single guarded conditional") {
    Routine r = parse("routine w (x: INTEGER) do until x >= 3 loop x := x + 1 end end");
    Routine u = unroll_routine(r, UnrollConfig{1, "", UnrollForm::Strict, 32});
    REQUIRE(u.body.size() == 1);
    const Instr& top = *u.body[0];
    REQUIRE(top.kind == Instr::Kind::If);
    CHECK(top.cond->kind == Expr::Kind::Unary);
    CHECK(top.cond->un_op == UnOp::Not);
    REQUIRE(top.then_block.size() == 2); // body copy, then the guarded check
    CHECK(top.then_block[0]->kind == Instr::Kind::Assign);
    const Instr& inner = *top.then_block[1];
    REQUIRE(inner.kind == Instr::Kind::If); // guard fires only if e is still false
    REQUIRE(inner.then_block.size() == 1);
    CHECK(inner.then_block[0]->kind == Instr::Kind::Check);
    CHECK(inner.then_block[0]->target_id == kGuardTargetId);
}

TEST_CASE("depth n contains exactly n body copies") {
    Routine r = corpus_routine(corpus_entry("FACTORIAL"));
    for (int depth : {1, 2, 5, 9}) {
        Routine u = unroll_routine(r, UnrollConfig{depth, "", UnrollForm::Strict, 32});
        CHECK(count_assign_to(u, "f") == depth);
        CHECK(count_guards(u) == 1);
    }
}

TEST_CASE("the truncated form omits the guard") {
    Routine r = corpus_routine(corpus_entry("FACTORIAL"));
    Routine u = unroll_routine(r, UnrollConfig{3, "", UnrollForm::Truncated, 32});
    CHECK(count_assign_to(u, "f") == 3);
    CHECK(count_guards(u) == 0);
}

TEST_CASE("the from clause is preserved in front of the nest") {
    Routine r = parse(R"(
routine w (n: INTEGER)
  local
    i: INTEGER
  do
    from
      i := 100
    until i >= n loop
      i := i + 1
    end
  end
)");
    Routine u = unroll_routine(r, UnrollConfig{2, "", UnrollForm::Strict, 32});
    REQUIRE(u.body.size() == 2);
    CHECK(u.body[0]->kind == Instr::Kind::Assign); // i := 100 hoisted
    CHECK(u.body[1]->kind == Instr::Kind::If);
}

TEST_CASE("rejects nested loops, unknown labels, and excessive depth") {
    Routine nested = parse(R"(
routine v (n: INTEGER)
  local
    i: INTEGER
    j: INTEGER
  do
    until i >= n loop
      until j >= n loop
        j := j + 1
      end
      i := i + 1
    end
  end
)");
    CHECK_THROWS_AS((void)unroll_routine(nested, UnrollConfig{1, "loop1", UnrollForm::Strict, 32}),
                    UnrollError);
    Routine r = corpus_routine(corpus_entry("GCD"));
    CHECK_THROWS_AS((void)unroll_routine(r, UnrollConfig{1, "loop9", UnrollForm::Strict, 32}),
                    UnrollError);
    CHECK_THROWS_AS((void)unroll_routine(r, UnrollConfig{33, "", UnrollForm::Strict, 32}),
                    UnrollError);
}

TEST_CASE("semantic check: factorial up to depth five") {
    Routine r = corpus_routine(corpus_entry("FACTORIAL"));
    UnrollCheckReport rep =
        semantic_check(r, UnrollConfig{5, "", UnrollForm::Strict, 32}, Domain{0, 5, 0});
    CHECK(rep.inputs_checked == 6);
    CHECK(rep.ok());
}

TEST_CASE("semantic check: depth zero sends every loop-entering input to the guard") {
    Routine r = corpus_routine(corpus_entry("GCD"));
    UnrollCheckReport rep =
        semantic_check(r, UnrollConfig{0, "", UnrollForm::Strict, 32}, Domain{1, 4, 0});
    CHECK(rep.ok()); // inputs with zero iterations pass, the rest hit the guard
}

TEST_CASE("acceptance at depth i implies acceptance at depth i+1 with equal state") {
    for (const char* name : {"FACTORIAL", "GCD", "LINEAR_SEARCH", "BINARY_SEARCH"}) {
        const CorpusEntry& entry = corpus_entry(name);
        Routine r = corpus_routine(entry);
        InputSpace space(r, entry.tiny_domain);
        RunOptions opts;
        opts.record_trace = false;

        std::vector<Routine> unrolled;
        for (int depth = 0; depth <= 5; ++depth)
            unrolled.push_back(
                unroll_routine(r, UnrollConfig{depth, "", UnrollForm::Strict, 32}));

        for (uint64_t i = 0; i < space.size(); ++i) {
            std::vector<Value> args = space.decode(i);
            if (!satisfies_require(r, args)) continue;
            RunOutcome orig = run(r, args, opts);
            int iters = orig.loops.begin()->second.completed;
            for (int depth = 0; depth < 5; ++depth) {
                RunOutcome at = run(unrolled[static_cast<size_t>(depth)], args, opts);
                RunOutcome next = run(unrolled[static_cast<size_t>(depth) + 1], args, opts);
                if (at.ok()) {
                    CHECK(next.ok());
                    CHECK(at.final_env == next.final_env);
                    CHECK(iters <= depth);
                }
                // depth 0 accepts nothing; beyond that, acceptance is
                // exactly "terminates within depth iterations"
                if (orig.ok() && depth >= 1 && iters <= depth) {
                    CHECK(at.ok());
                    CHECK(at.final_env == orig.final_env);
                }
                if (depth == 0) CHECK(!at.ok());
            }
        }
    }
}
