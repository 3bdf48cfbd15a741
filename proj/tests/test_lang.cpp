#include <doctest.h>

#include "mil/ast.hpp"
#include "mil/parser.hpp"
#include "mil/printer.hpp"

using namespace mil;

namespace {

const char* kMaxInArray = R"(
routine max_in_array (a: ARRAY)
  require a.count >= 1
  local
    i: INTEGER := 1
    m: INTEGER := a [0]
  do
    from
      i := 1
    until i > a.count - 1 loop
      if a [i] > m then
        m := a [i]
      end
      i := i + 1
    end
  end
)";

} // namespace

TEST_CASE("parses the running example with one loop") {
    Routine r = parse(kMaxInArray);
    CHECK(r.name == "max_in_array");
    StructureInfo info = analyze(r);
    CHECK(info.loop_count == 1);
    CHECK(info.loops[0].branches == 2); // if with implicit else
}

TEST_CASE("empty input is a syntax error at 1:1") {
    try {
        parse("");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.where().line == 1);
        CHECK(e.where().column == 1);
    }
}

TEST_CASE("diagnostics carry locations") {
    CHECK_THROWS_AS(parse("routine r () do x := 1 end"), ParseError);       // unresolved
    CHECK_THROWS_AS(parse("routine r (x: INTEGER, x: INTEGER) do end"), ParseError);
    CHECK_THROWS_AS(parse("routine r (x: INTEGER) do x := true end"), ParseError);
    CHECK_THROWS_AS(parse("routine r (x: INTEGER) do x := y end"), ParseError);
    CHECK_THROWS_AS(
        parse("routine r (x: INTEGER) do ensure t: x > 0 t: x > 1 end"), ParseError);
    CHECK_THROWS_AS(parse("routine r (a: ARRAY) do a := a end"), ParseError);
    CHECK_THROWS_AS(parse("routine r (x: INTEGER) do if x then x := 1 end end"), ParseError);
}

TEST_CASE("pretty output round-trips structurally") {
    Routine r = parse(kMaxInArray);
    Routine again = parse(pretty(r));
    CHECK(equal(r, again));
    // and the rendering is a fixed point
    CHECK(pretty(r) == pretty(again));
}

TEST_CASE("elseif chains nest in the else position") {
    Routine r = parse(R"(
routine classify (x: INTEGER)
  local
    k: INTEGER
  do
    if x > 0 then
      k := 1
    elseif x < 0 then
      k := 2
    else
      k := 3
    end
  end
)");
    const Instr& top = *r.body[0];
    REQUIRE(top.kind == Instr::Kind::If);
    REQUIRE(top.else_block.has_value());
    REQUIRE(top.else_block->size() == 1);
    CHECK((*top.else_block)[0]->kind == Instr::Kind::If);

    BranchStructure bs = branch_structure(r.body);
    CHECK(bs.m == 3);

    Routine again = parse(pretty(r));
    CHECK(equal(r, again));
}

TEST_CASE("node ids are stable across pretty/parse") {
    Routine r = parse(kMaxInArray);
    Routine again = parse(pretty(r));
    std::vector<int> ids1, ids2;
    walk(r.body, [&](const Instr& i) { ids1.push_back(i.id); });
    walk(again.body, [&](const Instr& i) { ids2.push_back(i.id); });
    CHECK(ids1 == ids2);
    for (size_t i = 1; i < ids1.size(); ++i) CHECK(ids1[i] > ids1[i - 1]); // pre-order
}

TEST_CASE("seeded check annotations survive a round trip") {
    Routine r = parse(kMaxInArray);
    r.body.push_back(Instr::check(Expr::bool_lit(false), CheckOrigin::Seeded, 3));
    r.body.push_back(Instr::check(Expr::bool_lit(false), CheckOrigin::Seeded, kGuardTargetId));
    renumber(r);
    std::string text = pretty(r);
    CHECK(text.find("-- [target 3]") != std::string::npos);
    CHECK(text.find("-- [guard]") != std::string::npos);
    Routine again = parse(text);
    CHECK(equal(r, again));
    const Instr& seeded = *again.body[again.body.size() - 2];
    CHECK(seeded.origin == CheckOrigin::Seeded);
    CHECK(seeded.target_id == 3);
}

TEST_CASE("plain comments are ignored") {
    Routine r = parse("-- a comment\nroutine r (x: INTEGER) do x := 1 -- trailing\n end");
    CHECK(r.body.size() == 1);
}

TEST_CASE("analyze reports nesting and plain bodies") {
    Routine nested = parse(R"(
routine nested (n: INTEGER)
  local
    i: INTEGER
    j: INTEGER
  do
    until i >= n loop
      from
        j := 0
      until j >= n loop
        j := j + 1
      end
      i := i + 1
    end
  end
)");
    StructureInfo info = analyze(nested);
    CHECK(info.loop_count == 2);
    CHECK(info.max_nesting == 2);

    Routine straight = parse("routine s (x: INTEGER) do x := x + 1 end");
    CHECK(analyze(straight).loop_count == 0);
}

TEST_CASE("tree diff counts maximal differing subtrees") {
    Routine r1 = parse("routine r (x: INTEGER) do x := x + 1 end");
    Routine r2 = parse("routine r (x: INTEGER) do x := x - 1 end");
    CHECK(tree_diff_count(r1, r2) == 1);
    CHECK(tree_diff_count(r1, r1) == 0);

    Routine r3 = parse("routine r (x: INTEGER) do x := x + 2 end");
    CHECK(tree_diff_count(r1, r3) == 1); // literal changed
    CHECK(tree_diff_count(r2, r3) == 1); // operator subtree replaced wholesale
}
