#include <doctest.h>

#include "mil/interp.hpp"
#include "mil/parser.hpp"

using namespace mil;

namespace {

Routine factorial_like() {
    return parse(R"(
routine fact (n: INTEGER)
  require n >= 0
  local
    f: INTEGER := 1
    i: INTEGER := 1
  do
    until i > n loop
      f := f * i
      i := i + 1
    end
  end
)");
}

} // namespace

TEST_CASE("expression evaluation in a final state") {
    Routine r = parse("routine seq (x: INTEGER, y: INTEGER) do x := 2 y := 5 end");
    RunOutcome out = run(r, {Value::integer(0), Value::integer(0)});
    REQUIRE(out.ok());
    Binding binding = Binding::of(r);
    ExprPtr prod = Expr::binary(BinOp::Mul, Expr::var("x"), Expr::var("y"));
    CHECK(eval_expr(binding, out.final_env, *prod).num == 10);
}

TEST_CASE("array expressions") {
    Routine r = parse("routine arr (a: ARRAY, x: INTEGER) do x := a.count end");
    Binding binding = Binding::of(r);
    EnvState env{{Value::array({3, 1, 4}), Value::integer(0)}};

    CHECK(eval_expr(binding, env, *Expr::count("a")).num == 3);
    CHECK(eval_expr(binding, env, *Expr::index("a", Expr::int_lit(1))).num == 1);
    CHECK_THROWS_AS((void)eval_expr(binding, env, *Expr::index("a", Expr::int_lit(3))),
                    ExecError);
    CHECK_THROWS_AS((void)eval_expr(binding, env, *Expr::index("a", Expr::int_lit(-1))),
                    ExecError);

    ExprPtr div0 = Expr::binary(BinOp::Div, Expr::var("x"), Expr::int_lit(0));
    CHECK_THROWS_AS((void)eval_expr(binding, env, *div0), ExecError);

    ExprPtr big = Expr::binary(BinOp::Mul, Expr::int_lit(1 << 30), Expr::int_lit(1 << 30));
    CHECK_THROWS_AS((void)eval_expr(binding, env, *big), ExecError);
}

TEST_CASE("boolean operators short-circuit") {
    Routine r = parse("routine g (a: ARRAY, ok: BOOLEAN) do ok := a.count < 1 or a [0] = 0 end");
    RunOutcome out = run(r, {Value::array({}), Value::boolean(false)});
    CHECK(out.ok()); // a [0] is never evaluated on the empty array
    CHECK(out.final_env.values[1].truth());
}

TEST_CASE("factorial runs to f = 24 in 4 iterations") {
    Routine r = factorial_like();
    RunOutcome out = run(r, {Value::integer(4)});
    REQUIRE(out.ok());
    Binding binding = Binding::of(r);
    CHECK(out.final_env.values[binding.slot("f")].num == 24);
    CHECK(out.loops.at("loop1").completed == 4);
    CHECK(out.loops.at("loop1").exited);
}

TEST_CASE("exit condition initially true means zero iterations") {
    Routine r = factorial_like();
    RunOutcome out = run(r, {Value::integer(0)});
    CHECK(out.ok());
    CHECK(out.loops.at("loop1").completed == 0);
    CHECK(out.loops.at("loop1").exited);
}

TEST_CASE("divergent loop exhausts fuel") {
    Routine r = parse("routine d (x: INTEGER) do until x > 0 loop x := x end end");
    RunOutcome out = run(r, {Value::integer(0)}, RunOptions{100, false});
    CHECK(out.status == RunStatus::FuelExhausted);
    CHECK(out.tag == "nontermination");
    CHECK(out.loops.at("loop1").started == 100);
    CHECK(!out.loops.at("loop1").exited);
}

TEST_CASE("contract violations carry the clause tag") {
    Routine r = parse(R"(
routine c (x: INTEGER)
  do
    x := x + 1
  ensure
    small: x < 10
    positive: x > 0
  end
)");
    CHECK(run(r, {Value::integer(1)}).ok());
    RunOutcome big = run(r, {Value::integer(100)});
    CHECK(big.status == RunStatus::ContractViolation);
    CHECK(big.tag == "small");
    RunOutcome neg = run(r, {Value::integer(-5)});
    CHECK(neg.status == RunStatus::ContractViolation);
    CHECK(neg.tag == "positive");
}

TEST_CASE("user checks stop execution with their location") {
    Routine r = parse("routine k (x: INTEGER) do check x > 0 end x := 7 end");
    RunOutcome bad = run(r, {Value::integer(0)});
    CHECK(bad.status == RunStatus::CheckViolation);
    CHECK(bad.tag == "check");
    CHECK(!bad.target_id.has_value());
    CHECK(bad.final_env.values[0].num == 0); // assignment never ran
    CHECK(run(r, {Value::integer(1)}).ok());
}

TEST_CASE("branch log records the leaf taken per iteration") {
    Routine r = parse(R"(
routine b (n: INTEGER)
  local
    i: INTEGER
    odd: INTEGER
  do
    until i >= n loop
      if i mod 2 = 1 then
        odd := odd + 1
      end
      i := i + 1
    end
  end
)");
    RunOutcome out = run(r, {Value::integer(4)});
    REQUIRE(out.ok());
    // leaves: then = 1, implicit else = 2; iterations visit i = 0,1,2,3
    CHECK(out.loops.at("loop1").branch_at_level == std::vector<int>{2, 1, 2, 1});
}

TEST_CASE("require screening") {
    Routine r = factorial_like();
    CHECK(satisfies_require(r, {Value::integer(0)}));
    CHECK(!satisfies_require(r, {Value::integer(-1)}));

    // evaluation errors inside require exclude the input
    Routine g = parse("routine g (a: ARRAY) require a [0] = 1 do end");
    CHECK(!satisfies_require(g, {Value::array({})}));
    CHECK(satisfies_require(g, {Value::array({1})}));
}

TEST_CASE("trace dump format") {
    Routine r = parse("routine t (x: INTEGER) do x := x + 1 end");
    RunOutcome out = run(r, {Value::integer(1)});
    Binding binding = Binding::of(r);
    std::string dump = dump_trace(binding, out.trace);
    CHECK(dump == "@1: x=1\n@0: x=2\n");
}

TEST_CASE("input enumeration order") {
    Routine r = parse("routine e (x: INTEGER, a: ARRAY) do end");
    InputSpace space(r, Domain{0, 1, 2});
    // arrays: [], [0], [1], [0,0], [0,1], [1,0], [1,1] -> 7 per integer
    REQUIRE(space.size() == 14);
    CHECK(space.decode(0) == std::vector<Value>{Value::integer(0), Value::array({})});
    CHECK(space.decode(1) == std::vector<Value>{Value::integer(0), Value::array({0})});
    CHECK(space.decode(4) == std::vector<Value>{Value::integer(0), Value::array({0, 1})});
    CHECK(space.decode(7) == std::vector<Value>{Value::integer(1), Value::array({})});
    CHECK(space.decode(13) == std::vector<Value>{Value::integer(1), Value::array({1, 1})});

    Routine b = parse("routine f (p: BOOLEAN, x: INTEGER) do end");
    InputSpace bools(b, Domain{5, 6, 0});
    REQUIRE(bools.size() == 4);
    CHECK(bools.decode(0) == std::vector<Value>{Value::boolean(false), Value::integer(5)});
    CHECK(bools.decode(3) == std::vector<Value>{Value::boolean(true), Value::integer(6)});
}
