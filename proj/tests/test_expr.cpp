#include "test_helpers.hpp"

using namespace sforge;
using sforge::testing::AstGen;

TEST_CASE("grammar: structure of a simple sum") {
  const Expr e = parse("x1^2 + sin(x2)", {"x1", "x2"});
  const ExprNode& root = e.root();
  REQUIRE(root.kind == NodeKind::Add);
  REQUIRE(root.a->kind == NodeKind::Pow);
  REQUIRE(root.a->a->kind == NodeKind::Coord);
  REQUIRE(root.a->b->kind == NodeKind::Number);
  REQUIRE(root.b->kind == NodeKind::Call);
  REQUIRE(root.b->fn == FuncId::Sin);
}

TEST_CASE("grammar: precedence and associativity") {
  const auto val = [](const std::string& src, Vec<2> x) {
    return eval_value<2>(parse(src, {"x1", "x2"}), x);
  };
  CHECK(val("-x1^2", {2, 0}) == -4.0);            // ^ binds tighter than unary minus
  CHECK(val("x1^-2", {2, 0}) == 0.25);            // sign allowed in the exponent
  CHECK(val("2^3^2", {0, 0}) == 512.0);           // right associative
  CHECK(val("8/4/2", {0, 0}) == 1.0);             // left associative
  CHECK(val("1 - 2 - 3", {0, 0}) == -4.0);
  CHECK(val("2 + 3*4", {0, 0}) == 14.0);
  CHECK(val("1/(1 - x1/4)", {0, 0}) == 1.0);
  CHECK(val("pi", {0, 0}) == Catch::Approx(std::numbers::pi));
  CHECK(std::abs(val("sin(pi)", {0, 0})) < 1e-15);
}

TEST_CASE("grammar: error reporting") {
  CHECK_THROWS_AS(parse("", {"x1"}), ParseError);
  CHECK_THROWS_AS(parse("x1 +", {"x1"}), ParseError);
  CHECK_THROWS_AS(parse("x1 x2", {"x1", "x2"}), ParseError);
  CHECK_THROWS_AS(parse("sin()", {"x1"}), ParseError);
  CHECK_THROWS_AS(parse("sin(x1, x1)", {"x1"}), ParseError);
  CHECK_THROWS_AS(parse("cos", {"x1"}), ParseError);
  CHECK_THROWS_AS(parse("foo(1)", {"x1"}), ParseError);
  CHECK_THROWS_AS(parse("1.", {"x1"}), ParseError);

  try {
    parse("x1 + phi", {"x1", "x2", "x3", "x4"});
    FAIL("expected unknown-identifier error");
  } catch (const ParseError& e) {
    CHECK(e.offset == 5);
    CHECK(std::string(e.what()).find("phi") != std::string::npos);
  }
}

TEST_CASE("power semantics") {
  const auto val = [](const std::string& src, double x) {
    return eval_value<1>(parse(src, {"x"}), Vec<1>{x});
  };
  CHECK(val("x^3", -2.0) == -8.0);    // integer exponent, negative base fine
  CHECK(val("x^-2", -2.0) == 0.25);
  CHECK(val("x^0", -5.0) == 1.0);
  CHECK(val("x^0.5", 4.0) == Catch::Approx(2.0));
  CHECK_THROWS_AS(val("x^0.5", -4.0), DomainError);
  CHECK_THROWS_AS(val("log(x)", -1.0), DomainError);
  CHECK_THROWS_AS(val("sqrt(x)", -1.0), DomainError);
  CHECK_THROWS_AS(val("1/x", 0.0), DomainError);

  // Runtime-integral exponent held in a parameter takes the integer path.
  const Expr e = parse("x^k", {"x"}, {"k"});
  CHECK(eval_value<1>(e, Vec<1>{-2.0}, {{"k", 3.0}}) == -8.0);
  CHECK_THROWS_AS(eval_value<1>(e, Vec<1>{-2.0}, {{"k", 0.5}}), DomainError);
}

TEST_CASE("unbound parameter is an error") {
  const Expr e = parse("a*x", {"x"}, {"a"});
  CHECK_THROWS_AS(eval_value<1>(e, Vec<1>{1.0}), EvalError);
  CHECK(eval_value<1>(e, Vec<1>{2.0}, {{"a", 3.0}}) == 6.0);
}

TEST_CASE("property: print then parse reproduces the tree") {
  AstGen gen(20260809, {"x1", "x2", "x3"}, {"kap"});
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Expr e = gen.gen(5);
    const std::string text = to_string(e);
    INFO("printed: " << text);
    const Expr back = parse(text, {"x1", "x2", "x3"}, {"kap"});
    REQUIRE(structurally_equal(e, back));
    ++checked;
  }
  CHECK(checked == 500);
}

TEST_CASE("structural equality distinguishes different trees") {
  const std::vector<std::string> c = {"x1", "x2"};
  CHECK(structurally_equal(parse("x1 + x2", c), parse("x1   +x2", c)));
  CHECK_FALSE(structurally_equal(parse("x1 + x2", c), parse("x2 + x1", c)));
  CHECK_FALSE(structurally_equal(parse("x1*x2", c), parse("x1/x2", c)));
  CHECK_FALSE(structurally_equal(parse("2", c), parse("2.5", c)));
}
