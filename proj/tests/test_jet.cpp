#include "test_helpers.hpp"

using namespace sforge;
using sforge::testing::AstGen;
using sforge::testing::SymbolicEval;

TEST_CASE("jet evaluation of polynomials is exact") {
  const Expr sq = parse("x1^2", {"x1"});
  const Jet2<1> j = eval_jet2<1>(sq, Vec<1>{3.0});
  CHECK(j.value == 9.0);
  CHECK(j.grad[0] == 6.0);
  CHECK(j.h(0, 0) == 2.0);

  const Expr s = parse("sin(x1)", {"x1"});
  const Jet2<1> js = eval_jet2<1>(s, Vec<1>{0.0});
  CHECK(js.value == 0.0);
  CHECK(js.grad[0] == 1.0);
  CHECK(js.h(0, 0) == 0.0);
}

TEST_CASE("jet quotient at an interior point") {
  const Expr e = parse("1/(1 - x1/4)", {"x1"});
  const Jet2<1> j = eval_jet2<1>(e, Vec<1>{0.0});
  CHECK(j.value == 1.0);
  CHECK(j.grad[0] == Catch::Approx(0.25).epsilon(1e-14));
  CHECK(j.h(0, 0) == Catch::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("hessian storage is symmetric by construction") {
  const Expr e = parse("x1*x2^2 + exp(x1*x3)", {"x1", "x2", "x3"});
  const Jet2<3> j = eval_jet2<3>(e, Vec<3>{0.3, -0.7, 0.2});
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) CHECK(j.h(i, k) == j.h(k, i));
}

TEST_CASE("property: jets match direct symbolic differentiation") {
  // Random trees of depth <= 4, derivatives checked against the calculus
  // rules applied recursively (an independent code path).
  AstGen gen(77001, {"x1", "x2", "x3"}, {"kap"});
  SampleRng rng(4242);
  const std::vector<double> params = {1.25};
  const SymbolicEval sym{params};
  int successes = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const Expr e = gen.gen(4);
    const Vec<3> x{rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9)};
    const std::vector<double> xv(x.begin(), x.end());
    Jet2<3> j;
    try {
      j = eval_jet2<3>(e, x, {{"kap", params[0]}});
    } catch (const Error&) {
      continue;  // domain violation in a random tree; skip
    }
    const double v = sym.value(e.root(), xv);
    if (!std::isfinite(v) || std::abs(v) > 1e6) continue;
    INFO("expr: " << to_string(e));
    REQUIRE(j.value == Catch::Approx(v).margin(1e-9 * (1.0 + std::abs(v))));
    for (int i = 0; i < 3; ++i) {
      const double d = sym.d1(e.root(), i, xv);
      if (!std::isfinite(d) || std::abs(d) > 1e8) goto next_trial;
      REQUIRE(j.grad[i] == Catch::Approx(d).margin(1e-8 * (1.0 + std::abs(d))));
      for (int k = 0; k <= i; ++k) {
        const double dd = sym.d2(e.root(), i, k, xv);
        if (!std::isfinite(dd) || std::abs(dd) > 1e10) goto next_trial;
        REQUIRE(j.h(i, k) == Catch::Approx(dd).margin(1e-6 * (1.0 + std::abs(dd))));
      }
    }
    ++successes;
  next_trial:;
  }
  CHECK(successes >= 200);
}

TEST_CASE("jet arithmetic rules hold exactly for simple pairs") {
  // (a·b)' = a'b + ab' with a = sin(x), b = x^2 at a generic point.
  const Vec<1> x{0.7};
  const Jet2<1> a = eval_jet2<1>(parse("sin(x)", {"x"}), x);
  const Jet2<1> b = eval_jet2<1>(parse("x^2", {"x"}), x);
  const Jet2<1> prod = a * b;
  CHECK(prod.grad[0] == a.grad[0] * b.value + a.value * b.grad[0]);
  CHECK(prod.h(0, 0) ==
        a.h(0, 0) * b.value + 2.0 * a.grad[0] * b.grad[0] + a.value * b.h(0, 0));

  const Jet2<1> quot = a / b;
  CHECK(quot.value == a.value / b.value);
  // Quotient rule reassembled: a = q·b.
  const Jet2<1> back = quot * b;
  CHECK(back.grad[0] == Catch::Approx(a.grad[0]).epsilon(1e-14));
  CHECK(back.h(0, 0) == Catch::Approx(a.h(0, 0)).epsilon(1e-13));
}

TEST_CASE("non-finite evaluation raises instead of returning NaN") {
  const Expr e = parse("log(x1 - 1)", {"x1"});
  CHECK_THROWS_AS(eval_jet2<1>(e, Vec<1>{0.5}), DomainError);
  const Expr big = parse("exp(exp(exp(x1)))", {"x1"});
  CHECK_THROWS_AS(eval_jet2<1>(big, Vec<1>{100.0}), DomainError);
}
