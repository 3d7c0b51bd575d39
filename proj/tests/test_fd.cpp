#include "test_helpers.hpp"

using namespace sforge;

TEST_CASE("fd: bilinear cross derivative is exact to rounding") {
  const Expr e = parse("x1*x2", {"x1", "x2"});
  const Jet2<2> j = eval_fd<2>(e, Vec<2>{1.0, 1.0}, 1e-3);
  CHECK(j.h(0, 1) == Catch::Approx(1.0).margin(1e-8));
  CHECK(j.h(0, 0) == Catch::Approx(0.0).margin(1e-8));
  CHECK(j.grad[0] == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("fd: 4th-order stencil accuracy on exp") {
  const Expr e = parse("exp(x1)", {"x1"});
  const Jet2<1> j = eval_fd<1>(e, Vec<1>{0.0}, 1e-3);
  CHECK(std::abs(j.grad[0] - 1.0) < 1e-10);
}

TEST_CASE("fd: gradient error shrinks ~16x when h halves") {
  const Expr e = parse("sin(x1)*exp(x2)", {"x1", "x2"});
  const Vec<2> x{0.3, 0.4};
  const Jet2<2> exact = eval_jet2<2>(e, x);
  const auto grad_err = [&](double h) {
    const Jet2<2> fd = eval_fd<2>(e, x, h);
    return std::max(std::abs(fd.grad[0] - exact.grad[0]), std::abs(fd.grad[1] - exact.grad[1]));
  };
  const double e1 = grad_err(0.08);
  const double e2 = grad_err(0.04);
  const double ratio = e1 / e2;
  INFO("errors " << e1 << " " << e2 << " ratio " << ratio);
  CHECK(ratio > 8.0);
  CHECK(ratio < 32.0);
}

TEST_CASE("fd agrees with jets on smooth probe expressions") {
  SampleRng rng(99);
  int points = 0;
  for (const auto& [expr, box] : sforge::testing::smooth_probe_exprs()) {
    for (int t = 0; t < 20; ++t) {
      Vec<4> x{};
      for (int i = 0; i < 4; ++i) {
        const auto [lo, hi] = box.range[i];
        x[i] = rng.uniform(lo + 0.05, hi - 0.05);
      }
      const Jet2<4> jet = eval_jet2<4>(expr, x);
      const Jet2<4> fd = eval_fd<4>(expr, x, 1e-4);
      for (int i = 0; i < 4; ++i) {
        REQUIRE(std::abs(fd.grad[i] - jet.grad[i]) <= 1e-6 * (1.0 + std::abs(jet.grad[i])));
        for (int k = 0; k <= i; ++k)
          REQUIRE(std::abs(fd.h(i, k) - jet.h(i, k)) <= 1e-6 * (1.0 + std::abs(jet.h(i, k))));
      }
      ++points;
    }
  }
  CHECK(points == 100);
}

TEST_CASE("fd: invalid step is rejected") {
  const Expr e = parse("x1", {"x1"});
  CHECK_THROWS_AS(eval_fd<1>(e, Vec<1>{0.0}, 0.0), EvalError);
  CHECK_THROWS_AS(eval_fd<1>(e, Vec<1>{0.0}, -1e-4), EvalError);
}
