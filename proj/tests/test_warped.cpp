#include "test_helpers.hpp"

using namespace sforge;

TEST_CASE("build_warped: cylinder, cone and hyperbolic space") {
  // φ = 1 over the unit three-sphere: scalar curvature 6 everywhere.
  {
    const WarpedChart wc = build_warped(warp_from_expr(parse("1", {"r"})),
                                        make_fiber(FiberKind::Sphere, 1.0), {0.1, 3.0});
    for (const auto& x : sample_points(wc.chart, 8, 51).points)
      CHECK(curvature_bundle(wc.chart, x).R == Catch::Approx(6.0).margin(1e-8));
  }
  // φ = r over the unit three-sphere: the metric cone is flat.
  {
    const WarpedChart wc = build_warped(warp_from_expr(parse("r", {"r"})),
                                        make_fiber(FiberKind::Sphere, 1.0), {0.5, 3.0});
    for (const auto& x : sample_points(wc.chart, 8, 52).points) {
      const CurvatureBundle<4> b = curvature_bundle(wc.chart, x);
      CHECK(frame_norm(orthonormal_frame(b.g), b.Riem) <= 1e-8);
    }
  }
  // φ = cosh r over hyperbolic three-space: constant sectional curvature −1.
  {
    const WarpedChart wc = build_warped(warp_from_expr(parse("cosh(r)", {"r"})),
                                        make_fiber(FiberKind::Hyperbolic, -1.0), {-1.0, 1.0});
    SampleRng rng(53);
    for (const auto& x : sample_points(wc.chart, 6, 53).points) {
      const CurvatureBundle<4> b = curvature_bundle(wc.chart, x);
      for (int t = 0; t < 5; ++t) {
        Vec<4> u{}, v{};
        for (int i = 0; i < 4; ++i) {
          u[i] = rng.uniform(-1, 1);
          v[i] = rng.uniform(-1, 1);
        }
        CHECK(sectional_curvature(b, u, v) == Catch::Approx(-1.0).margin(1e-7));
      }
    }
  }
}

TEST_CASE("build_warped rejects nonpositive warping functions") {
  CHECK_THROWS_AS(build_warped(warp_from_expr(parse("r - 1", {"r"})),
                               make_fiber(FiberKind::Sphere, 1.0), {0.0, 2.0}),
                  ChartError);
  CHECK_THROWS_AS(build_warped(warp_from_expr(parse("1", {"r"})),
                               make_fiber(FiberKind::Sphere, 1.0), {2.0, 1.0}),
                  ChartError);
}

TEST_CASE("fiber catalog: space forms are Einstein, the product probe is not") {
  for (const auto& [kind, kappa] :
       std::vector<std::pair<FiberKind, double>>{{FiberKind::Sphere, 1.0},
                                                 {FiberKind::Sphere, 0.5},
                                                 {FiberKind::Flat, 0.0},
                                                 {FiberKind::Hyperbolic, -1.0}}) {
    const FiberSpec fiber = make_fiber(kind, kappa);
    for (const auto& t : sample_points(fiber.chart, 8, 54).points) {
      const CurvatureBundle<3> b = curvature_bundle(fiber.chart, t);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          CHECK(b.Ric[i][j] == Catch::Approx(2.0 * kappa * b.g[i][j]).margin(1e-8));
    }
  }
  const FiberSpec probe = make_fiber(FiberKind::SphereLine, 1.0);
  for (const auto& t : sample_points(probe.chart, 8, 55).points) {
    const CurvatureBundle<3> b = curvature_bundle(probe.chart, t);
    CHECK(b.R == Catch::Approx(2.0).margin(1e-8));
    Mat<3> dev{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) dev[i][j] = b.Ric[i][j] - (b.R / 3.0) * b.g[i][j];
    CHECK(frame_norm(orthonormal_frame(b.g), dev) > 0.1);
  }
  CHECK_THROWS_AS(make_fiber(FiberKind::Sphere, -1.0), ChartError);
  CHECK_THROWS_AS(make_fiber(FiberKind::Hyperbolic, 1.0), ChartError);
  CHECK_THROWS_AS(fiber_kind_from_name("T3"), ChartError);
}

TEST_CASE("warped Ricci closed form") {
  const WarpedChart wc = build_warped(warp_from_expr(parse("exp(0.3*r)", {"r"})),
                                      make_fiber(FiberKind::Sphere, 1.0), {0.0, 1.0});
  for (const auto& x : sample_points(wc.chart, 6, 56).points) {
    const CurvatureBundle<4> b = curvature_bundle(wc.chart, x);
    const auto [p, dp, ddp] = wc.warp.eval(x[0]);
    const Mat<3> fg = wc.fiber.chart.metric_values(wc.fiber_point(x));
    CHECK(b.Ric[0][0] == Catch::Approx(-3.0 * ddp / p).margin(1e-7));
    const double coef = 2.0 * 1.0 - p * ddp - 2.0 * dp * dp;
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 3; ++c)
        CHECK(b.Ric[a + 1][c + 1] == Catch::Approx(coef * fg[a][c]).margin(1e-7));
  }
}

TEST_CASE("mixed-slot Weyl identity: both sides vanish on space-form fibers") {
  for (const auto& [kind, kappa, phi] :
       std::vector<std::tuple<FiberKind, double, const char*>>{
           {FiberKind::Sphere, 1.0, "exp(r)"},
           {FiberKind::Flat, 0.0, "1 + 0.2*r^2"},
           {FiberKind::Hyperbolic, -1.0, "cosh(r)"}}) {
    const WarpedChart wc =
        build_warped(warp_from_expr(parse(phi, {"r"})), make_fiber(kind, kappa), {0.0, 1.0});
    for (const auto& x : sample_points(wc.chart, 6, 57).points) {
      const WarpedWeylCheck c = warped_weyl_check(wc, x);
      CHECK(c.rhs_norm <= 1e-8);
      CHECK(c.lhs_norm <= 1e-6 * (1.0 + c.riem_norm));
      CHECK(c.residual <= 1e-6 * (1.0 + c.riem_norm));
    }
  }
}

TEST_CASE("mixed-slot Weyl identity: non-Einstein fiber, both sides nonzero") {
  // φ = 1: the right side in a fiber-orthonormal frame is exactly
  // diag(−1/3, −1/3, 2/3) for the unit sphere-line fiber.
  {
    const WarpedChart wc = build_warped(warp_from_expr(parse("1", {"r"})),
                                        make_fiber(FiberKind::SphereLine, 1.0), {0.0, 1.0});
    for (const auto& x : sample_points(wc.chart, 8, 58).points) {
      const WarpedWeylCheck c = warped_weyl_check(wc, x);
      const double expect[3] = {-1.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0};
      for (int a = 0; a < 3; ++a)
        for (int b2 = 0; b2 < 3; ++b2) {
          CHECK(c.rhs[a][b2] == Catch::Approx(a == b2 ? expect[a] : 0.0).margin(1e-8));
          CHECK(c.lhs[a][b2] == Catch::Approx(a == b2 ? expect[a] : 0.0).margin(1e-7));
        }
      CHECK(c.residual <= 1e-7);
    }
  }
  // φ = e^r: the identity still holds with no dependence on the warp.
  {
    const WarpedChart wc = build_warped(warp_from_expr(parse("exp(r)", {"r"})),
                                        make_fiber(FiberKind::SphereLine, 1.0), {0.0, 1.0});
    for (const auto& x : sample_points(wc.chart, 8, 59).points) {
      const WarpedWeylCheck c = warped_weyl_check(wc, x);
      CHECK(c.lhs_norm > 0.1);
      CHECK(c.rhs_norm > 0.1);
      CHECK(c.residual <= 1e-6 * (1.0 + c.riem_norm));
    }
  }
}

TEST_CASE("level sets: radial potentials have constant gradient norm") {
  const CatalogEntry cyl = catalog_entry("cylinder-shrinker");
  const LevelsetCheck c = levelset_spread(*cyl.warped, cyl.soliton->potential, 1.0, 24, 60);
  CHECK(c.points >= 20);
  CHECK(c.r_level == Catch::Approx(1.0).margin(1e-9));
  CHECK(c.spread <= 1e-10);

  const CatalogEntry quasi = catalog_entry("quasi-cylinder");
  const double mid = quasi.soliton->potential.value(Vec<4>{0.5, 1.0, 1.0, 1.0});
  const LevelsetCheck cq = levelset_spread(*quasi.warped, quasi.soliton->potential, mid, 24, 61);
  CHECK(cq.spread <= 1e-10);
}

TEST_CASE("level sets: error paths") {
  const CatalogEntry cyl = catalog_entry("cylinder-shrinker");
  // Value outside the attained range.
  CHECK_THROWS_AS(levelset_spread(*cyl.warped, cyl.soliton->potential, 100.0), ChartError);
  // Potential depending on fiber coordinates is rejected.
  const ScalarSource<4> bad = scalar_from_expr<4>(
      parse("t1", {"r", "t1", "t2", "t3"}));
  CHECK_THROWS_AS(levelset_spread(*cyl.warped, bad, 1.0), ChartError);
}
