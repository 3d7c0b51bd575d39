#include <sstream>

#include "test_helpers.hpp"

using namespace sforge;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double quasi_closed_form(double r, double m) { return -m * std::log(1.0 - r / m); }

} // namespace

TEST_CASE("profile right side: stationary closed forms") {
  // Cylinder: f = r is a fixed point of the flow.
  CHECK(profile_rhs({0.0, 1.0, 0.0}, {6.0, kInf, 1.0}) == Catch::Approx(0.0).margin(1e-15));
  // Flat cone: f = r²/2, φ = r solves the expanding case.
  CHECK(profile_rhs({0.5, 1.0, 1.0}, {-1.0, kInf, 1.0}) == Catch::Approx(0.0).margin(1e-15));
  // Quasi cylinder at r = 0: third derivative of −m log(1 − r/m) is 2/m².
  CHECK(profile_rhs({0.0, 1.0, 0.5}, {6.0, 2.0, 1.0}) == Catch::Approx(0.5).margin(1e-14));
  // Critical point rejected.
  CHECK_THROWS_AS(profile_rhs({0.0, -1.0, 0.0}, {6.0, kInf, 1.0}), ProfileError);
}

TEST_CASE("integration reproduces closed-form trajectories") {
  // f = r over a long interval.
  {
    const SolitonProfile p = integrate_profile({0.0, 1.0, 0.0}, {6.0, kInf, 1.0}, {0.0, 5.0});
    REQUIRE(p.stop == ProfileStop::Completed);
    for (double r = 0.1; r < 5.0; r += 0.37) {
      const ProfileState s = p.state_at(r);
      CHECK(std::abs(s.f - r) <= 1e-10);
      CHECK(std::abs(s.f1 - 1.0) <= 1e-10);
      CHECK(std::abs(s.f2) <= 1e-10);
    }
  }
  // Quasi cylinder against −m log(1 − r/m) on [0, 1].
  {
    const SolitonProfile p = integrate_profile({0.0, 1.0, 0.5}, {6.0, 2.0, 1.0}, {0.0, 1.0});
    REQUIRE(p.stop == ProfileStop::Completed);
    for (double r = 0.05; r < 1.0; r += 0.083) {
      const ProfileState s = p.state_at(r);
      CHECK(std::abs(s.f - quasi_closed_form(r, 2.0)) <= 1e-9);
    }
  }
}

TEST_CASE("fixed-step integration converges at 4th order") {
  const ProfileParams params{6.0, 2.0, 1.0};
  const auto err_at_one = [&](double h) {
    StepControl ctl;
    ctl.adaptive = false;
    ctl.fixed_h = h;
    const SolitonProfile p = integrate_profile({0.0, 1.0, 0.5}, params, {0.0, 1.0}, ctl);
    return std::abs(p.y.back().f - quasi_closed_form(1.0, 2.0));
  };
  const double e1 = err_at_one(0.05);
  const double e2 = err_at_one(0.025);
  const double ratio = e1 / e2;
  INFO("errors " << e1 << " " << e2 << " ratio " << ratio);
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("seeded random admissible starts assemble into solitons") {
  SampleRng rng(2024);
  int produced = 0;
  for (int trial = 0; trial < 5; ++trial) {
    ProfileState init;
    init.f = rng.uniform(-0.5, 0.5);
    init.f1 = rng.uniform(0.7, 1.3);
    init.f2 = rng.uniform(-0.2, 0.4);
    const ProfileParams params{6.0, kInf, 1.0};
    const SolitonProfile p = integrate_profile(init, params, {0.0, 0.8});
    if (p.r.size() < 8) continue;
    SynthesizedSoliton syn = assemble_soliton(SolitonProfile(p), "random-synth");
    for (const auto& x : sample_points(syn.warped.chart, 50, 62 + trial).points) {
      const CurvatureBundle<4> b = curvature_bundle(syn.warped.chart, x);
      const Jet2<4> f = syn.soliton.potential.jet(x);
      const double res = frame_norm(orthonormal_frame(b.g),
                                    soliton_residual(b, f, syn.soliton.lambda, syn.soliton.inv_m()));
      REQUIRE(res <= 1e-9);
    }
    ++produced;
  }
  CHECK(produced >= 3);
}

TEST_CASE("dense-output derivatives are the derivatives of the dense output") {
  // f1 and f2 from the interpolant must match central differences of its own
  // value field; an error in any Hermite basis polynomial shows up here.
  const SolitonProfile p = integrate_profile({0.0, 1.0, 0.3}, {6.0, kInf, 1.0}, {0.0, 0.8});
  REQUIRE(p.stop == ProfileStop::Completed);
  const double h = 1e-5;
  for (double r = 0.01; r <= 0.79; r += 0.0137) {
    const ProfileState s = p.state_at(r);
    const double fp = p.state_at(r + h).f;
    const double fm = p.state_at(r - h).f;
    const double d1 = (fp - fm) / (2 * h);
    const double d2 = (fp - 2 * s.f + fm) / (h * h);
    CHECK(s.f1 == Catch::Approx(d1).margin(1e-8));
    CHECK(s.f2 == Catch::Approx(d2).margin(1e-5));
  }
}

TEST_CASE("jet and finite-difference backends stay close on profile charts") {
  // The finite-difference route differentiates the dense output itself, so
  // the comparison bounds the interpolant's equation defect.
  SynthesizedSoliton syn = assemble_soliton(
      integrate_profile({0.0, 1.0, 0.3}, {6.0, kInf, 1.0}, {0.0, 0.8}), "synth-fd");
  for (const auto& x : sample_points(syn.warped.chart, 6, 71).points) {
    const CurvatureBundle<4> a = curvature_bundle(syn.warped.chart, x, Backend::Jet);
    const CurvatureBundle<4> b = curvature_bundle(syn.warped.chart, x, Backend::Fd);
    Ten4<4> d{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) d[i][j][k][l] = a.Riem[i][j][k][l] - b.Riem[i][j][k][l];
    CHECK(frobenius(d) <= 1e-4 * (1.0 + frobenius(a.Riem)));
  }
}

TEST_CASE("warp chain is consistent with the state everywhere") {
  const SolitonProfile p = integrate_profile({0.0, 1.0, 0.3}, {6.0, kInf, 1.0}, {0.0, 0.8});
  REQUIRE(p.stop == ProfileStop::Completed);
  for (double r = 0.0; r <= 0.8; r += 0.05) {
    const ProfileState s = p.state_at(r);
    const auto [phi, dphi, ddphi] = p.warp_at(r);
    CHECK(std::abs(phi - s.f1 * std::exp(-s.f * p.params.inv_m())) <= 1e-12 * (1.0 + phi));
    CHECK(phi > 0.0);
    CHECK(s.f1 > 0.0);
  }
}

TEST_CASE("finite m converges to the plain flow as m grows") {
  const ProfileState init{0.0, 1.0, 0.2};
  const SolitonProfile plain = integrate_profile(init, {6.0, kInf, 1.0}, {0.0, 1.0});
  const SolitonProfile big_m = integrate_profile(init, {6.0, 1e6, 1.0}, {0.0, 1.0});
  REQUIRE(plain.stop == ProfileStop::Completed);
  REQUIRE(big_m.stop == ProfileStop::Completed);
  double sup = 0;
  for (double r = 0.0; r <= 1.0; r += 0.02)
    sup = std::max(sup, std::abs(plain.state_at(r).f - big_m.state_at(r).f));
  CHECK(sup > 0.0);
  CHECK(sup <= 1e-4);  // O(1/m) with a modest constant
}

TEST_CASE("integration halts at critical points with a partial profile") {
  const SolitonProfile p = integrate_profile({0.0, 0.4, -5.0}, {6.0, kInf, 1.0}, {0.0, 2.0});
  CHECK(p.stop != ProfileStop::Completed);
  CHECK_FALSE(p.note.empty());
  CHECK(p.r.size() >= 1);
  CHECK(p.r.back() < 2.0);
  // Evaluating beyond the reached interval is an error.
  if (p.r.size() >= 2) CHECK_THROWS_AS(p.state_at(1.99), ProfileError);
}

TEST_CASE("profile csv round trip") {
  const SolitonProfile p = integrate_profile({0.0, 1.0, 0.5}, {6.0, 2.0, 1.0}, {0.0, 1.0});
  std::stringstream ss;
  write_profile_csv(ss, p);
  const std::string text = ss.str();
  CHECK(text.rfind("r,f,f',f'',phi,phi',phi''\n", 0) == 0);

  std::stringstream in(text);
  const SolitonProfile back = read_profile_csv(in, p.params);
  REQUIRE(back.r.size() == p.r.size());
  for (std::size_t i = 0; i < p.r.size(); ++i) {
    CHECK(back.r[i] == p.r[i]);
    CHECK(back.y[i].f == p.y[i].f);
    CHECK(back.y[i].f1 == p.y[i].f1);
    CHECK(back.y[i].f2 == p.y[i].f2);
  }

  // A corrupted phi column is caught on load.
  std::string bad = text;
  const std::size_t second_row = bad.find('\n', bad.find('\n') + 1) + 1;
  std::size_t col = second_row;
  for (int commas = 0; commas < 4; ++commas) col = bad.find(',', col) + 1;
  bad.replace(col, bad.find(',', col) - col, "99.5");
  std::stringstream corrupt(bad);
  CHECK_THROWS_AS(read_profile_csv(corrupt, p.params), ProfileError);

  std::stringstream empty("not,a,header\n");
  CHECK_THROWS_AS(read_profile_csv(empty, p.params), ProfileError);
}

TEST_CASE("assembly guards") {
  SolitonProfile tiny;
  tiny.params = {6.0, kInf, 1.0};
  tiny.r = {0.0, 0.1};
  tiny.y = {{0, 1, 0}, {0.1, 1, 0}};
  CHECK_THROWS_AS(assemble_soliton(std::move(tiny)), ProfileError);
  CHECK_THROWS_AS(integrate_profile({0.0, -1.0, 0.0}, {6.0, kInf, 1.0}, {0.0, 1.0}),
                  ProfileError);
  CHECK_THROWS_AS(integrate_profile({0.0, 1.0, 0.0}, {6.0, 0.0, 1.0}, {0.0, 1.0}), Error);
}
