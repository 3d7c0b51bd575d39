#pragma once

#include <optional>

#include "sforge/profile.hpp"

namespace sforge {

/// A named catalog target: chart, optional potential data, and whether the
/// pair is expected to satisfy the soliton equation. Non-soliton entries are
/// curvature and duality probes; soliton-hypothesis checks run on them as
/// diagnostics only.
struct CatalogEntry {
  std::string name;
  std::string description;
  Chart<4> chart;
  std::optional<SolitonData> soliton;
  bool expect_soliton = false;
  std::optional<WarpedChart> warped;
};

inline std::vector<std::string> catalog_names() {
  return {"cylinder-shrinker", "flat-yamabe", "round-sphere-trivial",
          "quasi-cylinder",    "fubini-study", "s2xs2"};
}

namespace detail {

inline Chart<4> flat_chart() {
  const std::array<std::string, 4> coords = {"x1", "x2", "x3", "x4"};
  std::array<std::array<std::string, 4>, 4> m{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = (i == j) ? "1" : "0";
  Box<4> box;
  box.range = {{{-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}}};
  return make_expr_chart<4>("flat-R4", coords, box, parse_metric_exprs<4>(m, coords));
}

inline Chart<4> round_sphere_chart() {
  // Unit round sphere in a stereographic chart, g = 4 δ / (1+|x|²)².
  const std::array<std::string, 4> coords = {"x1", "x2", "x3", "x4"};
  const std::string conf = "4/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2";
  std::array<std::array<std::string, 4>, 4> m{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = (i == j) ? conf : "0";
  Box<4> box;
  box.range = {{{-0.8, 0.8}, {-0.8, 0.8}, {-0.8, 0.8}, {-0.8, 0.8}}};
  return make_expr_chart<4>("round-S4", coords, box, parse_metric_exprs<4>(m, coords));
}

inline Chart<4> product_spheres_chart() {
  const double pi = std::numbers::pi;
  const std::array<std::string, 4> coords = {"t1", "p1", "t2", "p2"};
  std::array<std::array<std::string, 4>, 4> m{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = "0";
  m[0][0] = "1";
  m[1][1] = "sin(t1)^2";
  m[2][2] = "1";
  m[3][3] = "sin(t2)^2";
  Box<4> box;
  box.range = {{{0.2, pi - 0.2}, {0.2, pi - 0.2}, {0.2, pi - 0.2}, {0.2, pi - 0.2}}};
  return make_expr_chart<4>("S2xS2", coords, box, parse_metric_exprs<4>(m, coords));
}

inline Chart<4> fubini_study_chart() {
  // Complex projective plane in an affine chart, z1 = x1+ix2, z2 = x3+ix4;
  // the coordinate order carries the complex orientation.
  const std::array<std::string, 4> coords = {"x1", "x2", "x3", "x4"};
  const std::string den = "(1 + x1^2 + x2^2 + x3^2 + x4^2)^2";
  std::array<std::array<std::string, 4>, 4> m{};
  m[0][0] = "(1 + x3^2 + x4^2)/" + den;
  m[1][1] = "(1 + x3^2 + x4^2)/" + den;
  m[2][2] = "(1 + x1^2 + x2^2)/" + den;
  m[3][3] = "(1 + x1^2 + x2^2)/" + den;
  m[0][1] = m[1][0] = "0";
  m[2][3] = m[3][2] = "0";
  m[0][2] = m[2][0] = "-(x1*x3 + x2*x4)/" + den;
  m[1][3] = m[3][1] = "-(x1*x3 + x2*x4)/" + den;
  m[0][3] = m[3][0] = "(x2*x3 - x1*x4)/" + den;
  m[1][2] = m[2][1] = "(x1*x4 - x2*x3)/" + den;
  Box<4> box;
  box.range = {{{-0.7, 0.7}, {-0.7, 0.7}, {-0.7, 0.7}, {-0.7, 0.7}}};
  return make_expr_chart<4>("fubini-study", coords, box, parse_metric_exprs<4>(m, coords));
}

inline WarpedChart cylinder_chart(std::pair<double, double> interval) {
  const Expr one = parse("1", {"r"});
  return build_warped(warp_from_expr(one), make_fiber(FiberKind::Sphere, 1.0), interval,
                      "cylinder-RxS3");
}

inline ScalarSource<4> potential_on(const Chart<4>& chart, const std::string& expr_src) {
  std::vector<std::string> coords(chart.coords.begin(), chart.coords.end());
  return scalar_from_expr<4>(parse(expr_src, coords));
}

} // namespace detail

inline CatalogEntry catalog_entry(const std::string& name) {
  CatalogEntry e;
  e.name = name;
  const auto finish = [&e] {
    e.chart.name = e.name;
    if (e.warped) e.warped->chart.name = e.name;
  };
  if (name == "cylinder-shrinker") {
    e.description = "R x S3 cylinder, f = r, lambda = 6";
    WarpedChart wc = detail::cylinder_chart({0.1, 3.0});
    e.chart = wc.chart;
    e.warped = std::move(wc);
    SolitonData s;
    s.potential = detail::potential_on(e.chart, "r");
    s.lambda = 6.0;
    e.soliton = std::move(s);
    e.expect_soliton = true;
  } else if (name == "flat-yamabe") {
    e.description = "flat R4, f = |x|^2, lambda = -2";
    e.chart = detail::flat_chart();
    SolitonData s;
    s.potential = detail::potential_on(e.chart, "x1^2 + x2^2 + x3^2 + x4^2");
    s.lambda = -2.0;
    e.soliton = std::move(s);
    e.expect_soliton = true;
  } else if (name == "round-sphere-trivial") {
    e.description = "unit round S4, constant potential, lambda = 12";
    e.chart = detail::round_sphere_chart();
    SolitonData s;
    s.potential = scalar_constant<4>(0.0);
    s.lambda = 12.0;
    e.soliton = std::move(s);
    e.expect_soliton = true;
  } else if (name == "quasi-cylinder") {
    e.description = "R x S3 cylinder, f = -2 log(1 - r/2), lambda = 6, m = 2";
    WarpedChart wc = detail::cylinder_chart({0.0, 1.0});
    e.chart = wc.chart;
    e.warped = std::move(wc);
    SolitonData s;
    s.potential = detail::potential_on(e.chart, "-2*log(1 - r/2)");
    s.lambda = 6.0;
    s.m = 2.0;
    e.soliton = std::move(s);
    e.expect_soliton = true;
  } else if (name == "fubini-study") {
    e.description = "Fubini-Study metric, duality probe (not a soliton)";
    e.chart = detail::fubini_study_chart();
    SolitonData s;
    s.potential = scalar_constant<4>(0.0);
    s.lambda = 0.0;
    e.soliton = std::move(s);
    e.expect_soliton = false;
  } else if (name == "s2xs2") {
    e.description = "S2 x S2 product, curvature probe with f = t1 (not a soliton)";
    e.chart = detail::product_spheres_chart();
    SolitonData s;
    s.potential = detail::potential_on(e.chart, "t1");
    s.lambda = 0.0;
    e.soliton = std::move(s);
    e.expect_soliton = false;
  } else {
    throw Error("unknown catalog entry '" + name + "'");
  }
  finish();
  return e;
}

/// Fixed synthesized-soliton seeds used by the catalog-wide suite: a plain
/// profile, a second plain profile started off the cylinder trajectory, and a
/// quasi profile with finite m.
struct SynthSeed {
  std::string name;
  ProfileState init;
  ProfileParams params;
  std::pair<double, double> interval;
};

inline std::vector<SynthSeed> synthesized_seeds() {
  return {
      {"synth-yamabe-a", {0.0, 1.0, 0.3}, {6.0, std::numeric_limits<double>::infinity(), 1.0},
       {0.0, 0.8}},
      {"synth-yamabe-b", {0.2, 0.9, -0.1}, {6.0, std::numeric_limits<double>::infinity(), 1.0},
       {0.0, 0.8}},
      {"synth-quasi", {0.0, 1.0, 0.6}, {6.0, 2.0, 1.0}, {0.0, 0.8}},
  };
}

} // namespace sforge
