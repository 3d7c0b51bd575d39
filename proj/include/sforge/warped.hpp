#pragma once

#include "sforge/soliton.hpp"

namespace sforge {

enum class FiberKind { Sphere, Flat, Hyperbolic, SphereLine };

/// 3-dimensional fiber of a warped product. Space forms carry their sectional
/// curvature kappa; the sphere-times-line fiber is the designed non-Einstein
/// probe (constant scalar curvature, Ricci not proportional to the metric).
struct FiberSpec {
  FiberKind kind = FiberKind::Sphere;
  double kappa = 1.0;
  Chart<3> chart;
  bool einstein() const { return kind != FiberKind::SphereLine; }
};

inline const char* fiber_name(FiberKind k) {
  switch (k) {
    case FiberKind::Sphere: return "S3";
    case FiberKind::Flat: return "R3";
    case FiberKind::Hyperbolic: return "H3";
    case FiberKind::SphereLine: return "S2xE1";
  }
  return "?";
}

/// Builds a catalog fiber chart. Angular charts stay away from coordinate
/// singularities; the hyperbolic ball is restricted to radius 0.8.
inline FiberSpec make_fiber(FiberKind kind, double kappa = 1.0) {
  FiberSpec spec;
  spec.kind = kind;
  spec.kappa = kappa;
  const double pi = std::numbers::pi;
  switch (kind) {
    case FiberKind::Sphere: {
      if (!(kappa > 0)) throw ChartError("S3 fiber needs kappa > 0");
      const std::array<std::string, 3> coords = {"t1", "t2", "t3"};
      std::array<std::array<std::string, 3>, 3> m = {{{"a2", "0", "0"},
                                                      {"0", "a2*sin(t1)^2", "0"},
                                                      {"0", "0", "a2*sin(t1)^2*sin(t2)^2"}}};
      Box<3> box;
      box.range = {{{0.2, pi - 0.2}, {0.2, pi - 0.2}, {0.2, pi - 0.2}}};
      spec.chart = make_expr_chart<3>("S3", coords, box, parse_metric_exprs<3>(m, coords, {"a2"}),
                                      ParamMap{{"a2", 1.0 / kappa}});
      break;
    }
    case FiberKind::Flat: {
      spec.kappa = 0.0;
      const std::array<std::string, 3> coords = {"y1", "y2", "y3"};
      std::array<std::array<std::string, 3>, 3> m = {
          {{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}}};
      Box<3> box;
      box.range = {{{-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}}};
      spec.chart = make_expr_chart<3>("R3", coords, box, parse_metric_exprs<3>(m, coords));
      break;
    }
    case FiberKind::Hyperbolic: {
      if (!(kappa < 0)) throw ChartError("H3 fiber needs kappa < 0");
      const std::array<std::string, 3> coords = {"y1", "y2", "y3"};
      const std::string conf = "c/(1 - y1^2 - y2^2 - y3^2)^2";
      std::array<std::array<std::string, 3>, 3> m = {
          {{conf, "0", "0"}, {"0", conf, "0"}, {"0", "0", conf}}};
      Box<3> box;
      box.range = {{{-0.46, 0.46}, {-0.46, 0.46}, {-0.46, 0.46}}};
      spec.chart = make_expr_chart<3>("H3", coords, box, parse_metric_exprs<3>(m, coords, {"c"}),
                                      ParamMap{{"c", 4.0 / std::abs(kappa)}});
      break;
    }
    case FiberKind::SphereLine: {
      if (!(kappa > 0)) throw ChartError("S2xE1 fiber needs kappa > 0 for its sphere factor");
      const std::array<std::string, 3> coords = {"t", "p", "z"};
      std::array<std::array<std::string, 3>, 3> m = {
          {{"a2", "0", "0"}, {"0", "a2*sin(t)^2", "0"}, {"0", "0", "1"}}};
      Box<3> box;
      box.range = {{{0.2, pi - 0.2}, {0.2, pi - 0.2}, {-1.0, 1.0}}};
      spec.chart = make_expr_chart<3>("S2xE1", coords, box,
                                      parse_metric_exprs<3>(m, coords, {"a2"}),
                                      ParamMap{{"a2", 1.0 / kappa}});
      break;
    }
  }
  return spec;
}

inline FiberKind fiber_kind_from_name(const std::string& name) {
  if (name == "S3") return FiberKind::Sphere;
  if (name == "R3") return FiberKind::Flat;
  if (name == "H3") return FiberKind::Hyperbolic;
  if (name == "S2xE1") return FiberKind::SphereLine;
  throw ChartError("unknown fiber '" + name + "' (expected S3, R3, H3 or S2xE1)");
}

/// Warping function with two derivatives; fed either by an expression in r or
/// by an integrated profile.
struct Warp {
  std::function<std::array<double, 3>(double)> eval;  // φ, φ′, φ″
  bool from_profile = false;
};

inline Warp warp_from_expr(const Expr& phi, ParamMap params = {}) {
  return Warp{[phi, params](double r) {
    const Jet2<1> j = eval_jet2<1>(phi, Vec<1>{r}, params);
    return std::array<double, 3>{j.value, j.grad[0], j.h(0, 0)};
  }, false};
}

/// Warped product dr² + φ(r)² ḡ over a 3d fiber. The assembled metric has
/// g_rr = 1 and g_ra = 0 by construction, not numerically.
struct WarpedChart {
  Chart<4> chart;
  FiberSpec fiber;
  Warp warp;
  std::pair<double, double> interval{0, 1};

  Vec<3> fiber_point(const Vec<4>& x) const { return Vec<3>{x[1], x[2], x[3]}; }
};

namespace detail {

inline Jet2<4> embed_fiber_jet(const Jet2<3>& j) {
  Jet2<4> out;
  out.value = j.value;
  for (int i = 0; i < 3; ++i) out.grad[i + 1] = j.grad[i];
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k <= i; ++k) out.h(i + 1, k + 1) = j.h(i, k);
  return out;
}

inline Jet2<4> warp_squared_jet(const Warp& w, double r) {
  const auto [phi, dphi, ddphi] = w.eval(r);
  Jet2<4> out;
  out.value = phi * phi;
  out.grad[0] = 2.0 * phi * dphi;
  out.h(0, 0) = 2.0 * (dphi * dphi + phi * ddphi);
  return out;
}

} // namespace detail

inline WarpedChart build_warped(Warp warp, FiberSpec fiber, std::pair<double, double> interval,
                                std::string name = {}) {
  if (!(interval.second > interval.first))
    throw ChartError("warped interval must be nondegenerate");
  for (int s = 0; s <= 64; ++s) {
    const double r = interval.first + (interval.second - interval.first) * s / 64.0;
    if (!(warp.eval(r)[0] > 0.0))
      throw ChartError("warping function must stay positive on the interval");
  }

  WarpedChart wc;
  wc.fiber = fiber;
  wc.warp = warp;
  wc.interval = interval;

  Chart<4>& c = wc.chart;
  c.name = name.empty() ? std::string("warped-") + fiber_name(fiber.kind) : std::move(name);
  c.coords[0] = "r";
  for (int i = 0; i < 3; ++i) c.coords[i + 1] = fiber.chart.coords[i];
  c.domain.range[0] = interval;
  for (int i = 0; i < 3; ++i) c.domain.range[i + 1] = fiber.chart.domain.range[i];
  c.orientation = +1;
  c.profile_backed = wc.warp.from_profile;

  const MetricSource<3> fiber_metric = fiber.chart.metric;
  const Warp w = wc.warp;
  c.metric.jets = [fiber_metric, w](const Vec<4>& x) {
    const Vec<3> theta{x[1], x[2], x[3]};
    const MetricJets<3> fj = fiber_metric.jets(theta);
    const Jet2<4> phi2 = detail::warp_squared_jet(w, x[0]);
    MetricJets<4> out;
    out[0][0] = Jet2<4>::constant(1.0);
    for (int a = 0; a < 3; ++a) {
      out[0][a + 1] = Jet2<4>{};
      out[a + 1][0] = Jet2<4>{};
    }
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) {
        out[a + 1][b + 1] = phi2 * detail::embed_fiber_jet(fj[a][b]);
        if (b != a) out[b + 1][a + 1] = out[a + 1][b + 1];
      }
    return out;
  };
  c.metric.values = [fiber_metric, w](const Vec<4>& x) {
    const Vec<3> theta{x[1], x[2], x[3]};
    const Mat<3> fg = fiber_metric.values(theta);
    const double phi = w.eval(x[0])[0];
    Mat<4> out{};
    out[0][0] = 1.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) out[a + 1][b + 1] = phi * phi * fg[a][b];
    return out;
  };
  return wc;
}

struct WarpedWeylCheck {
  Mat3 lhs{};        // 2 W(∂r, θ_a, ∂r, θ_b), fiber-orthonormal components
  Mat3 rhs{};        // (R̄/3) ḡ_ab − R̄ic_ab, same frame
  double residual = 0;
  double riem_norm = 0;
  double lhs_norm = 0;
  double rhs_norm = 0;
};

/// Mixed-slot Weyl identity of a 4d warped product: the radial-fiber block of
/// the Weyl tensor is determined by the traceless Ricci of the fiber alone,
///   2 W(∇r, θ_a, ∇r, θ_b) = (R̄/3) ḡ(θ_a, θ_b) − R̄ic(θ_a, θ_b),
/// with no dependence on the warping function. The left side uses the 4d
/// pipeline, the right side the 3d fiber pipeline; independent code paths.
inline WarpedWeylCheck warped_weyl_check(const WarpedChart& wc, const Vec<4>& x,
                                         Backend backend = Backend::Jet) {
  const CurvatureBundle<4> b4 = curvature_bundle(wc.chart, x, backend);
  const Vec<3> theta = wc.fiber_point(x);
  const CurvatureBundle<3> b3 = curvature_bundle(wc.fiber.chart, theta, backend);

  Mat<3> lhs{}, rhs{};
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c) {
      lhs[a][c] = 2.0 * b4.W[0][a + 1][0][c + 1];
      rhs[a][c] = (b3.R / 3.0) * b3.g[a][c] - b3.Ric[a][c];
    }
  const Frame<3> fiber_frame = orthonormal_frame(b3.g);

  WarpedWeylCheck out;
  const Mat<3> lhs_f = to_frame(fiber_frame, lhs);
  const Mat<3> rhs_f = to_frame(fiber_frame, rhs);
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c) {
      out.lhs[a][c] = lhs_f[a][c];
      out.rhs[a][c] = rhs_f[a][c];
    }
  Mat<3> diff{};
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c) diff[a][c] = lhs_f[a][c] - rhs_f[a][c];
  out.residual = frobenius(diff);
  out.lhs_norm = frobenius(lhs_f);
  out.rhs_norm = frobenius(rhs_f);
  out.riem_norm = frame_norm(orthonormal_frame(b4.g), b4.Riem);
  return out;
}

struct LevelsetCheck {
  double r_level = 0;
  double spread = 0;       // relative spread of |∇f|² across the level set
  double mean = 0;
  int points = 0;
};

/// Spread of |∇f|² over fiber points of the level set f = c. For a radial
/// potential this is constant by construction; the engine recomputes it from
/// the assembled 4d metric inverse rather than from the profile.
inline LevelsetCheck levelset_spread(const WarpedChart& wc, const ScalarSource<4>& f, double c,
                                     int fiber_points = 24, std::uint64_t seed = 1) {
  Vec<4> probe{};
  probe[0] = 0.5 * (wc.interval.first + wc.interval.second);
  for (int i = 0; i < 3; ++i) {
    const auto [lo, hi] = wc.fiber.chart.domain.range[i];
    probe[i + 1] = 0.5 * (lo + hi);
  }
  const Jet2<4> probe_jet = f.jet(probe);
  for (int i = 1; i < 4; ++i)
    if (std::abs(probe_jet.grad[i]) > 1e-10 * (1.0 + std::abs(probe_jet.grad[0])))
      throw ChartError("level-set check requires a potential depending on r only");

  const double pad = 0.02 * (wc.interval.second - wc.interval.first);
  double lo = wc.interval.first + pad, hi = wc.interval.second - pad;
  auto value_at = [&](double r) {
    Vec<4> x = probe;
    x[0] = r;
    return f.value(x) - c;
  };
  double flo = value_at(lo);
  const double fhi = value_at(hi);
  if (flo * fhi > 0) throw ChartError("requested level value is not attained on the interval");
  for (int it = 0; it < 200 && flo != 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = value_at(mid);
    if (fm == 0.0) {
      lo = hi = mid;
      break;
    }
    if (flo * fm < 0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  const double r_level = flo == 0.0 ? lo : 0.5 * (lo + hi);
  {
    Vec<4> x = probe;
    x[0] = r_level;
    const Jet2<4> j = f.jet(x);
    if (std::abs(j.grad[0]) <= 1e-10)
      throw ChartError("level value is critical: |f'(r)| too small");
  }

  SampleRng rng(seed);
  LevelsetCheck out;
  out.r_level = r_level;
  double vmin = 0, vmax = 0, sum = 0;
  for (int s = 0; s < fiber_points; ++s) {
    Vec<4> x{};
    x[0] = r_level;
    for (int i = 0; i < 3; ++i) {
      const auto [flo_i, fhi_i] = wc.fiber.chart.domain.range[i];
      const double p = 0.05 * (fhi_i - flo_i);
      x[i + 1] = rng.uniform(flo_i + p, fhi_i - p);
    }
    const Mat<4> g = wc.chart.metric_values(x);
    const Mat<4> ginv = spd_inverse(g);
    const Jet2<4> j = f.jet(x);
    double v = 0;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) v += ginv[i][k] * j.grad[i] * j.grad[k];
    if (s == 0) {
      vmin = vmax = v;
    } else {
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
    sum += v;
    ++out.points;
  }
  out.mean = sum / out.points;
  out.spread = (vmax - vmin) / std::max(std::abs(out.mean), 1e-300);
  return out;
}

} // namespace sforge
