#pragma once

#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "sforge/expr.hpp"

namespace sforge {

class ChartError : public Error {
public:
  using Error::Error;
};

template <std::size_t N> struct Box {
  std::array<std::pair<double, double>, N> range{};

  bool contains(const Vec<N>& x) const {
    for (int i = 0; i < N; ++i)
      if (x[i] < range[i].first || x[i] > range[i].second) return false;
    return true;
  }
};

template <std::size_t N> using MetricJets = std::array<std::array<Jet2<N>, N>, N>;

/// Evaluates the metric components of a chart at a point. `jets` supplies
/// value + first + second coordinate derivatives analytically; `values`
/// supplies plain component values (used by the finite-difference backend).
template <std::size_t N> struct MetricSource {
  std::function<MetricJets<N>(const Vec<N>&)> jets;
  std::function<Mat<N>(const Vec<N>&)> values;
};

/// A coordinate patch: dimension N, coordinate names, domain box, metric.
/// `profile_backed` marks charts whose derivative data comes analytically
/// from an integrated profile; finite differences of such metrics measure
/// the dense-output interpolant rather than an independent route.
template <std::size_t N> struct Chart {
  std::string name;
  std::array<std::string, N> coords{};
  Box<N> domain{};
  int orientation = +1;
  bool profile_backed = false;
  MetricSource<N> metric;

  Mat<N> metric_values(const Vec<N>& x) const { return metric.values(x); }
};

/// Scalar field on a chart (potential functions). Same two-backend shape as
/// the metric source.
template <std::size_t N> struct ScalarSource {
  std::function<Jet2<N>(const Vec<N>&)> jet;
  std::function<double(const Vec<N>&)> value;
};

template <std::size_t N>
ScalarSource<N> scalar_from_expr(Expr e, ParamMap params = {}) {
  auto jet = [e, params](const Vec<N>& x) { return eval_jet2<N>(e, x, params); };
  auto value = [e, params](const Vec<N>& x) { return eval_value<N>(e, x, params); };
  return ScalarSource<N>{std::move(jet), std::move(value)};
}

template <std::size_t N>
ScalarSource<N> scalar_constant(double c) {
  auto jet = [c](const Vec<N>&) { return Jet2<N>::constant(c); };
  auto value = [c](const Vec<N>&) { return c; };
  return ScalarSource<N>{std::move(jet), std::move(value)};
}

/// Builds a metric source from an expression matrix. Components are stored
/// for i <= j and mirrored, so symmetry is exact. Structural symmetry of the
/// given matrix must have been checked by the caller (spec loader).
template <std::size_t N>
MetricSource<N> metric_from_exprs(std::array<std::array<Expr, N>, N> g, ParamMap params = {}) {
  struct Shared {
    std::array<std::array<Expr, N>, N> g;
    ParamMap params;
  };
  auto shared = std::make_shared<Shared>(Shared{std::move(g), std::move(params)});
  MetricSource<N> src;
  src.jets = [shared](const Vec<N>& x) {
    MetricJets<N> out;
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j) {
        out[i][j] = eval_jet2<N>(shared->g[i][j], x, shared->params);
        if (j != i) out[j][i] = out[i][j];
      }
    return out;
  };
  src.values = [shared](const Vec<N>& x) {
    Mat<N> out{};
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j) {
        out[i][j] = eval_value<N>(shared->g[i][j], x, shared->params);
        out[j][i] = out[i][j];
      }
    return out;
  };
  return src;
}

template <std::size_t N>
Chart<N> make_expr_chart(std::string name, std::array<std::string, N> coords, Box<N> domain,
                         std::array<std::array<Expr, N>, N> g, ParamMap params = {},
                         int orientation = +1) {
  Chart<N> c;
  c.name = std::move(name);
  c.coords = std::move(coords);
  c.domain = domain;
  c.orientation = orientation;
  c.metric = metric_from_exprs<N>(std::move(g), std::move(params));
  return c;
}

/// Parses an N×N matrix of expression strings sharing the chart coordinates.
template <std::size_t N>
std::array<std::array<Expr, N>, N> parse_metric_exprs(
    const std::array<std::array<std::string, N>, N>& src,
    const std::array<std::string, N>& coords, const std::vector<std::string>& params = {}) {
  std::vector<std::string> coord_list(coords.begin(), coords.end());
  std::array<std::array<Expr, N>, N> out;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) out[i][j] = parse(src[i][j], coord_list, params);
  return out;
}

// ---------------------------------------------------------------------------
// Seeded sampling. Points are drawn uniformly over the domain box shrunk by a
// 5% margin per side, which keeps stencils and frames away from chart
// boundaries. The generator mapping is fixed (not distribution-dependent) so
// reports are reproducible across standard libraries.
// ---------------------------------------------------------------------------

class SampleRng {
public:
  explicit SampleRng(std::uint64_t seed) : eng_(seed) {}
  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
  std::mt19937_64 eng_;
};

template <std::size_t N> struct SampleSet {
  std::vector<Vec<N>> points;
  int rejected = 0;            // non positive definite metric at the draw
  std::string diagnostic;      // first rejection reason, if any
};

template <std::size_t N>
SampleSet<N> sample_points(const Chart<N>& chart, int count, std::uint64_t seed,
                           double margin = 0.05) {
  SampleRng rng(seed);
  SampleSet<N> out;
  out.points.reserve(count);
  const int max_draws = count * 20 + 100;
  int draws = 0;
  while (static_cast<int>(out.points.size()) < count && draws < max_draws) {
    ++draws;
    Vec<N> x{};
    for (int i = 0; i < N; ++i) {
      const auto [lo, hi] = chart.domain.range[i];
      const double pad = margin * (hi - lo);
      x[i] = rng.uniform(lo + pad, hi - pad);
    }
    const Mat<N> g = chart.metric_values(x);
    if (!cholesky(g)) {
      ++out.rejected;
      if (out.diagnostic.empty()) {
        out.diagnostic = "metric not positive definite at a sampled point of " + chart.name;
      }
      continue;
    }
    out.points.push_back(x);
  }
  if (static_cast<int>(out.points.size()) < count)
    throw ChartError("sampling failed on chart '" + chart.name +
                     "': too many degenerate points; " + out.diagnostic);
  return out;
}

} // namespace sforge
