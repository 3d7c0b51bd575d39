#pragma once

#include "sforge/chart.hpp"

namespace sforge {

enum class Backend { Jet, Fd };

inline constexpr double kDefaultFdStep = 1e-4;

/// Per-point curvature record. Index conventions, fixed by the unit-sphere
/// anchor (sectional curvature +1, R_ijij = +1 in orthonormal frames):
///   Γ^k_ij   = ½ g^{kl} (∂_i g_jl + ∂_j g_il − ∂_l g_ij)
///   R_ijkl   = g_lm (∂_j Γ^m_ik − ∂_i Γ^m_jk + Γ^m_jp Γ^p_ik − Γ^m_ip Γ^p_jk)
///   Ric_ik   = g^{jl} R_ijkl,   R = g^{ik} Ric_ik
/// so that constant curvature K gives R_ijkl = K (g_ik g_jl − g_il g_jk).
/// See docs/conventions.md for the full sign ledger.
template <std::size_t N> struct CurvatureBundle {
  Vec<N> point{};
  Mat<N> g{};
  Mat<N> g_inv{};
  Ten3<N> Gamma{};  // Gamma[k][i][j], symmetric in (i, j)
  Ten4<N> Riem{};   // fully covariant R_ijkl
  Mat<N> Ric{};
  double R = 0;
  Ten4<N> W{};      // Weyl, fully covariant
};

/// Metric component jets at a point, either analytic or by 4th-order central
/// differences of the component values (step h·(1+|xᵢ|) per coordinate).
template <std::size_t N>
MetricJets<N> metric_jets(const Chart<N>& chart, const Vec<N>& x, Backend backend,
                          double h = kDefaultFdStep) {
  if (backend == Backend::Jet) return chart.metric.jets(x);

  Vec<N> step{};
  for (int i = 0; i < N; ++i) step[i] = h * (1.0 + std::abs(x[i]));

  static constexpr std::array<int, 4> off = {-2, -1, 1, 2};
  static constexpr std::array<double, 4> w1 = {1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};

  const Mat<N> g0 = chart.metric.values(x);
  MetricJets<N> out;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) out[i][j].value = g0[i][j];

  std::array<std::array<Mat<N>, 4>, N> shifted;
  for (int c = 0; c < N; ++c) {
    for (int s = 0; s < 4; ++s) {
      Vec<N> xs = x;
      xs[c] += off[s] * step[c];
      shifted[c][s] = chart.metric.values(xs);
    }
  }
  for (int c = 0; c < N; ++c) {
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j) {
        double d1 = 0;
        for (int s = 0; s < 4; ++s) d1 += w1[s] * shifted[c][s][i][j];
        const double grad = d1 / step[c];
        out[i][j].grad[c] = grad;
        const double d2 = (-shifted[c][3][i][j] + 16.0 * shifted[c][2][i][j] - 30.0 * g0[i][j] +
                           16.0 * shifted[c][1][i][j] - shifted[c][0][i][j]) /
                          (12.0 * step[c] * step[c]);
        out[i][j].h(c, c) = d2;
      }
  }
  for (int c = 0; c < N; ++c) {
    for (int d = 0; d < c; ++d) {
      for (int s = 0; s < 4; ++s)
        for (int t = 0; t < 4; ++t) {
          Vec<N> xs = x;
          xs[c] += off[s] * step[c];
          xs[d] += off[t] * step[d];
          const Mat<N> gst = chart.metric.values(xs);
          for (int i = 0; i < N; ++i)
            for (int j = i; j < N; ++j)
              out[i][j].h(c, d) += w1[s] * w1[t] * gst[i][j] / (step[c] * step[d]);
        }
    }
  }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < i; ++j) out[i][j] = out[j][i];
  return out;
}

template <std::size_t N>
Ten3<N> christoffel_from_jets(const MetricJets<N>& mj, const Mat<N>& g_inv) {
  Ten3<N> gamma{};
  for (int k = 0; k < N; ++k)
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j) {
        double s = 0;
        for (int l = 0; l < N; ++l)
          s += g_inv[k][l] * (mj[j][l].grad[i] + mj[i][l].grad[j] - mj[i][j].grad[l]);
        gamma[k][i][j] = 0.5 * s;
        gamma[k][j][i] = gamma[k][i][j];
      }
  return gamma;
}

template <std::size_t N>
CurvatureBundle<N> curvature_bundle(const Chart<N>& chart, const Vec<N>& x,
                                    Backend backend = Backend::Jet,
                                    double fd_step = kDefaultFdStep) {
  static_assert(N >= 3, "curvature pipeline supports dimensions 3 and 4");
  if (!chart.domain.contains(x))
    throw ChartError("point outside the domain of chart '" + chart.name + "'");

  const MetricJets<N> mj = metric_jets(chart, x, backend, fd_step);

  CurvatureBundle<N> b;
  b.point = x;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) b.g[i][j] = mj[i][j].value;
  if (!cholesky(b.g))
    throw ChartError("metric not positive definite at a point of chart '" + chart.name + "'");
  b.g_inv = spd_inverse(b.g);
  b.Gamma = christoffel_from_jets(mj, b.g_inv);

  // ∂_m g^{kl} = −g^{ka} (∂_m g_ab) g^{bl}
  Ten3<N> dginv{};
  for (int m = 0; m < N; ++m)
    for (int k = 0; k < N; ++k)
      for (int l = k; l < N; ++l) {
        double s = 0;
        for (int a = 0; a < N; ++a)
          for (int c = 0; c < N; ++c) s += b.g_inv[k][a] * mj[a][c].grad[m] * b.g_inv[c][l];
        dginv[m][k][l] = -s;
        dginv[m][l][k] = -s;
      }

  // dGamma[m][k][i][j] = ∂_m Γ^k_ij
  Ten4<N> dGamma{};
  for (int m = 0; m < N; ++m)
    for (int k = 0; k < N; ++k)
      for (int i = 0; i < N; ++i)
        for (int j = i; j < N; ++j) {
          double s = 0;
          for (int l = 0; l < N; ++l) {
            s += dginv[m][k][l] * (mj[j][l].grad[i] + mj[i][l].grad[j] - mj[i][j].grad[l]);
            s += b.g_inv[k][l] * (mj[j][l].h(m, i) + mj[i][l].h(m, j) - mj[i][j].h(m, l));
          }
          dGamma[m][k][i][j] = 0.5 * s;
          dGamma[m][k][j][i] = dGamma[m][k][i][j];
        }

  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) {
          double s = 0;
          for (int m = 0; m < N; ++m) {
            double up = dGamma[j][m][i][k] - dGamma[i][m][j][k];
            for (int p = 0; p < N; ++p)
              up += b.Gamma[m][j][p] * b.Gamma[p][i][k] - b.Gamma[m][i][p] * b.Gamma[p][j][k];
            s += b.g[l][m] * up;
          }
          b.Riem[i][j][k][l] = s;
        }

  for (int i = 0; i < N; ++i)
    for (int k = 0; k < N; ++k) {
      double s = 0;
      for (int j = 0; j < N; ++j)
        for (int l = 0; l < N; ++l) s += b.g_inv[j][l] * b.Riem[i][j][k][l];
      b.Ric[i][k] = s;
    }
  b.R = 0;
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < N; ++k) b.R += b.g_inv[i][k] * b.Ric[i][k];

  const double c1 = 1.0 / (N - 2);
  const double c2 = 1.0 / ((N - 1) * (N - 2));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) {
          b.W[i][j][k][l] =
              b.Riem[i][j][k][l] -
              c1 * (b.Ric[i][k] * b.g[j][l] + b.Ric[j][l] * b.g[i][k] -
                    b.Ric[i][l] * b.g[j][k] - b.Ric[j][k] * b.g[i][l]) +
              b.R * c2 * (b.g[j][l] * b.g[i][k] - b.g[i][l] * b.g[j][k]);
        }
  return b;
}

/// Covariant Hessian ∇_i∇_j f = ∂_i∂_j f − Γ^k_ij ∂_k f; exactly symmetric.
template <std::size_t N>
Mat<N> covariant_hessian(const CurvatureBundle<N>& b, const Jet2<N>& f) {
  Mat<N> H{};
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j) {
      double s = f.h(i, j);
      for (int k = 0; k < N; ++k) s -= b.Gamma[k][i][j] * f.grad[k];
      H[i][j] = s;
      H[j][i] = s;
    }
  return H;
}

/// Sectional curvature of the plane spanned by u and v.
template <std::size_t N>
double sectional_curvature(const CurvatureBundle<N>& b, const Vec<N>& u, const Vec<N>& v) {
  const double uu = inner(b.g, u, u);
  const double vv = inner(b.g, v, v);
  const double uv = inner(b.g, u, v);
  const double denom = uu * vv - uv * uv;
  if (denom <= 1e-12 * uu * vv)
    throw ChartError("sectional curvature of a degenerate plane");
  double num = 0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) num += b.Riem[i][j][k][l] * u[i] * v[j] * u[k] * v[l];
  return num / denom;
}

/// |∇f|² = g^{ij} ∂_i f ∂_j f.
template <std::size_t N>
double grad_norm_squared(const CurvatureBundle<N>& b, const Jet2<N>& f) {
  double s = 0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) s += b.g_inv[i][j] * f.grad[i] * f.grad[j];
  return s;
}

} // namespace sforge
