#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace sforge {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

template <std::size_t N> using Vec = std::array<double, N>;
template <std::size_t N> using Mat = std::array<std::array<double, N>, N>;
template <std::size_t N> using Ten3 = std::array<Mat<N>, N>;
template <std::size_t N> using Ten4 = std::array<Ten3<N>, N>;

template <std::size_t N> constexpr Mat<N> zero_mat() {
  Mat<N> m{};
  return m;
}

template <std::size_t N> constexpr Mat<N> identity() {
  Mat<N> m{};
  for (int i = 0; i < N; ++i) m[i][i] = 1.0;
  return m;
}

template <std::size_t N> inline double dot(const Vec<N>& u, const Vec<N>& v) {
  double s = 0;
  for (int i = 0; i < N; ++i) s += u[i] * v[i];
  return s;
}

/// Inner product g(u, v).
template <std::size_t N> inline double inner(const Mat<N>& g, const Vec<N>& u, const Vec<N>& v) {
  double s = 0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) s += g[i][j] * u[i] * v[j];
  return s;
}

template <std::size_t N> inline double frobenius(const Mat<N>& m) {
  double s = 0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) s += m[i][j] * m[i][j];
  return std::sqrt(s);
}

template <std::size_t N> inline double frobenius(const Ten3<N>& t) {
  double s = 0;
  for (int k = 0; k < N; ++k)
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) s += t[k][i][j] * t[k][i][j];
  return std::sqrt(s);
}

template <std::size_t N> inline double frobenius(const Ten4<N>& t) {
  double s = 0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) s += t[i][j][k][l] * t[i][j][k][l];
  return std::sqrt(s);
}

template <std::size_t N> inline double max_abs(const Mat<N>& m) {
  double s = 0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) s = std::max(s, std::abs(m[i][j]));
  return s;
}

template <std::size_t N> inline Mat<N> mat_mul(const Mat<N>& a, const Mat<N>& b) {
  Mat<N> c{};
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < N; ++k) {
      const double aik = a[i][k];
      for (int j = 0; j < N; ++j) c[i][j] += aik * b[k][j];
    }
  return c;
}

template <std::size_t N> inline Mat<N> transpose(const Mat<N>& a) {
  Mat<N> t{};
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) t[i][j] = a[j][i];
  return t;
}

/// Cholesky factor L (lower, g = L Lᵀ); empty if g is not positive definite.
template <std::size_t N> inline std::optional<Mat<N>> cholesky(const Mat<N>& g) {
  Mat<N> L{};
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = g[i][j];
      for (int k = 0; k < j; ++k) s -= L[i][k] * L[j][k];
      if (i == j) {
        if (!(s > 0.0)) return std::nullopt;
        L[i][i] = std::sqrt(s);
      } else {
        L[i][j] = s / L[j][j];
      }
    }
  }
  return L;
}

template <std::size_t N> inline double det_from_cholesky(const Mat<N>& L) {
  double d = 1;
  for (int i = 0; i < N; ++i) d *= L[i][i];
  return d * d;
}

/// Inverse of a symmetric positive definite matrix via its Cholesky factor.
template <std::size_t N> inline Mat<N> spd_inverse(const Mat<N>& g) {
  auto Lopt = cholesky(g);
  if (!Lopt) throw Error("spd_inverse: matrix not positive definite");
  const Mat<N>& L = *Lopt;
  // Solve L Lᵀ X = I column by column.
  Mat<N> inv{};
  for (int c = 0; c < N; ++c) {
    Vec<N> y{};
    for (int i = 0; i < N; ++i) {
      double s = (i == c) ? 1.0 : 0.0;
      for (int k = 0; k < i; ++k) s -= L[i][k] * y[k];
      y[i] = s / L[i][i];
    }
    for (int i = N - 1; i >= 0; --i) {
      double s = y[i];
      for (int k = i + 1; k < N; ++k) s -= L[k][i] * inv[k][c];
      inv[i][c] = s / L[i][i];
    }
  }
  // Symmetrize against rounding drift.
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < i; ++j) {
      const double v = 0.5 * (inv[i][j] + inv[j][i]);
      inv[i][j] = inv[j][i] = v;
    }
  return inv;
}

/// Determinant by partially pivoted elimination (general small matrices).
template <std::size_t N> inline double determinant(Mat<N> a) {
  double det = 1;
  for (int c = 0; c < N; ++c) {
    int p = c;
    for (int r = c + 1; r < N; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    if (a[p][c] == 0.0) return 0.0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < N; ++r) {
      const double f = a[r][c] / a[c][c];
      for (int k = c; k < N; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

template <std::size_t N> struct EigenDecomposition {
  Vec<N> values;  // ascending
  Mat<N> vectors; // columns, orthonormal: A = V diag Vᵀ
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
template <std::size_t N> inline EigenDecomposition<N> jacobi_eigen(Mat<N> a) {
  Mat<N> v = identity<N>();
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0;
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) off += a[i][j] * a[i][j];
    if (off <= 1e-300) break;
    for (int p = 0; p < N; ++p) {
      for (int q = p + 1; q < N; ++q) {
        const double apq = a[p][q];
        if (apq == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < N; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < N; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < N; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  EigenDecomposition<N> out;
  std::array<int, N> order{};
  for (int i = 0; i < N; ++i) order[i] = i;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j)
      if (a[order[j]][order[j]] < a[order[i]][order[i]]) std::swap(order[i], order[j]);
  for (int i = 0; i < N; ++i) {
    const int c = order[i];
    out.values[i] = a[c][c];
    // Deterministic sign: largest-magnitude component positive.
    int arg = 0;
    for (int k = 1; k < N; ++k)
      if (std::abs(v[k][c]) > std::abs(v[arg][c])) arg = k;
    const double sgn = v[arg][c] < 0 ? -1.0 : 1.0;
    for (int k = 0; k < N; ++k) out.vectors[k][i] = sgn * v[k][c];
  }
  return out;
}

} // namespace sforge
