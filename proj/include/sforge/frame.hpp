#pragma once

#include "sforge/geometry.hpp"

namespace sforge {

class FrameError : public Error {
public:
  using Error::Error;
};

/// Orthonormal frame at a point; rows[a] holds the coordinate components of
/// the frame vector e_a. A frame is positively oriented when
/// det(rows)·sqrt(det g)·(chart orientation) > 0.
template <std::size_t N> struct Frame {
  Mat<N> rows{};

  Vec<N> vector(int a) const { return rows[a]; }
};

/// Gram-Schmidt on the coordinate basis; the last vector is flipped if needed
/// to match the requested orientation.
template <std::size_t N>
Frame<N> orthonormal_frame(const Mat<N>& g, int orientation = +1) {
  Frame<N> f;
  for (int a = 0; a < N; ++a) {
    Vec<N> v{};
    v[a] = 1.0;
    for (int b = 0; b < N; ++b) {
      const double proj = inner(g, v, f.rows[b]);
      if (b < a)
        for (int i = 0; i < N; ++i) v[i] -= proj * f.rows[b][i];
    }
    const double nn = inner(g, v, v);
    if (!(nn > 1e-24)) throw FrameError("orthonormalization breakdown: near-degenerate metric");
    const double inv = 1.0 / std::sqrt(nn);
    for (int i = 0; i < N; ++i) f.rows[a][i] = v[i] * inv;
  }
  const auto L = cholesky(g);
  if (!L) throw FrameError("orthonormal_frame: metric not positive definite");
  const double sqrt_det_g = std::sqrt(det_from_cholesky(*L));
  if (determinant(f.rows) * sqrt_det_g * orientation < 0)
    for (int i = 0; i < N; ++i) f.rows[N - 1][i] = -f.rows[N - 1][i];
  return f;
}

template <std::size_t N>
double frame_orientation_sign(const Frame<N>& f, const Mat<N>& g) {
  const auto L = cholesky(g);
  if (!L) throw FrameError("frame_orientation_sign: metric not positive definite");
  return determinant(f.rows) * std::sqrt(det_from_cholesky(*L)) > 0 ? +1.0 : -1.0;
}

/// Gram matrix g(e_a, e_b); identity for an orthonormal frame.
template <std::size_t N>
Mat<N> frame_gram(const Frame<N>& f, const Mat<N>& g) {
  Mat<N> out{};
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) out[a][b] = inner(g, f.rows[a], f.rows[b]);
  return out;
}

// Frame components of covariant tensors: every index contracted with a frame
// vector. For orthonormal frames these give coordinate-invariant norms.

template <std::size_t N>
Vec<N> to_frame(const Frame<N>& f, const Vec<N>& covec) {
  Vec<N> out{};
  for (int a = 0; a < N; ++a) out[a] = dot(covec, f.rows[a]);
  return out;
}

template <std::size_t N>
Mat<N> to_frame(const Frame<N>& f, const Mat<N>& t) {
  Mat<N> out{};
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      double s = 0;
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) s += t[i][j] * f.rows[a][i] * f.rows[b][j];
      out[a][b] = s;
    }
  return out;
}

template <std::size_t N>
Ten3<N> to_frame(const Frame<N>& f, const Ten3<N>& t) {
  // One index at a time keeps this O(N^4) per pass.
  Ten3<N> s1{}, s2{}, out{};
  for (int a = 0; a < N; ++a)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        double s = 0;
        for (int i = 0; i < N; ++i) s += t[i][j][k] * f.rows[a][i];
        s1[a][j][k] = s;
      }
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int k = 0; k < N; ++k) {
        double s = 0;
        for (int j = 0; j < N; ++j) s += s1[a][j][k] * f.rows[b][j];
        s2[a][b][k] = s;
      }
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int c = 0; c < N; ++c) {
        double s = 0;
        for (int k = 0; k < N; ++k) s += s2[a][b][k] * f.rows[c][k];
        out[a][b][c] = s;
      }
  return out;
}

template <std::size_t N>
Ten4<N> to_frame(const Frame<N>& f, const Ten4<N>& t) {
  auto contract_first = [&f](const Ten4<N>& in) {
    // Rotates the contracted slot to the back, so four passes convert all.
    Ten4<N> res{};
    for (int a = 0; a < N; ++a)
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k)
          for (int l = 0; l < N; ++l) {
            double s = 0;
            for (int i = 0; i < N; ++i) s += in[i][j][k][l] * f.rows[a][i];
            res[j][k][l][a] = s;
          }
    return res;
  };
  Ten4<N> r = t;
  for (int pass = 0; pass < 4; ++pass) r = contract_first(r);
  return r;
}

/// Coordinate-invariant Frobenius norms (computed in an orthonormal frame).
template <std::size_t N>
double frame_norm(const Frame<N>& f, const Mat<N>& t) {
  return frobenius(to_frame(f, t));
}
template <std::size_t N>
double frame_norm(const Frame<N>& f, const Ten3<N>& t) {
  return frobenius(to_frame(f, t));
}
template <std::size_t N>
double frame_norm(const Frame<N>& f, const Ten4<N>& t) {
  return frobenius(to_frame(f, t));
}

} // namespace sforge
