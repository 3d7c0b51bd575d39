#pragma once

#include "sforge/frame.hpp"

namespace sforge {

using Mat6 = std::array<std::array<double, 6>, 6>;
using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec6 = std::array<double, 6>;

/// Ordered bivector basis [e¹∧e², e¹∧e³, e¹∧e⁴, e²∧e³, e²∧e⁴, e³∧e⁴]
/// (0-based index pairs below). All duality signs come from ε₁₂₃₄ = +1.
inline constexpr std::array<std::array<int, 2>, 6> kBivectorPairs = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Dual pair index and sign: ∗(basis_p) = sign_p · basis_{dual_p}.
/// Concretely 12↔34 (+), 13↔24 (−), 14↔23 (+).
inline constexpr std::array<int, 6> kDualIndex = {5, 4, 3, 2, 1, 0};
inline constexpr std::array<double, 6> kDualSign = {+1, -1, +1, +1, -1, +1};

/// Matrix of the Hodge star on the ordered bivector basis of a positively
/// oriented orthonormal frame. Integer entries; an exact involution.
inline Mat6 hodge_star() {
  Mat6 s{};
  for (int p = 0; p < 6; ++p) s[kDualIndex[p]][p] = kDualSign[p];
  return s;
}

/// Bases of the ±1 eigenspaces of ∗, in the order and with the signs of the
/// spanning lists { (e¹∧e²±e³∧e⁴)/√2, (e¹∧e³±e⁴∧e²)/√2, (e³∧e²±e⁴∧e¹)/√2 }.
inline std::array<Vec6, 3> lambda_plus_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  return {Vec6{s, 0, 0, 0, 0, s}, Vec6{0, s, 0, 0, -s, 0}, Vec6{0, 0, -s, -s, 0, 0}};
}
inline std::array<Vec6, 3> lambda_minus_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  return {Vec6{s, 0, 0, 0, 0, -s}, Vec6{0, s, 0, 0, s, 0}, Vec6{0, 0, s, -s, 0, 0}};
}

struct BivectorOperator {
  Mat6 M{};
};

inline double frobenius6(const Mat6& m) {
  double s = 0;
  for (const auto& row : m)
    for (double v : row) s += v * v;
  return std::sqrt(s);
}

inline Mat6 mul6(const Mat6& a, const Mat6& b) {
  Mat6 c{};
  for (int i = 0; i < 6; ++i)
    for (int k = 0; k < 6; ++k)
      for (int j = 0; j < 6; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

/// Weyl tensor in orthonormal-frame components, viewed as an endomorphism of
/// Λ². Inputs without the Riemann symmetries (beyond 1e−7 relative) are
/// rejected.
inline BivectorOperator weyl_operator(const Ten4<4>& w_frame) {
  double norm = frobenius(w_frame);
  double worst = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          worst = std::max(worst, std::abs(w_frame[i][j][k][l] + w_frame[j][i][k][l]));
          worst = std::max(worst, std::abs(w_frame[i][j][k][l] + w_frame[i][j][l][k]));
          worst = std::max(worst, std::abs(w_frame[i][j][k][l] - w_frame[k][l][i][j]));
        }
  if (worst > 1e-7 * (1.0 + norm))
    throw Error("weyl_operator: input lacks Riemann symmetries");
  BivectorOperator op;
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q)
      op.M[p][q] = w_frame[kBivectorPairs[p][0]][kBivectorPairs[p][1]]
                          [kBivectorPairs[q][0]][kBivectorPairs[q][1]];
  return op;
}

struct PMSplit {
  Mat3 plus{};
  Mat3 minus{};
  double offblock_max = 0;        // |⟨v⁺, M v⁻⟩| over basis pairs
  double route_residual = 0;      // dual-on-first-pair vs dual-on-second-pair
  double instance_block = 0;      // ½(W₁₂₃₄ + W₃₄₃₄), star-projected route
  double instance_component = 0;  // ½(W₁₂₃₄ + W₁₂₁₂), componentwise route
};

inline double norm3(const Mat3& m) {
  double s = 0;
  for (const auto& row : m)
    for (double v : row) s += v * v;
  return std::sqrt(s);
}

/// Blocks of the Weyl operator in the Λ⁺⊕Λ⁻ bases; also evaluates the
/// componentwise half-sum form of the self-dual part and the agreement of the
/// two routes.
inline PMSplit project_pm(const BivectorOperator& op) {
  const auto plus = lambda_plus_basis();
  const auto minus = lambda_minus_basis();
  const Mat6& M = op.M;
  const auto quad = [&M](const Vec6& a, const Vec6& b) {
    double s = 0;
    for (int p = 0; p < 6; ++p)
      for (int q = 0; q < 6; ++q) s += a[p] * M[p][q] * b[q];
    return s;
  };
  PMSplit out;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      out.plus[a][b] = quad(plus[a], plus[b]);
      out.minus[a][b] = quad(minus[a], minus[b]);
    }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      out.offblock_max = std::max(out.offblock_max, std::abs(quad(plus[a], minus[b])));

  const Mat6 S = hodge_star();
  const Mat6 SM = mul6(S, M);
  const Mat6 MS = mul6(M, S);
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q)
      out.route_residual = std::max(out.route_residual, 0.5 * std::abs(SM[p][q] - MS[p][q]));
  out.instance_block = 0.5 * (M[0][5] + SM[0][5]);
  out.instance_component = 0.5 * (M[0][5] + M[0][0]);
  return out;
}

struct RicciEigenframe {
  Frame<4> frame;
  Vec<4> eigenvalues{};  // ascending
};

/// Oriented orthonormal frame diagonalizing the Ricci tensor. Any orthonormal
/// eigenbasis is acceptable for degenerate spectra; orientation is restored
/// by flipping the last eigenvector.
inline RicciEigenframe ricci_diagonal_frame(const CurvatureBundle<4>& b, int orientation = +1) {
  const Frame<4> base = orthonormal_frame(b.g, orientation);
  const Mat<4> ric_f = to_frame(base, b.Ric);
  const EigenDecomposition<4> eig = jacobi_eigen(ric_f);
  RicciEigenframe out;
  out.eigenvalues = eig.values;
  for (int a = 0; a < 4; ++a)
    for (int mu = 0; mu < 4; ++mu) {
      double s = 0;
      for (int i = 0; i < 4; ++i) s += eig.vectors[i][a] * base.rows[i][mu];
      out.frame.rows[a][mu] = s;
    }
  if (frame_orientation_sign(out.frame, b.g) * orientation < 0)
    for (int mu = 0; mu < 4; ++mu) out.frame.rows[3][mu] = -out.frame.rows[3][mu];
  return out;
}

} // namespace sforge
