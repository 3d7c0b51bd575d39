#include "test_helpers.hpp"

#ifdef SFORGE_HAVE_EIGEN
#include <Eigen/Dense>
#endif

using namespace sforge;

TEST_CASE("hodge star: anchor image, involution, symmetry") {
  const Mat6 S = hodge_star();
  // ∗(e¹∧e²) = e³∧e⁴ : first column has a single 1 in the last slot.
  for (int r = 0; r < 6; ++r) CHECK(S[r][0] == (r == 5 ? 1.0 : 0.0));
  const Mat6 SS = mul6(S, S);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(SS[i][j] == (i == j ? 1.0 : 0.0));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(S[i][j] == S[j][i]);
}

TEST_CASE("hodge star: exact projections and 3+3 eigenspaces") {
  const Mat6 S = hodge_star();
  for (int sign = -1; sign <= 1; sign += 2) {
    Mat6 P{};
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) P[i][j] = 0.5 * ((i == j ? 1.0 : 0.0) + sign * S[i][j]);
    const Mat6 PP = mul6(P, P);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) CHECK(PP[i][j] == P[i][j]);
    double trace = 0;
    for (int i = 0; i < 6; ++i) trace += P[i][i];
    CHECK(trace == 3.0);
  }
  // P₊P₋ = 0 exactly.
  Mat6 Pp{}, Pm{};
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      Pp[i][j] = 0.5 * ((i == j ? 1.0 : 0.0) + S[i][j]);
      Pm[i][j] = 0.5 * ((i == j ? 1.0 : 0.0) - S[i][j]);
    }
  const Mat6 Z = mul6(Pp, Pm);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(Z[i][j] == 0.0);

  // The spanning triples are unit-norm ±1 eigenvectors.
  for (const auto& v : lambda_plus_basis()) {
    double nn = 0;
    for (int i = 0; i < 6; ++i) nn += v[i] * v[i];
    CHECK(nn == Catch::Approx(1.0).epsilon(1e-15));
    for (int i = 0; i < 6; ++i) {
      double sv = 0;
      for (int j = 0; j < 6; ++j) sv += S[i][j] * v[j];
      CHECK(sv == v[i]);
    }
  }
  for (const auto& v : lambda_minus_basis()) {
    for (int i = 0; i < 6; ++i) {
      double sv = 0;
      for (int j = 0; j < 6; ++j) sv += S[i][j] * v[j];
      CHECK(sv == -v[i]);
    }
  }
}

TEST_CASE("orthonormal frames: gram identity and orientation") {
  for (const std::string& name : catalog_names()) {
    const CatalogEntry e = catalog_entry(name);
    for (const auto& x : sample_points(e.chart, 4, 31).points) {
      const CurvatureBundle<4> b = curvature_bundle(e.chart, x);
      const Frame<4> fr = orthonormal_frame(b.g, e.chart.orientation);
      const Mat<4> gram = frame_gram(fr, b.g);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          CHECK(gram[i][j] == Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-12));
      CHECK(frame_orientation_sign(fr, b.g) * e.chart.orientation > 0);
    }
  }
  // Euclidean metric: the identity frame.
  const CatalogEntry flat = catalog_entry("flat-yamabe");
  const Vec<4> origin{0.1, 0.2, -0.3, 0.4};
  const CurvatureBundle<4> b = curvature_bundle(flat.chart, origin);
  const Frame<4> fr = orthonormal_frame(b.g);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(fr.rows[i][j] == (i == j ? 1.0 : 0.0));
}

TEST_CASE("weyl operator: zero for constant curvature, rejects bad input") {
  const CatalogEntry s4 = catalog_entry("round-sphere-trivial");
  for (const auto& x : sample_points(s4.chart, 4, 32).points) {
    const CurvatureBundle<4> b = curvature_bundle(s4.chart, x);
    const Ten4<4> wf = to_frame(orthonormal_frame(b.g), b.W);
    const BivectorOperator op = weyl_operator(wf);
    CHECK(frobenius6(op.M) <= 1e-8);
  }
  Ten4<4> bogus{};
  bogus[0][1][0][1] = 1.0;  // missing all the paired symmetries
  CHECK_THROWS_AS(weyl_operator(bogus), Error);
}

TEST_CASE("weyl operator commutes with the star and splits block-diagonally") {
  const CatalogEntry pp = catalog_entry("s2xs2");
  const Mat6 S = hodge_star();
  for (const auto& x : sample_points(pp.chart, 5, 33).points) {
    const CurvatureBundle<4> b = curvature_bundle(pp.chart, x);
    const Ten4<4> wf = to_frame(orthonormal_frame(b.g), b.W);
    const BivectorOperator op = weyl_operator(wf);
    const Mat6 MS = mul6(op.M, S);
    const Mat6 SM = mul6(S, op.M);
    double comm = 0;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) comm = std::max(comm, std::abs(MS[i][j] - SM[i][j]));
    CHECK(comm <= 1e-8 * frobenius6(op.M));
    const PMSplit split = project_pm(op);
    CHECK(split.offblock_max <= 1e-8 * (1.0 + frobenius6(op.M)));
    double trace = 0;
    for (int a = 0; a < 3; ++a) trace += split.plus[a][a] + split.minus[a][a];
    CHECK(std::abs(trace) <= 1e-8 * (1.0 + frobenius6(op.M)));
  }
}

TEST_CASE("self-dual part: half-sum component formula on every catalog metric") {
  for (const std::string& name : catalog_names()) {
    const CatalogEntry e = catalog_entry(name);
    for (const auto& x : sample_points(e.chart, 4, 34).points) {
      const CurvatureBundle<4> b = curvature_bundle(e.chart, x);
      const Ten4<4> wf = to_frame(orthonormal_frame(b.g, e.chart.orientation), b.W);
      const PMSplit split = project_pm(weyl_operator(wf));
      // Both routes to W⁺₁₂₃₄ = ½(W₁₂₃₄ + W₁₂₁₂).
      const double direct = 0.5 * (wf[0][1][2][3] + wf[0][1][0][1]);
      CHECK(std::abs(split.instance_component - direct) <= 1e-12);
      CHECK(std::abs(split.instance_block - split.instance_component) <= 1e-9);
      CHECK(split.route_residual <= 1e-9);
    }
  }
}

TEST_CASE("fubini-study is self-dual; orientation reversal swaps the blocks") {
  const CatalogEntry fs = catalog_entry("fubini-study");
  for (const auto& x : sample_points(fs.chart, 6, 35).points) {
    const CurvatureBundle<4> b = curvature_bundle(fs.chart, x);
    const Ten4<4> wp = to_frame(orthonormal_frame(b.g, +1), b.W);
    const PMSplit sp = project_pm(weyl_operator(wp));
    CHECK(norm3(sp.plus) > 0.5);
    CHECK(norm3(sp.minus) <= 1e-6 * (1.0 + norm3(sp.plus)));

    const Ten4<4> wm = to_frame(orthonormal_frame(b.g, -1), b.W);
    const PMSplit sm = project_pm(weyl_operator(wm));
    CHECK(norm3(sm.plus) <= 1e-6 * (1.0 + norm3(sm.minus)));
    CHECK(norm3(sm.minus) == Catch::Approx(norm3(sp.plus)).epsilon(1e-9));
  }
}

TEST_CASE("ricci eigenframe: diagonalization across spectra") {
  // Adapted product frame: Ricci of the cylinder is diag(0, 2, 2, 2).
  const CatalogEntry cyl = catalog_entry("cylinder-shrinker");
  for (const auto& x : sample_points(cyl.chart, 4, 36).points) {
    const CurvatureBundle<4> b = curvature_bundle(cyl.chart, x);
    const RicciEigenframe ef = ricci_diagonal_frame(b);
    const Mat<4> ricf = to_frame(ef.frame, b.Ric);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) CHECK(std::abs(ricf[i][j]) <= 1e-10);
    CHECK(ef.eigenvalues[0] == Catch::Approx(0.0).margin(1e-9));
    CHECK(ef.eigenvalues[3] == Catch::Approx(2.0).margin(1e-9));
    CHECK(frame_orientation_sign(ef.frame, b.g) > 0);
  }
  // Fully degenerate spectrum: any orthonormal eigenbasis with entries 3.
  const CatalogEntry s4 = catalog_entry("round-sphere-trivial");
  for (const auto& x : sample_points(s4.chart, 4, 37).points) {
    const CurvatureBundle<4> b = curvature_bundle(s4.chart, x);
    const RicciEigenframe ef = ricci_diagonal_frame(b);
    for (int i = 0; i < 4; ++i) CHECK(ef.eigenvalues[i] == Catch::Approx(3.0).margin(1e-8));
    const Mat<4> gram = frame_gram(ef.frame, b.g);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        CHECK(gram[i][j] == Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-10));
  }
}

#ifdef SFORGE_HAVE_EIGEN
TEST_CASE("ricci eigenvalues match an independent reference eigensolver") {
  // Reference: Eigen's tridiagonalization + implicit QL, an algorithm
  // disjoint from the cyclic Jacobi rotations used in the library.
  for (const std::string& name : {"fubini-study", "s2xs2", "quasi-cylinder"}) {
    const CatalogEntry e = catalog_entry(name);
    for (const auto& x : sample_points(e.chart, 5, 38).points) {
      const CurvatureBundle<4> b = curvature_bundle(e.chart, x);
      const Frame<4> base = orthonormal_frame(b.g, e.chart.orientation);
      const Mat<4> ricf = to_frame(base, b.Ric);
      Eigen::Matrix4d m;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = ricf[i][j];
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> ref(m);
      const RicciEigenframe ef = ricci_diagonal_frame(b, e.chart.orientation);
      for (int i = 0; i < 4; ++i)
        CHECK(ef.eigenvalues[i] == Catch::Approx(ref.eigenvalues()(i)).margin(1e-9));
    }
  }
}
#endif
