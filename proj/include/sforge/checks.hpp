#pragma once

#include "sforge/catalog.hpp"
#include "sforge/report.hpp"
#include "sforge/threads.hpp"

namespace sforge {

/// Pass/fail thresholds. Tolerances marked ·(1+‖·‖) scale with the named
/// frame-invariant norm; the rest are absolute. `override_all`, when set by
/// --tol, replaces the tolerance of every residual-style check.
struct Tolerances {
  double riemann_sym = 1e-9;    // ·(1+‖Riem‖)
  double bianchi = 1e-9;        // ·(1+‖Riem‖)
  double weyl_trace = 1e-8;     // ·(1+‖W‖)
  double weyl_3d = 1e-9;
  double anchor = 1e-8;         // sphere anchors and fiber validation
  double op_symmetric = 1e-10;  // ·(1+‖M‖)
  double duality_block = 1e-8;  // ·(1+‖M‖ or ‖W‖)
  double wplus_instance = 1e-9;
  double tau_dual = 1e-7;       // half-flat decision, ·(1+‖Riem‖)
  double frame_gram = 1e-12;
  double ricci_offdiag = 1e-9;  // ·(1+‖Ric‖)
  double soliton = 1e-9;        // closed-form soliton residuals
  double tau_sol = 1e-6;        // soliton hypothesis gate, ·(1+‖Riem‖)
  double d_traces = 1e-8;       // ·(1+‖D‖)
  double d_distinct = 1e-8;
  double prop_contraction = 1e-6;  // ·(1+‖Riem‖)
  double warped_weyl = 1e-6;       // ·(1+‖Riem‖)
  double warped_ricci = 1e-7;      // ·(1+‖Ric‖)
  double levelset = 1e-9;
  double backend_agree = 1e-5;  // relative, jet vs finite differences
  std::optional<double> override_all;

  double residual(double def) const { return override_all ? *override_all : def; }

  void apply_named(const std::string& key, double value);
};

inline void Tolerances::apply_named(const std::string& key, double value) {
  if (key == "riemann_sym") riemann_sym = value;
  else if (key == "bianchi") bianchi = value;
  else if (key == "weyl_trace") weyl_trace = value;
  else if (key == "weyl_3d") weyl_3d = value;
  else if (key == "anchor") anchor = value;
  else if (key == "op_symmetric") op_symmetric = value;
  else if (key == "duality_block") duality_block = value;
  else if (key == "wplus_instance") wplus_instance = value;
  else if (key == "tau_dual") tau_dual = value;
  else if (key == "frame_gram") frame_gram = value;
  else if (key == "ricci_offdiag") ricci_offdiag = value;
  else if (key == "soliton") soliton = value;
  else if (key == "tau_sol") tau_sol = value;
  else if (key == "d_traces") d_traces = value;
  else if (key == "d_distinct") d_distinct = value;
  else if (key == "prop_contraction") prop_contraction = value;
  else if (key == "warped_weyl") warped_weyl = value;
  else if (key == "warped_ricci") warped_ricci = value;
  else if (key == "levelset") levelset = value;
  else if (key == "backend_agree") backend_agree = value;
  else throw Error("unknown tolerance name '" + key + "'");
}

struct CheckSettings {
  Tolerances tol;
  Backend backend = Backend::Jet;
  bool both_backends = false;
  int samples = 40;
  std::uint64_t seed = 7;
};

namespace detail {

inline void add_check(std::vector<CheckResult>& out, std::string name, std::string anchor,
                      int points, double max_residual, double tolerance, bool diagnostic = false,
                      std::string note = {}) {
  CheckResult c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.points = points;
  c.max_residual = max_residual;
  c.tolerance = tolerance;
  c.pass = max_residual <= tolerance;
  c.diagnostic = diagnostic;
  c.note = std::move(note);
  out.push_back(std::move(c));
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag) {
  return seed ^ fnv1a64(tag);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Curvature suite: tensor symmetries, first Bianchi, Weyl traces, and the jet
// versus finite-difference backend comparison.
// ---------------------------------------------------------------------------

template <std::size_t N>
void curvature_checks(std::vector<CheckResult>& out, const Chart<N>& chart,
                      const std::vector<Vec<N>>& pts, const CheckSettings& s) {
  struct Rec {
    double sym = 0, bianchi = 0, wtrace = 0, wnorm = 0, riem_norm = 0, weyl_norm_rel = 0;
    double backend = 0;
  };
  const Tolerances& tol = s.tol;
  const bool both = s.both_backends;
  const Backend backend = s.backend;
  const auto recs = parallel_map<Rec>(pts, [&](const Vec<N>& x) {
    const CurvatureBundle<N> b = curvature_bundle(chart, x, backend);
    const Frame<N> fr = orthonormal_frame(b.g, chart.orientation);
    const Ten4<N> rf = to_frame(fr, b.Riem);
    const Ten4<N> wf = to_frame(fr, b.W);
    Rec r;
    r.riem_norm = frobenius(rf);
    r.wnorm = frobenius(wf);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j)
        for (std::size_t k = 0; k < N; ++k)
          for (std::size_t l = 0; l < N; ++l) {
            r.sym = std::max(r.sym, std::abs(rf[i][j][k][l] + rf[j][i][k][l]));
            r.sym = std::max(r.sym, std::abs(rf[i][j][k][l] + rf[i][j][l][k]));
            r.sym = std::max(r.sym, std::abs(rf[i][j][k][l] - rf[k][l][i][j]));
            r.bianchi = std::max(
                r.bianchi, std::abs(rf[i][j][k][l] + rf[i][k][l][j] + rf[i][l][j][k]));
          }
    for (std::size_t b2 = 0; b2 < N; ++b2)
      for (std::size_t c = 0; c < N; ++c) {
        double tr = 0;
        for (std::size_t a = 0; a < N; ++a) tr += wf[a][b2][a][c];
        r.wtrace = std::max(r.wtrace, std::abs(tr));
      }
    if (both) {
      const CurvatureBundle<N> fd = curvature_bundle(chart, x, Backend::Fd);
      const auto rel = [](double d, double scale) { return d / (1.0 + scale); };
      Ten4<N> dr{}, dw{};
      Mat<N> dric{};
      Ten3<N> dgam{};
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
          dric[i][j] = b.Ric[i][j] - fd.Ric[i][j];
          for (std::size_t k = 0; k < N; ++k) {
            dgam[i][j][k] = b.Gamma[i][j][k] - fd.Gamma[i][j][k];
            for (std::size_t l = 0; l < N; ++l) {
              dr[i][j][k][l] = b.Riem[i][j][k][l] - fd.Riem[i][j][k][l];
              dw[i][j][k][l] = b.W[i][j][k][l] - fd.W[i][j][k][l];
            }
          }
        }
      r.backend = std::max({rel(frobenius(dr), frobenius(b.Riem)),
                            rel(frobenius(dw), frobenius(b.W)),
                            rel(frobenius(dric), frobenius(b.Ric)),
                            rel(frobenius(dgam), frobenius(b.Gamma)),
                            rel(std::abs(b.R - fd.R), std::abs(b.R))});
    }
    return r;
  });

  double sym = 0, bianchi = 0, wtrace = 0, w3d = 0, backend_diff = 0;
  double riem_scale = 0, w_scale = 0;
  for (const auto& r : recs) {
    sym = std::max(sym, r.sym / (1.0 + r.riem_norm));
    bianchi = std::max(bianchi, r.bianchi / (1.0 + r.riem_norm));
    wtrace = std::max(wtrace, r.wtrace / (1.0 + r.wnorm));
    w3d = std::max(w3d, r.wnorm);
    backend_diff = std::max(backend_diff, r.backend);
    riem_scale = std::max(riem_scale, r.riem_norm);
    w_scale = std::max(w_scale, r.wnorm);
  }
  const int n = static_cast<int>(pts.size());
  detail::add_check(out, chart.name + "/riemann-symmetry", "riemann:pair-antisymmetry", n, sym,
                    tol.residual(tol.riemann_sym));
  detail::add_check(out, chart.name + "/first-bianchi", "riemann:first-bianchi", n, bianchi,
                    tol.residual(tol.bianchi));
  detail::add_check(out, chart.name + "/weyl-trace-free", "weyl:trace-free", n, wtrace,
                    tol.residual(tol.weyl_trace));
  if constexpr (N == 3)
    detail::add_check(out, chart.name + "/weyl-vanishes-3d", "weyl:vanishes-in-3d", n, w3d,
                      tol.residual(tol.weyl_3d));
  if (both) {
    // Finite differences of a profile-backed metric probe the dense-output
    // interpolant, not an independent derivative route; report only.
    detail::add_check(out, chart.name + "/backend-agreement", "backend:jet-vs-fd", n,
                      backend_diff, tol.residual(tol.backend_agree), chart.profile_backed,
                      chart.profile_backed
                          ? "profile-backed chart: derivatives are analytic from the profile"
                          : "");
  }
}

// ---------------------------------------------------------------------------
// Duality suite.
// ---------------------------------------------------------------------------

inline void duality_static_checks(std::vector<CheckResult>& out) {
  const Mat6 S = hodge_star();
  double invol = 0;
  const Mat6 SS = mul6(S, S);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) invol = std::max(invol, std::abs(SS[i][j] - (i == j ? 1.0 : 0.0)));
  detail::add_check(out, "duality/star-involution", "hodge:involution", 0, invol, 0.0);

  double anchor = std::abs(S[5][0] - 1.0);  // ∗(e¹∧e²) = e³∧e⁴
  for (int r = 0; r < 5; ++r) anchor = std::max(anchor, std::abs(S[r][0]));
  detail::add_check(out, "duality/star-anchor", "hodge:e12-to-e34", 0, anchor, 0.0);

  // P± = (Id ± ∗)/2 must be exact projections with 3-dimensional ranges.
  double proj = 0;
  for (int sign = -1; sign <= 1; sign += 2) {
    Mat6 P{};
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) P[i][j] = 0.5 * ((i == j ? 1.0 : 0.0) + sign * S[i][j]);
    const Mat6 PP = mul6(P, P);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) proj = std::max(proj, std::abs(PP[i][j] - P[i][j]));
  }
  detail::add_check(out, "duality/projections-idempotent", "hodge:projections", 0, proj, 0.0);

  double dims = 0;
  double trace_plus = 0;
  for (int i = 0; i < 6; ++i) trace_plus += 0.5 * (1.0 + S[i][i]);
  dims = std::abs(trace_plus - 3.0);
  // The spanning triples must be exact ±1 eigenvectors.
  const auto plus = lambda_plus_basis();
  const auto minus = lambda_minus_basis();
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 6; ++i) {
      double sp = 0, sm = 0;
      for (int j = 0; j < 6; ++j) {
        sp += S[i][j] * plus[a][j];
        sm += S[i][j] * minus[a][j];
      }
      dims = std::max(dims, std::abs(sp - plus[a][i]));
      dims = std::max(dims, std::abs(sm + minus[a][i]));
    }
  detail::add_check(out, "duality/eigenspace-dimensions", "hodge:three-plus-three", 0, dims, 0.0);
}

inline void duality_checks(std::vector<CheckResult>& out, const Chart<4>& chart,
                           const std::vector<Vec<4>>& pts, const CheckSettings& s) {
  struct Rec {
    double gram = 0, orient = 0, opsym = 0, commute = 0, offblock = 0, instance = 0;
    double trace_sum = 0, ric_offdiag = 0, mnorm = 0, wnorm = 0, ric_norm = 0;
    bool halfflat = false;
  };
  const Tolerances& tol = s.tol;
  const Backend backend = s.backend;
  const auto recs = parallel_map<Rec>(pts, [&](const Vec<4>& x) {
    const CurvatureBundle<4> b = curvature_bundle(chart, x, backend);
    Rec r;
    const Frame<4> fr = orthonormal_frame(b.g, chart.orientation);
    const Mat<4> gram = frame_gram(fr, b.g);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        r.gram = std::max(r.gram, std::abs(gram[i][j] - (i == j ? 1.0 : 0.0)));
    r.orient = frame_orientation_sign(fr, b.g) * chart.orientation > 0 ? 0.0 : 1.0;

    const Ten4<4> wf = to_frame(fr, b.W);
    r.wnorm = frobenius(wf);
    const BivectorOperator op = weyl_operator(wf);
    r.mnorm = frobenius6(op.M);
    for (int p = 0; p < 6; ++p)
      for (int q = 0; q < 6; ++q) r.opsym = std::max(r.opsym, std::abs(op.M[p][q] - op.M[q][p]));
    const Mat6 S = hodge_star();
    const Mat6 MS = mul6(op.M, S);
    const Mat6 SM = mul6(S, op.M);
    for (int p = 0; p < 6; ++p)
      for (int q = 0; q < 6; ++q) r.commute = std::max(r.commute, std::abs(MS[p][q] - SM[p][q]));
    const PMSplit split = project_pm(op);
    r.offblock = split.offblock_max;
    r.instance = std::max(std::abs(split.instance_block - split.instance_component),
                          split.route_residual);
    double tr = 0;
    for (int a = 0; a < 3; ++a) tr += split.plus[a][a] + split.minus[a][a];
    r.trace_sum = std::abs(tr);

    const RicciEigenframe ef = ricci_diagonal_frame(b, chart.orientation);
    const Mat<4> ricf = to_frame(ef.frame, b.Ric);
    r.ric_norm = frobenius(ricf);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) r.ric_offdiag = std::max(r.ric_offdiag, std::abs(ricf[i][j]));
    const double riem_norm = frame_norm(fr, b.Riem);
    r.halfflat = norm3(split.plus) <= tol.tau_dual * (1.0 + riem_norm);
    return r;
  });

  double gram = 0, orient = 0, opsym = 0, commute = 0, offblock = 0, instance = 0;
  double trace_sum = 0, ric_offdiag = 0;
  int halfflat_points = 0;
  for (const auto& r : recs) {
    gram = std::max(gram, r.gram);
    orient = std::max(orient, r.orient);
    opsym = std::max(opsym, r.opsym / (1.0 + r.mnorm));
    commute = std::max(commute, r.commute / (1.0 + r.mnorm));
    offblock = std::max(offblock, r.offblock / (1.0 + r.mnorm));
    instance = std::max(instance, r.instance);
    trace_sum = std::max(trace_sum, r.trace_sum / (1.0 + r.wnorm));
    ric_offdiag = std::max(ric_offdiag, r.ric_offdiag / (1.0 + r.ric_norm));
    if (r.halfflat) ++halfflat_points;
  }
  const int n = static_cast<int>(pts.size());
  detail::add_check(out, chart.name + "/frame-orthonormal", "frame:gram-identity", n, gram,
                    tol.residual(tol.frame_gram));
  detail::add_check(out, chart.name + "/frame-oriented", "frame:positive-orientation", n, orient,
                    0.0);
  detail::add_check(out, chart.name + "/weyl-operator-symmetric", "bivector:self-adjoint", n,
                    opsym, tol.residual(tol.op_symmetric));
  detail::add_check(out, chart.name + "/weyl-star-commutes", "bivector:star-commutes", n, commute,
                    tol.residual(tol.duality_block));
  detail::add_check(out, chart.name + "/weyl-block-diagonal", "duality:block-diagonal", n,
                    offblock, tol.residual(tol.duality_block));
  detail::add_check(out, chart.name + "/selfdual-component-form", "duality:half-sum-instance", n,
                    instance, tol.residual(tol.wplus_instance));
  detail::add_check(out, chart.name + "/selfdual-trace-sum", "duality:trace-free-split", n,
                    trace_sum, tol.residual(tol.weyl_trace));
  detail::add_check(out, chart.name + "/ricci-eigenframe", "frame:ricci-diagonal", n, ric_offdiag,
                    tol.residual(tol.ricci_offdiag));
  detail::add_check(out, chart.name + "/halfflat-decision", "duality:antiselfdual-flag", n,
                    0.0, 0.0, true,
                    std::to_string(halfflat_points) + "/" + std::to_string(n) +
                        " points flagged anti-self-dual");
}

// ---------------------------------------------------------------------------
// Soliton suite.
// ---------------------------------------------------------------------------

inline void soliton_checks(std::vector<CheckResult>& out, const Chart<4>& chart,
                           const SolitonData& sol, bool expect_soliton,
                           const std::vector<Vec<4>>& pts, const CheckSettings& s) {
  struct Rec {
    double residual = 0, riem_norm = 0, grad_norm = 0;
    double skew = 0, traces = 0, d_norm = 0;
    double distinct = 0, pair_sum = 0, diji = 0, diij = 0;
    double contraction = 0, w_gradf = 0;
    double min_sectional = 0;
    bool hypothesis_ok = false, halfflat = false;
  };
  const Tolerances& tol = s.tol;
  const Backend backend = s.backend;
  const std::uint64_t plane_seed = detail::mix_seed(s.seed, "sectional-planes");
  const auto recs = parallel_map<Rec>(pts, [&](const Vec<4>& x) {
    const CurvatureBundle<4> b = curvature_bundle(chart, x, backend);
    const Jet2<4> f = sol.potential.jet(x);
    Rec r;
    const Frame<4> fr = orthonormal_frame(b.g, chart.orientation);
    r.riem_norm = frame_norm(fr, b.Riem);
    r.residual = frame_norm(fr, soliton_residual(b, f, sol.lambda, sol.inv_m()));
    r.grad_norm = std::sqrt(std::max(0.0, grad_norm_squared(b, f)));
    r.hypothesis_ok = r.residual <= tol.tau_sol * (1.0 + r.riem_norm);

    const Ten3<4> d = d_tensor(b, f);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          r.skew = std::max(r.skew, std::abs(d[i][j][k] + d[j][i][k]));
    r.d_norm = frame_norm(fr, d);
    const DTensorTraces tr = d_tensor_traces(b, d);
    r.traces = std::max({tr.trace_ij, tr.trace_ik, tr.trace_jk});

    const EigenframeChecks ec = eigenframe_checks(b, f, chart.orientation, tol.tau_dual);
    r.distinct = ec.max_distinct;
    r.pair_sum = ec.max_pair_sum;
    r.diji = ec.max_diji;
    r.diij = ec.max_diij;
    r.halfflat = ec.halfflat;
    r.w_gradf = ec.w_gradf_norm;

    const ContractionCheck cc = weyl_contraction_check(b, f, sol.lambda, sol.inv_m(), tol.tau_sol);
    r.contraction = cc.residual;

    // Sectional curvature sampling (hypothesis diagnostic only).
    SampleRng rng(plane_seed ^ fnv1a64(std::string_view(reinterpret_cast<const char*>(x.data()),
                                                        sizeof(double) * 4)));
    r.min_sectional = std::numeric_limits<double>::infinity();
    for (int t = 0; t < 6; ++t) {
      Vec<4> u{}, v{};
      for (int i = 0; i < 4; ++i) {
        u[i] = rng.uniform(-1.0, 1.0);
        v[i] = rng.uniform(-1.0, 1.0);
      }
      r.min_sectional = std::min(r.min_sectional, sectional_curvature(b, u, v));
    }
    return r;
  });

  double residual = 0, grad_max = 0, skew = 0, traces = 0, distinct = 0, diij = 0;
  double pair_sum = 0, diji = 0, contraction = 0, w_gradf = 0, min_sec = recs[0].min_sectional;
  double contraction_all = 0, d_total = 0;
  int gated = 0, hypothesis_ok = 0;
  for (const auto& r : recs) {
    residual = std::max(residual, r.residual);
    grad_max = std::max(grad_max, r.grad_norm);
    skew = std::max(skew, r.skew);
    traces = std::max(traces, r.traces / (1.0 + r.d_norm));
    distinct = std::max(distinct, r.distinct);
    diij = std::max(diij, r.diij);
    contraction_all = std::max(contraction_all, r.contraction / (1.0 + r.riem_norm));
    if (r.hypothesis_ok) {
      ++hypothesis_ok;
      contraction = std::max(contraction, r.contraction / (1.0 + r.riem_norm));
      if (r.halfflat) {
        ++gated;
        pair_sum = std::max(pair_sum, r.pair_sum);
        diji = std::max(diji, r.diji);
        w_gradf = std::max(w_gradf, r.w_gradf / (1.0 + r.riem_norm));
        d_total = std::max(d_total, r.d_norm / (1.0 + r.riem_norm));
      }
    }
    min_sec = std::min(min_sec, r.min_sectional);
  }
  const int n = static_cast<int>(pts.size());
  const std::string& nm = chart.name;
  const bool probe = !expect_soliton;
  detail::add_check(out, nm + "/soliton-residual", "soliton:defining-equation", n, residual,
                    tol.residual(tol.soliton), probe,
                    probe ? "probe entry, not expected to be a soliton" : "");
  detail::add_check(out, nm + "/trivial-flag", "soliton:trivial-iff-constant", n, 0.0, 0.0, true,
                    grad_max <= 1e-12 ? "trivial soliton: |grad f| <= 1e-12 at all points"
                                      : "nontrivial: max |grad f| = " + std::to_string(grad_max));
  detail::add_check(out, nm + "/dtensor-skew", "dtensor:skew-first-pair", n, skew, 0.0);
  detail::add_check(out, nm + "/dtensor-traces", "dtensor:trace-free", n, traces,
                    tol.residual(tol.d_traces));
  detail::add_check(out, nm + "/dtensor-eigenframe-distinct", "dtensor:distinct-indices-vanish",
                    n, distinct, tol.residual(tol.d_distinct));
  detail::add_check(out, nm + "/dtensor-diij", "dtensor:skew-in-frame", n, diij,
                    tol.residual(tol.d_distinct));
  if (gated > 0) {
    detail::add_check(out, nm + "/dtensor-dual-pair-sums", "halfflat:dual-pair-sums", gated,
                      pair_sum, tol.residual(tol.d_distinct));
    detail::add_check(out, nm + "/dtensor-diji", "halfflat:mixed-components-vanish", gated, diji,
                      tol.residual(tol.d_distinct));
    detail::add_check(out, nm + "/dtensor-total", "halfflat:d-tensor-vanishes", gated, d_total,
                      tol.residual(tol.prop_contraction));
    detail::add_check(out, nm + "/weyl-gradient-vanishes", "halfflat:weyl-gradient", gated,
                      w_gradf, tol.residual(tol.prop_contraction));
  } else {
    detail::add_check(out, nm + "/dtensor-dual-pair-sums", "halfflat:dual-pair-sums", 0, 0.0, 0.0,
                      true, "no points satisfied the half-flat soliton gate");
  }
  {
    const bool diag = probe;
    std::string note;
    if (hypothesis_ok < n)
      note = "hypothesis violated at " + std::to_string(n - hypothesis_ok) + "/" +
             std::to_string(n) + " points" + (probe ? " (diagnostic probe)" : "");
    const double shown = hypothesis_ok > 0 ? contraction : contraction_all;
    detail::add_check(out, nm + "/weyl-contraction", "dtensor:equals-weyl-contraction",
                      hypothesis_ok > 0 ? hypothesis_ok : n, shown,
                      tol.residual(tol.prop_contraction), diag || hypothesis_ok == 0, note);
  }
  detail::add_check(out, nm + "/sectional-sample", "hypothesis:positive-sectional", n, 0.0, 0.0,
                    true, "min sampled sectional curvature = " + std::to_string(min_sec));
}

// ---------------------------------------------------------------------------
// Warped suite.
// ---------------------------------------------------------------------------

inline void warped_checks(std::vector<CheckResult>& out, const WarpedChart& wc,
                          const SolitonData* sol, const std::vector<Vec<4>>& pts,
                          const CheckSettings& s) {
  const Tolerances& tol = s.tol;
  const std::string& nm = wc.chart.name;

  // Fiber validation on its own sample set (must pass before 4d use).
  {
    const SampleSet<3> fpts =
        sample_points(wc.fiber.chart, std::max(8, s.samples / 4),
                      detail::mix_seed(s.seed, "fiber"));
    struct FRec {
      double einstein = 0, scalar_dev = 0, noneinstein = 0, w3d = 0;
      double scalar = 0;
    };
    const double kappa = wc.fiber.kappa;
    const Chart<3>& fchart = wc.fiber.chart;
    const Backend backend = s.backend;
    const auto recs = parallel_map<FRec>(fpts.points, [&](const Vec<3>& t) {
      const CurvatureBundle<3> b = curvature_bundle(fchart, t, backend);
      const Frame<3> fr = orthonormal_frame(b.g);
      FRec r;
      r.scalar = b.R;
      Mat<3> dev{};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) dev[i][j] = b.Ric[i][j] - 2.0 * kappa * b.g[i][j];
      r.einstein = frame_norm(fr, dev);
      Mat<3> tracefree{};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) tracefree[i][j] = b.Ric[i][j] - (b.R / 3.0) * b.g[i][j];
      r.noneinstein = frame_norm(fr, tracefree);
      r.w3d = frame_norm(fr, b.W);
      return r;
    });
    double einstein = 0, w3d = 0, scalar_spread = 0, noneinstein_min = 1e300;
    const double expected_R = wc.fiber.einstein() ? 6.0 * kappa : 2.0 * kappa;
    for (const auto& r : recs) {
      einstein = std::max(einstein, r.einstein);
      w3d = std::max(w3d, r.w3d);
      scalar_spread = std::max(scalar_spread, std::abs(r.scalar - expected_R));
      noneinstein_min = std::min(noneinstein_min, r.noneinstein);
    }
    const int fn = static_cast<int>(fpts.points.size());
    if (wc.fiber.einstein()) {
      detail::add_check(out, nm + "/fiber-einstein", "fiber:space-form", fn, einstein,
                        tol.residual(tol.anchor));
    } else {
      detail::add_check(out, nm + "/fiber-scalar-constant", "fiber:constant-scalar", fn,
                        scalar_spread, tol.residual(tol.anchor));
      detail::add_check(out, nm + "/fiber-non-einstein", "fiber:traceless-ricci-large", fn,
                        noneinstein_min > 0.1 ? 0.0 : 1.0, 0.0, false,
                        "min traceless Ricci norm = " + std::to_string(noneinstein_min));
    }
    detail::add_check(out, nm + "/fiber-weyl-3d", "weyl:vanishes-in-3d", fn, w3d,
                      tol.residual(tol.weyl_3d));
  }

  struct Rec {
    double block = 0, eq = 0, ric_cross = 0;
  };
  const Backend backend = s.backend;
  const bool space_form = wc.fiber.einstein();
  const auto recs = parallel_map<Rec>(pts, [&](const Vec<4>& x) {
    Rec r;
    const Mat<4> g = wc.chart.metric_values(x);
    r.block = std::max(std::abs(g[0][0] - 1.0),
                       std::max({std::abs(g[0][1]), std::abs(g[0][2]), std::abs(g[0][3])}));
    const WarpedWeylCheck chk = warped_weyl_check(wc, x, backend);
    r.eq = chk.residual / (1.0 + chk.riem_norm);
    if (space_form) {
      // Closed-form radial Ricci: Ric_rr = −3φ″/φ, Ric_ab = (2κ − φφ″ − 2φ′²) ḡ_ab.
      const CurvatureBundle<4> b = curvature_bundle(wc.chart, x, backend);
      const auto [phi, dphi, ddphi] = wc.warp.eval(x[0]);
      const Mat<3> fg = wc.fiber.chart.metric_values(wc.fiber_point(x));
      Mat<4> expect{};
      expect[0][0] = -3.0 * ddphi / phi;
      const double coef = 2.0 * wc.fiber.kappa - phi * ddphi - 2.0 * dphi * dphi;
      for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c) expect[a + 1][c + 1] = coef * fg[a][c];
      Mat<4> dev{};
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) dev[i][j] = b.Ric[i][j] - expect[i][j];
      const Frame<4> fr = orthonormal_frame(b.g);
      r.ric_cross = frame_norm(fr, dev) / (1.0 + frame_norm(fr, b.Ric));
    }
    return r;
  });
  double block = 0, eq = 0, ric_cross = 0;
  for (const auto& r : recs) {
    block = std::max(block, r.block);
    eq = std::max(eq, r.eq);
    ric_cross = std::max(ric_cross, r.ric_cross);
  }
  const int n = static_cast<int>(pts.size());
  detail::add_check(out, nm + "/block-structure", "warped:exact-block-metric", n, block, 0.0);
  detail::add_check(out, nm + "/mixed-weyl-identity", "warped:radial-weyl-equals-fiber-ricci", n,
                    eq, tol.residual(tol.warped_weyl));
  if (space_form)
    detail::add_check(out, nm + "/warped-ricci-crosscheck", "warped:ricci-closed-form", n,
                      ric_cross, tol.residual(tol.warped_ricci));

  if (sol) {
    // Level value: the potential at the middle of the interval.
    Vec<4> mid{};
    mid[0] = 0.5 * (wc.interval.first + wc.interval.second);
    for (int i = 0; i < 3; ++i) {
      const auto [lo, hi] = wc.fiber.chart.domain.range[i];
      mid[i + 1] = 0.5 * (lo + hi);
    }
    const double c = sol->potential.value(mid);
    const LevelsetCheck lc =
        levelset_spread(wc, sol->potential, c, 24, detail::mix_seed(s.seed, "levelset"));
    detail::add_check(out, nm + "/levelset-constancy", "warped:gradient-constant-on-levels",
                      lc.points, lc.spread, tol.residual(tol.levelset), false,
                      "level f = " + std::to_string(c) + " at r = " + std::to_string(lc.r_level));
  }
}

// ---------------------------------------------------------------------------
// Synthesized solitons and the catalog-wide suite.
// ---------------------------------------------------------------------------

inline void synthesized_checks(std::vector<CheckResult>& out, const SynthSeed& seed_spec,
                               const CheckSettings& s) {
  SolitonProfile profile = integrate_profile(seed_spec.init, seed_spec.params, seed_spec.interval);
  const bool complete = profile.stop == ProfileStop::Completed;
  detail::add_check(out, seed_spec.name + "/integration", "profile:admissible-trajectory",
                    static_cast<int>(profile.r.size()), complete ? 0.0 : 1.0, 0.0, false,
                    std::string(to_string(profile.stop)) +
                        (profile.note.empty() ? "" : ": " + profile.note));
  if (!complete && profile.r.size() < 8) return;
  SynthesizedSoliton syn = assemble_soliton(std::move(profile), seed_spec.name);

  const SampleSet<4> pts =
      sample_points(syn.warped.chart, s.samples, detail::mix_seed(s.seed, seed_spec.name));
  soliton_checks(out, syn.warped.chart, syn.soliton, true, pts.points, s);
  warped_checks(out, syn.warped, &syn.soliton, pts.points, s);
}

/// Everything on the catalog: curvature, duality, soliton and warped suites
/// over the named entries, warped fiber probes, and the synthesized profiles.
inline Report run_suite(const CheckSettings& s) {
  Report rep;
  rep.target = "catalog";
  rep.backend = s.both_backends ? "both" : (s.backend == Backend::Jet ? "jet" : "fd");
  rep.seed = s.seed;
  rep.samples = s.samples;

  duality_static_checks(rep.checks);

  for (const std::string& name : catalog_names()) {
    const CatalogEntry e = catalog_entry(name);
    const SampleSet<4> pts = sample_points(e.chart, s.samples, detail::mix_seed(s.seed, name));
    rep.skipped_points += pts.rejected;
    curvature_checks(rep.checks, e.chart, pts.points, s);
    duality_checks(rep.checks, e.chart, pts.points, s);
    if (e.soliton)
      soliton_checks(rep.checks, e.chart, *e.soliton, e.expect_soliton, pts.points, s);
    if (e.warped)
      warped_checks(rep.checks, *e.warped, e.expect_soliton ? &*e.soliton : nullptr, pts.points,
                    s);
  }

  // Warped probes over the remaining fiber kinds.
  {
    struct Probe {
      const char* name;
      FiberKind kind;
      double kappa;
      const char* phi;
      std::pair<double, double> interval;
    };
    const std::array<Probe, 3> probes = {{{"warped-R3-exp", FiberKind::Flat, 0.0, "exp(r)", {0.0, 1.0}},
                                          {"warped-H3-cosh", FiberKind::Hyperbolic, -1.0,
                                           "cosh(r)", {0.0, 1.0}},
                                          {"warped-S2xE1-exp", FiberKind::SphereLine, 1.0,
                                           "exp(r)", {0.0, 1.0}}}};
    for (const auto& p : probes) {
      WarpedChart wc = build_warped(warp_from_expr(parse(p.phi, {"r"})),
                                    make_fiber(p.kind, p.kappa), p.interval, p.name);
      const SampleSet<4> pts = sample_points(wc.chart, s.samples, detail::mix_seed(s.seed, p.name));
      rep.skipped_points += pts.rejected;
      curvature_checks(rep.checks, wc.chart, pts.points, s);
      warped_checks(rep.checks, wc, nullptr, pts.points, s);
    }
  }

  for (const SynthSeed& seed_spec : synthesized_seeds()) synthesized_checks(rep.checks, seed_spec, s);
  return rep;
}

} // namespace sforge
