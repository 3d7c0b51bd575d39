#pragma once

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "sforge/warped.hpp"

namespace sforge {

class ProfileError : public Error {
public:
  using Error::Error;
};

/// Constants of the profile equation: soliton constants λ and m (m may be
/// infinite) and the sectional curvature κ of the space-form fiber.
struct ProfileParams {
  double lambda = 0.0;
  double m = std::numeric_limits<double>::infinity();
  double kappa = 1.0;

  double inv_m() const { return std::isinf(m) ? 0.0 : 1.0 / m; }
};

struct ProfileState {
  double f = 0, f1 = 0, f2 = 0;  // f, f′, f″
};

/// Third derivative of the potential along the warped soliton ansatz.
/// The fiber block forces φ = f′ e^{−f/m}; the radial block then pins the
/// scalar curvature to R = λ + f″ − f′²/m, which yields
///   φ″ = φ (κ − φ′²)/φ² − φ (λ + f″ − f′²/m)/6
///   f‴ = φ″/E + 3 f′ f″/m − f′³/m²,  E = e^{−f/m}.
inline double profile_rhs(const ProfileState& y, const ProfileParams& p) {
  if (!(y.f1 > 0.0)) throw ProfileError("profile reached a critical point (f' <= 0)");
  const double im = p.inv_m();
  const double E = std::exp(-y.f * im);
  const double phi = y.f1 * E;
  const double dphi = (y.f2 - y.f1 * y.f1 * im) * E;
  if (!(phi > 0.0)) throw ProfileError("warping function collapsed (phi <= 0)");
  const double ddphi = phi * (p.kappa - dphi * dphi) / (phi * phi) -
                       phi * (p.lambda + y.f2 - y.f1 * y.f1 * im) / 6.0;
  return ddphi / E + 3.0 * y.f1 * y.f2 * im - y.f1 * y.f1 * y.f1 * im * im;
}

struct StepControl {
  bool adaptive = true;
  double tol = 1e-10;     // per-step local error estimate
  double h0 = 0;          // initial step; interval/64 when 0
  double hmin = 1e-12;
  double hmax = 0;        // step cap; interval/16 when 0 (keeps nodes dense for
                          // the Hermite dense output)
  double fixed_h = 0;     // used when adaptive == false
};

enum class ProfileStop { Completed, CriticalPoint, WarpCollapse, StepUnderflow };

inline const char* to_string(ProfileStop s) {
  switch (s) {
    case ProfileStop::Completed: return "completed";
    case ProfileStop::CriticalPoint: return "critical-point";
    case ProfileStop::WarpCollapse: return "warp-collapse";
    case ProfileStop::StepUnderflow: return "step-underflow";
  }
  return "?";
}

/// Dense output of one integrated profile. Between nodes the potential is a
/// two-point quintic Hermite interpolant of (f, f′, f″); derivative data at
/// any r comes from the stored state and the ODE right side, never from
/// numerical differentiation.
struct SolitonProfile {
  std::vector<double> r;
  std::vector<ProfileState> y;
  ProfileParams params;
  ProfileStop stop = ProfileStop::Completed;
  std::string note;
  StepControl control;

  double r_begin() const { return r.front(); }
  double r_end() const { return r.back(); }

  ProfileState state_at(double rq) const {
    if (r.size() < 2) throw ProfileError("profile has fewer than two nodes");
    const double span = r.back() - r.front();
    if (rq < r.front() - 1e-12 * span || rq > r.back() + 1e-12 * span)
      throw ProfileError("profile evaluated outside its integrated interval");
    rq = std::clamp(rq, r.front(), r.back());
    const auto it = std::upper_bound(r.begin(), r.end(), rq);
    std::size_t seg = (it == r.begin()) ? 0 : static_cast<std::size_t>(it - r.begin()) - 1;
    seg = std::min(seg, r.size() - 2);
    const double h = r[seg + 1] - r[seg];
    const double t = (rq - r[seg]) / h;
    const ProfileState& a = y[seg];
    const ProfileState& b = y[seg + 1];

    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    // Quintic Hermite basis (value, slope, curvature at both ends).
    const double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    const double H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
    const double H2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
    const double H3 = 10 * t3 - 15 * t4 + 6 * t5;
    const double H4 = -4 * t3 + 7 * t4 - 3 * t5;
    const double H5 = 0.5 * (t3 - 2 * t4 + t5);

    const double dH0 = -30 * t2 + 60 * t3 - 30 * t4;
    const double dH1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
    const double dH2 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4);
    const double dH3 = 30 * t2 - 60 * t3 + 30 * t4;
    const double dH4 = -12 * t2 + 28 * t3 - 15 * t4;
    const double dH5 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4);

    const double sH0 = -60 * t + 180 * t2 - 120 * t3;
    const double sH1 = -36 * t + 96 * t2 - 60 * t3;
    const double sH2 = 0.5 * (2 - 18 * t + 36 * t2 - 20 * t3);
    const double sH3 = 60 * t - 180 * t2 + 120 * t3;
    const double sH4 = -24 * t + 84 * t2 - 60 * t3;
    const double sH5 = 0.5 * (6 * t - 24 * t2 + 20 * t3);

    ProfileState out;
    out.f = a.f * H0 + a.f1 * h * H1 + a.f2 * h * h * H2 +
            b.f * H3 + b.f1 * h * H4 + b.f2 * h * h * H5;
    out.f1 = (a.f * dH0 + b.f * dH3) / h + a.f1 * dH1 + b.f1 * dH4 +
             h * (a.f2 * dH2 + b.f2 * dH5);
    out.f2 = (a.f * sH0 + b.f * sH3) / (h * h) + (a.f1 * sH1 + b.f1 * sH4) / h +
             a.f2 * sH2 + b.f2 * sH5;
    return out;
  }

  /// φ, φ′, φ″ at r through the constraint φ = f′ e^{−f/m}.
  std::array<double, 3> warp_at(double rq) const {
    const ProfileState s = state_at(rq);
    const double im = params.inv_m();
    const double E = std::exp(-s.f * im);
    const double phi = s.f1 * E;
    const double dphi = (s.f2 - s.f1 * s.f1 * im) * E;
    const double f3 = profile_rhs(s, params);
    const double ddphi = E * (f3 - 3.0 * s.f1 * s.f2 * im + s.f1 * s.f1 * s.f1 * im * im);
    return {phi, dphi, ddphi};
  }
};

namespace detail {

inline ProfileState rk4_step(const ProfileState& y, double h, const ProfileParams& p) {
  const auto deriv = [&p](const ProfileState& s) {
    return ProfileState{s.f1, s.f2, profile_rhs(s, p)};
  };
  const auto axpy = [](const ProfileState& s, double a, const ProfileState& d) {
    return ProfileState{s.f + a * d.f, s.f1 + a * d.f1, s.f2 + a * d.f2};
  };
  const ProfileState k1 = deriv(y);
  const ProfileState k2 = deriv(axpy(y, 0.5 * h, k1));
  const ProfileState k3 = deriv(axpy(y, 0.5 * h, k2));
  const ProfileState k4 = deriv(axpy(y, h, k3));
  return ProfileState{
      y.f + h / 6.0 * (k1.f + 2 * k2.f + 2 * k3.f + k4.f),
      y.f1 + h / 6.0 * (k1.f1 + 2 * k2.f1 + 2 * k3.f1 + k4.f1),
      y.f2 + h / 6.0 * (k1.f2 + 2 * k2.f2 + 2 * k3.f2 + k4.f2)};
}

inline bool admissible(const ProfileState& y, const ProfileParams& p) {
  if (!(y.f1 > 1e-8)) return false;
  const double phi = y.f1 * std::exp(-y.f * p.inv_m());
  return phi > 1e-8;
}

} // namespace detail

/// Classical 4th-order integration of the profile equation with Richardson
/// step halving for the local error estimate. Integration halts, keeping the
/// partial profile, as soon as f′ or φ approach zero; the no-critical-point
/// hypothesis is enforced rather than assumed.
inline SolitonProfile integrate_profile(ProfileState init, ProfileParams params,
                                        std::pair<double, double> interval,
                                        StepControl control = {}) {
  SolitonData::validate_m(params.m);
  if (!(init.f1 > 0.0)) throw ProfileError("initial f' must be positive");
  if (!(interval.second > interval.first)) throw ProfileError("empty integration interval");

  SolitonProfile out;
  out.params = params;
  out.control = control;
  out.r.push_back(interval.first);
  out.y.push_back(init);

  double r = interval.first;
  ProfileState y = init;
  double h = control.adaptive
                 ? (control.h0 > 0 ? control.h0 : (interval.second - interval.first) / 64.0)
                 : control.fixed_h;
  if (!(h > 0)) throw ProfileError("step control: nonpositive step");
  const double hmax = control.adaptive
                          ? (control.hmax > 0 ? control.hmax
                                              : (interval.second - interval.first) / 16.0)
                          : h;

  while (r < interval.second - 1e-14 * (interval.second - interval.first)) {
    h = std::min({h, hmax, interval.second - r});
    ProfileState next;
    bool halted = false;
    try {
      if (control.adaptive) {
        for (;;) {
          const ProfileState big = detail::rk4_step(y, h, params);
          const ProfileState half = detail::rk4_step(y, 0.5 * h, params);
          const ProfileState two = detail::rk4_step(half, 0.5 * h, params);
          // Step-doubling error measure: the raw difference of the h and
          // h/2+h/2 solutions (a conservative bound on the accepted step's
          // local error, which Richardson puts 15x smaller).
          const double err = std::max({std::abs(two.f - big.f) / (1.0 + std::abs(two.f)),
                                       std::abs(two.f1 - big.f1) / (1.0 + std::abs(two.f1)),
                                       std::abs(two.f2 - big.f2) / (1.0 + std::abs(two.f2))});
          if (err <= control.tol) {
            next = two;
            const double grow = err > 0 ? 0.9 * std::pow(control.tol / err, 0.2) : 5.0;
            const double accepted = h;
            h = accepted * std::clamp(grow, 0.2, 5.0);
            r += accepted;
            break;
          }
          h *= 0.5;
          if (h < control.hmin) {
            out.stop = ProfileStop::StepUnderflow;
            out.note = "step underflow at r = " + std::to_string(r);
            return out;
          }
        }
      } else {
        next = detail::rk4_step(y, h, params);
        r += h;
      }
    } catch (const ProfileError& err) {
      out.stop = std::string(err.what()).find("critical") != std::string::npos
                     ? ProfileStop::CriticalPoint
                     : ProfileStop::WarpCollapse;
      out.note = std::string(err.what()) + " near r = " + std::to_string(r);
      halted = true;
    }
    if (halted) return out;
    if (!detail::admissible(next, params)) {
      out.stop = (next.f1 <= 1e-8) ? ProfileStop::CriticalPoint : ProfileStop::WarpCollapse;
      out.note = "admissibility lost near r = " + std::to_string(r);
      return out;
    }
    y = next;
    out.r.push_back(r);
    out.y.push_back(y);
  }
  out.stop = ProfileStop::Completed;
  return out;
}

inline Warp warp_from_profile(std::shared_ptr<const SolitonProfile> profile) {
  return Warp{[profile](double r) { return profile->warp_at(r); }, true};
}

inline ScalarSource<4> potential_from_profile(std::shared_ptr<const SolitonProfile> profile) {
  ScalarSource<4> src;
  src.jet = [profile](const Vec<4>& x) {
    const ProfileState s = profile->state_at(x[0]);
    Jet2<4> j;
    j.value = s.f;
    j.grad[0] = s.f1;
    j.h(0, 0) = s.f2;
    return j;
  };
  src.value = [profile](const Vec<4>& x) { return profile->state_at(x[0]).f; };
  return src;
}

/// Assembles the warped soliton metric and its potential from a profile.
struct SynthesizedSoliton {
  std::shared_ptr<const SolitonProfile> profile;
  WarpedChart warped;
  SolitonData soliton;
};

inline SynthesizedSoliton assemble_soliton(SolitonProfile profile, std::string name = {}) {
  if (profile.r.size() < 8)
    throw ProfileError("profile too short to assemble a chart (" +
                       std::string(to_string(profile.stop)) + ": " + profile.note + ")");
  auto shared = std::make_shared<const SolitonProfile>(std::move(profile));
  SynthesizedSoliton out;
  out.profile = shared;
  FiberSpec fiber = make_fiber(FiberKind::Sphere, shared->params.kappa);
  out.warped = build_warped(warp_from_profile(shared), std::move(fiber),
                            {shared->r_begin(), shared->r_end()},
                            name.empty() ? "synthesized-soliton" : std::move(name));
  out.soliton.potential = potential_from_profile(shared);
  out.soliton.lambda = shared->params.lambda;
  out.soliton.m = shared->params.m;
  return out;
}

// ---------------------------------------------------------------------------
// CSV export/import. Columns: r, f, f', f'', phi, phi', phi''.
// ---------------------------------------------------------------------------

inline void write_profile_csv(std::ostream& os, const SolitonProfile& p) {
  os << "r,f,f',f'',phi,phi',phi''\n";
  char buf[512];
  for (std::size_t i = 0; i < p.r.size(); ++i) {
    const auto w = p.warp_at(p.r[i]);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", p.r[i],
                  p.y[i].f, p.y[i].f1, p.y[i].f2, w[0], w[1], w[2]);
    os << buf;
  }
}

inline SolitonProfile read_profile_csv(std::istream& is, ProfileParams params) {
  SolitonProfile out;
  out.params = params;
  std::string line;
  if (!std::getline(is, line) || line.rfind("r,f,", 0) != 0)
    throw ProfileError("profile CSV: missing or malformed header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::array<double, 7> col{};
    std::stringstream ss(line);
    std::string cell;
    for (int c = 0; c < 7; ++c) {
      if (!std::getline(ss, cell, ',')) throw ProfileError("profile CSV: short row");
      col[c] = std::strtod(cell.c_str(), nullptr);
    }
    out.r.push_back(col[0]);
    out.y.push_back(ProfileState{col[1], col[2], col[3]});
    const double im = params.inv_m();
    const double phi = col[2] * std::exp(-col[1] * im);
    if (std::abs(phi - col[4]) > 1e-12 * (1.0 + std::abs(phi)))
      throw ProfileError("profile CSV: phi column inconsistent with f, f' and m");
  }
  if (out.r.size() < 2) throw ProfileError("profile CSV: too few rows");
  return out;
}

} // namespace sforge
