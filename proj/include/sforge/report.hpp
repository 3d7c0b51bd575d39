#pragma once

#include <chrono>
#include <cinttypes>
#include <ctime>

#include <json.hpp>

#include "sforge/linalg.hpp"

namespace sforge {

inline constexpr const char* kToolName = "soliton-forge";
inline constexpr const char* kToolVersion = "0.1.0";

/// Canonical statement of every sign and normalization choice the engine is
/// built on. The report carries a hash of this text so results from builds
/// with different conventions can never be confused. docs/conventions.md
/// mirrors it.
inline constexpr const char* kConventionLedger =
    "curvature: R_ijkl = g_lm (d_j G^m_ik - d_i G^m_jk + G^m_jp G^p_ik - G^m_ip G^p_jk); "
    "Ric_ik = g^jl R_ijkl; R = g^ik Ric_ik; unit round sphere has sectional +1, Ric = 3g, R = 12. "
    "weyl: W_ijkl = R_ijkl - (Ric_ik g_jl + Ric_jl g_ik - Ric_il g_jk - Ric_jk g_il)/(n-2) "
    "+ R (g_jl g_ik - g_il g_jk)/((n-1)(n-2)). "
    "bivector basis: [e12, e13, e14, e23, e24, e34], epsilon_1234 = +1; "
    "dual pairs 12<->34 (+), 13<->24 (-), 14<->23 (+); star(e12) = e34. "
    "d-tensor (n=4): D_ijk = (Ric_jk f_i - Ric_ik f_j)/2 + (Ric_il f^l g_jk - Ric_jl f^l g_ik)/6 "
    "- R (g_jk f_i - g_ik f_j)/6. "
    "soliton residual: Hess_ij f - f_i f_j/m - (R - lambda) g_ij. "
    "warped mixed identity: 2 W(dr,a,dr,b) = (Rbar/3) gbar_ab - Ricbar_ab. "
    "profile: E = exp(-f/m), phi = f' E, phi' = (f'' - f'^2/m) E, "
    "phi'' = (kappa - phi'^2)/phi - phi (lambda + f'' - f'^2/m)/6, "
    "f''' = phi''/E + 3 f' f''/m - f'^3/m^2.";

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string convention_hash() {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a64(kConventionLedger));
  return buf;
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct CheckResult {
  std::string name;
  std::string anchor;      // which identity or contract the check pins down
  int points = 0;
  double max_residual = 0;
  double tolerance = 0;
  bool pass = false;
  bool diagnostic = false; // informational; never flips the global verdict
  std::string note;
};

struct Report {
  std::string target;      // catalog entry, spec path, or "catalog"
  std::string backend = "jet";
  std::uint64_t seed = 0;
  int samples = 0;
  std::vector<CheckResult> checks;
  int skipped_points = 0;
  std::string timestamp = utc_timestamp();

  bool pass() const {
    for (const auto& c : checks)
      if (!c.diagnostic && !c.pass) return false;
    return true;
  }
};

inline nlohmann::ordered_json to_json(const Report& r, bool with_timestamp = true) {
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["conventions"] = convention_hash();
  if (with_timestamp) j["timestamp"] = r.timestamp;
  j["target"] = r.target;
  j["backend"] = r.backend;
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  j["skipped_points"] = r.skipped_points;
  j["verdict"] = r.pass() ? "pass" : "fail";
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["anchor"] = c.anchor;
    cj["points"] = c.points;
    cj["max_residual"] = c.max_residual;
    cj["tolerance"] = c.tolerance;
    cj["pass"] = c.pass;
    cj["diagnostic"] = c.diagnostic;
    if (!c.note.empty()) cj["note"] = c.note;
    arr.push_back(std::move(cj));
  }
  j["checks"] = std::move(arr);
  return j;
}

} // namespace sforge
