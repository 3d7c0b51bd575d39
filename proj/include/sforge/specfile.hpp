#pragma once

#include <filesystem>
#include <fstream>
#include <set>

#include "sforge/checks.hpp"

namespace sforge {

class SpecError : public Error {
public:
  using Error::Error;
};

/// A verification target loaded from a spec document: a 3d or 4d chart (or a
/// warped product), optional soliton data, and the sampling block.
struct LoadedSpec {
  std::string name;
  int dimension = 4;
  std::optional<Chart<3>> chart3;
  std::optional<Chart<4>> chart4;
  std::optional<WarpedChart> warped;
  std::optional<SolitonData> soliton;
  std::shared_ptr<const SolitonProfile> profile;
  bool expect_soliton = true;
  int samples = 40;
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerance_overrides;
};

namespace detail {

inline void require_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  if (!j.is_object()) throw SpecError(where + " must be an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key))
      throw SpecError("unknown key '" + key + "' in " + where);
}

inline double number_at(const nlohmann::json& j, const std::string& key,
                        const std::string& where) {
  if (!j.contains(key) || !j[key].is_number())
    throw SpecError(where + ": '" + key + "' must be a number");
  return j[key].get<double>();
}

template <std::size_t N>
Chart<N> chart_from_json(const nlohmann::json& j, const std::string& name) {
  const auto& jc = j.at("coordinates");
  if (!jc.is_array() || jc.size() != N)
    throw SpecError("'coordinates' must list exactly " + std::to_string(N) + " names");
  std::array<std::string, N> coords;
  for (std::size_t i = 0; i < N; ++i) {
    if (!jc[i].is_string()) throw SpecError("'coordinates' entries must be strings");
    coords[i] = jc[i].get<std::string>();
  }
  const auto& jd = j.at("domain");
  if (!jd.is_array() || jd.size() != N)
    throw SpecError("'domain' must list one [lo, hi] pair per coordinate");
  Box<N> box;
  for (std::size_t i = 0; i < N; ++i) {
    if (!jd[i].is_array() || jd[i].size() != 2 || !jd[i][0].is_number() || !jd[i][1].is_number())
      throw SpecError("'domain' entries must be [lo, hi] number pairs");
    box.range[i] = {jd[i][0].get<double>(), jd[i][1].get<double>()};
    if (!(box.range[i].first < box.range[i].second))
      throw SpecError("'domain' intervals must be nonempty");
  }
  const auto& jm = j.at("metric");
  if (!jm.is_array() || jm.size() != N)
    throw SpecError("'metric' must be a " + std::to_string(N) + "x" + std::to_string(N) +
                    " matrix of expression strings");
  std::array<std::array<std::string, N>, N> src;
  for (std::size_t i = 0; i < N; ++i) {
    if (!jm[i].is_array() || jm[i].size() != N)
      throw SpecError("'metric' rows must have " + std::to_string(N) + " entries");
    for (std::size_t k = 0; k < N; ++k) {
      if (!jm[i][k].is_string()) throw SpecError("'metric' entries must be expression strings");
      src[i][k] = jm[i][k].get<std::string>();
    }
  }

  std::vector<std::string> params;
  ParamMap param_values;
  if (j.contains("parameters")) {
    if (!j["parameters"].is_object()) throw SpecError("'parameters' must map names to numbers");
    for (const auto& item : j["parameters"].items()) {
      if (!item.value().is_number())
        throw SpecError("parameter '" + item.key() + "' must be a number");
      params.push_back(item.key());
      param_values[item.key()] = item.value().template get<double>();
    }
  }

  std::array<std::array<Expr, N>, N> exprs;
  try {
    exprs = parse_metric_exprs<N>(src, coords, params);
  } catch (const ParseError& e) {
    throw SpecError(std::string("metric expression: ") + e.what());
  }
  // Symmetry: structural equality, or numeric agreement at probe points.
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = i + 1; k < N; ++k) {
      if (structurally_equal(exprs[i][k], exprs[k][i])) continue;
      SampleRng rng(12345);
      for (int probe = 0; probe < 16; ++probe) {
        Vec<N> x{};
        for (std::size_t c = 0; c < N; ++c) {
          const auto [lo, hi] = box.range[c];
          const double pad = 0.05 * (hi - lo);
          x[c] = rng.uniform(lo + pad, hi - pad);
        }
        const double a = eval_value<N>(exprs[i][k], x, param_values);
        const double b = eval_value<N>(exprs[k][i], x, param_values);
        if (std::abs(a - b) > 1e-14 * (1.0 + std::abs(a)))
          throw SpecError("metric is not symmetric: entries (" + std::to_string(i) + "," +
                          std::to_string(k) + ") and (" + std::to_string(k) + "," +
                          std::to_string(i) + ") differ");
      }
    }

  int orientation = +1;
  if (j.contains("orientation")) {
    if (!j["orientation"].is_number_integer() ||
        (j["orientation"].get<int>() != 1 && j["orientation"].get<int>() != -1))
      throw SpecError("'orientation' must be 1 or -1");
    orientation = j["orientation"].get<int>();
  }
  return make_expr_chart<N>(name, coords, box, std::move(exprs), param_values, orientation);
}

inline double parse_m(const nlohmann::json& j) {
  if (!j.contains("m")) return std::numeric_limits<double>::infinity();
  if (j["m"].is_string()) {
    const auto s = j["m"].get<std::string>();
    if (s == "infinite" || s == "inf") return std::numeric_limits<double>::infinity();
    throw SpecError("'m' must be a nonzero number or \"infinite\"");
  }
  if (!j["m"].is_number()) throw SpecError("'m' must be a nonzero number or \"infinite\"");
  const double m = j["m"].get<double>();
  if (m == 0.0) throw SpecError("'m' must be nonzero when finite");
  return m;
}

} // namespace detail

inline LoadedSpec load_spec_json(const nlohmann::json& j, const std::filesystem::path& base_dir,
                                 const std::string& default_name) {
  detail::require_keys(j, {"name", "dimension", "coordinates", "domain", "metric", "orientation",
                           "parameters", "potential", "lambda", "m", "expect_soliton", "warped",
                           "sampling", "tolerances"},
                       "spec document");
  LoadedSpec spec;
  spec.name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>()
                                                          : default_name;

  if (!j.contains("sampling")) throw SpecError("'sampling' block is required");
  detail::require_keys(j["sampling"], {"count", "seed"}, "'sampling'");
  if (!j["sampling"].contains("seed") || !j["sampling"]["seed"].is_number_integer())
    throw SpecError("'sampling.seed' is required for reproducibility and must be an integer");
  if (!j["sampling"].contains("count") || !j["sampling"]["count"].is_number_integer() ||
      j["sampling"]["count"].get<int>() < 1)
    throw SpecError("'sampling.count' must be a positive integer");
  spec.samples = j["sampling"]["count"].get<int>();
  spec.seed = j["sampling"]["seed"].get<std::uint64_t>();

  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) throw SpecError("'tolerances' must map names to numbers");
    Tolerances probe;
    for (const auto& [k, v] : j["tolerances"].items()) {
      if (!v.is_number()) throw SpecError("tolerance '" + k + "' must be a number");
      try {
        probe.apply_named(k, v.get<double>());
      } catch (const Error& e) {
        throw SpecError(e.what());
      }
      spec.tolerance_overrides[k] = v.get<double>();
    }
  }

  const bool has_metric = j.contains("metric");
  const bool has_warped = j.contains("warped");
  if (has_metric == has_warped)
    throw SpecError("exactly one of 'metric' and 'warped' must be given");

  if (has_metric) {
    if (!j.contains("dimension") || !j["dimension"].is_number_integer())
      throw SpecError("'dimension' (3 or 4) is required with 'metric'");
    spec.dimension = j["dimension"].get<int>();
    if (spec.dimension == 3) {
      spec.chart3 = detail::chart_from_json<3>(j, spec.name);
    } else if (spec.dimension == 4) {
      spec.chart4 = detail::chart_from_json<4>(j, spec.name);
    } else {
      throw SpecError("'dimension' must be 3 or 4");
    }
  } else {
    const auto& jw = j["warped"];
    detail::require_keys(jw, {"fiber", "kappa", "radius", "interval", "phi", "profile_csv"},
                         "'warped'");
    if (j.contains("dimension") && j["dimension"].get<int>() != 4)
      throw SpecError("warped charts are 4-dimensional");
    spec.dimension = 4;
    if (!jw.contains("fiber") || !jw["fiber"].is_string())
      throw SpecError("'warped.fiber' must be one of S3, R3, H3, S2xE1");
    const FiberKind kind = fiber_kind_from_name(jw["fiber"].get<std::string>());
    double kappa = (kind == FiberKind::Hyperbolic) ? -1.0 : (kind == FiberKind::Flat ? 0.0 : 1.0);
    if (jw.contains("kappa") && jw.contains("radius"))
      throw SpecError("'warped' takes 'kappa' or 'radius', not both");
    if (jw.contains("kappa")) kappa = detail::number_at(jw, "kappa", "'warped'");
    if (jw.contains("radius")) {
      const double radius = detail::number_at(jw, "radius", "'warped'");
      if (!(radius > 0)) throw SpecError("'warped.radius' must be positive");
      kappa = (kind == FiberKind::Hyperbolic ? -1.0 : 1.0) / (radius * radius);
    }
    const bool has_phi = jw.contains("phi");
    const bool has_csv = jw.contains("profile_csv");
    if (has_phi == has_csv)
      throw SpecError("'warped' needs exactly one of 'phi' and 'profile_csv'");
    std::pair<double, double> interval{0, 1};
    if (has_phi) {
      if (!jw.contains("interval") || !jw["interval"].is_array() || jw["interval"].size() != 2)
        throw SpecError("'warped.interval' must be [r0, r1]");
      interval = {jw["interval"][0].get<double>(), jw["interval"][1].get<double>()};
    } else if (jw.contains("interval")) {
      throw SpecError("'warped.interval' is fixed by the profile; remove it");
    }

    FiberSpec fiber;
    try {
      fiber = make_fiber(kind, kappa);
    } catch (const Error& e) {
      throw SpecError(e.what());
    }

    try {
      if (has_phi) {
        if (!jw["phi"].is_string()) throw SpecError("'warped.phi' must be an expression string");
        const Expr phi = parse(jw["phi"].get<std::string>(), {"r"});
        spec.warped = build_warped(warp_from_expr(phi), std::move(fiber), interval, spec.name);
      } else {
        if (!jw["profile_csv"].is_string())
          throw SpecError("'warped.profile_csv' must be a path string");
        if (!fiber.einstein())
          throw SpecError("profile-backed warped charts need a space-form fiber");
        ProfileParams params;
        params.lambda = detail::number_at(j, "lambda", "spec document");
        params.m = detail::parse_m(j);
        params.kappa = kappa;
        const std::filesystem::path csv =
            base_dir / jw["profile_csv"].get<std::string>();
        std::ifstream in(csv);
        if (!in) throw SpecError("cannot open profile CSV '" + csv.string() + "'");
        auto profile = std::make_shared<const SolitonProfile>(read_profile_csv(in, params));
        spec.profile = profile;
        spec.warped = build_warped(warp_from_profile(profile), std::move(fiber),
                                   {profile->r_begin(), profile->r_end()}, spec.name);
        SolitonData s;
        s.potential = potential_from_profile(profile);
        s.lambda = params.lambda;
        s.m = params.m;
        spec.soliton = std::move(s);
      }
    } catch (const SpecError&) {
      throw;
    } catch (const Error& e) {
      throw SpecError(e.what());
    }
    spec.chart4 = spec.warped->chart;
  }

  if (j.contains("potential")) {
    if (spec.profile)
      throw SpecError("'potential' cannot be combined with a profile-backed warped chart");
    if (!j["potential"].is_string()) throw SpecError("'potential' must be an expression string");
    if (spec.dimension != 4) throw SpecError("'potential' requires a 4-dimensional chart");
    if (!j.contains("lambda")) throw SpecError("'lambda' is required with 'potential'");
    SolitonData s;
    s.lambda = detail::number_at(j, "lambda", "spec document");
    s.m = detail::parse_m(j);
    SolitonData::validate_m(s.m);
    const Chart<4>& chart = *spec.chart4;
    std::vector<std::string> coords(chart.coords.begin(), chart.coords.end());
    try {
      s.potential = scalar_from_expr<4>(parse(j["potential"].get<std::string>(), coords));
    } catch (const ParseError& e) {
      throw SpecError(std::string("potential expression: ") + e.what());
    }
    spec.soliton = std::move(s);
  } else if (!spec.profile && (j.contains("lambda") || j.contains("m"))) {
    throw SpecError("'lambda'/'m' are only meaningful with a potential or profile");
  }

  if (j.contains("expect_soliton")) {
    if (!j["expect_soliton"].is_boolean()) throw SpecError("'expect_soliton' must be a boolean");
    spec.expect_soliton = j["expect_soliton"].get<bool>();
  }
  if (spec.soliton) SolitonData::validate_m(spec.soliton->m);
  return spec;
}

inline LoadedSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SpecError("spec file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return load_spec_json(j, path.parent_path(), path.stem().string());
}

/// Spec document for a synthesized profile, pointing at its CSV.
inline nlohmann::ordered_json assembled_spec_json(const std::string& csv_name,
                                                  const ProfileParams& params, int samples,
                                                  std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["name"] = "synthesized-profile";
  j["warped"] = {{"fiber", params.kappa > 0 ? "S3" : (params.kappa < 0 ? "H3" : "R3")},
                 {"kappa", params.kappa},
                 {"profile_csv", csv_name}};
  j["lambda"] = params.lambda;
  if (std::isinf(params.m))
    j["m"] = "infinite";
  else
    j["m"] = params.m;
  j["sampling"] = {{"count", samples}, {"seed", seed}};
  return j;
}

} // namespace sforge
