#pragma once

#include <iostream>

#include <CLI11.hpp>

#include "sforge/specfile.hpp"

namespace sforge {

namespace detail {

inline void print_report(const Report& r, std::ostream& os) {
  for (const auto& c : r.checks) {
    const char* tag = c.diagnostic ? "diag" : (c.pass ? "PASS" : "FAIL");
    char line[512];
    std::snprintf(line, sizeof line, "[%s] %-52s max=%.3e tol=%.3e points=%d%s%s\n", tag,
                  c.name.c_str(), c.max_residual, c.tolerance, c.points,
                  c.note.empty() ? "" : "  -- ", c.note.c_str());
    os << line;
  }
  os << "verdict: " << (r.pass() ? "pass" : "fail") << "\n";
}

inline void write_report_file(const Report& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write report to '" + path + "'");
  out << to_json(r).dump(2) << "\n";
}

struct TargetArgs {
  std::string target;
  std::string report_path;
  std::optional<double> tol_override;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::string backend = "jet";
};

/// Resolves a catalog name or spec path into a loaded target.
inline LoadedSpec resolve_target(const std::string& target) {
  for (const std::string& name : catalog_names()) {
    if (name == target) {
      CatalogEntry e = catalog_entry(name);
      LoadedSpec spec;
      spec.name = e.name;
      spec.dimension = 4;
      spec.chart4 = std::move(e.chart);
      spec.warped = std::move(e.warped);
      spec.soliton = std::move(e.soliton);
      spec.expect_soliton = e.expect_soliton;
      spec.samples = 40;
      spec.seed = 7;
      return spec;
    }
  }
  return load_spec(target);
}

inline CheckSettings settings_for(const LoadedSpec& spec, const TargetArgs& args) {
  CheckSettings s;
  for (const auto& [k, v] : spec.tolerance_overrides) s.tol.apply_named(k, v);
  if (args.tol_override) s.tol.override_all = *args.tol_override;
  s.samples = args.samples ? *args.samples : spec.samples;
  s.seed = args.seed ? *args.seed : spec.seed;
  if (args.backend == "jet") {
    s.backend = Backend::Jet;
  } else if (args.backend == "fd") {
    s.backend = Backend::Fd;
  } else if (args.backend == "both") {
    s.backend = Backend::Jet;
    s.both_backends = true;
  } else {
    throw SpecError("--backend must be jet, fd or both");
  }
  return s;
}

inline Report make_report(const LoadedSpec& spec, const CheckSettings& s) {
  Report r;
  r.target = spec.name;
  r.backend = s.both_backends ? "both" : (s.backend == Backend::Jet ? "jet" : "fd");
  r.seed = s.seed;
  r.samples = s.samples;
  return r;
}

} // namespace detail

/// Batch front-end. Returns the process exit code: 0 all checks pass,
/// 1 a non-diagnostic check failed, 2 usage or input error.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"numerical verification engine for curvature, duality and soliton identities"};
  app.require_subcommand(1);

  detail::TargetArgs args;
  double tol_value = 0;
  int samples_value = 0;
  std::uint64_t seed_value = 0;

  const auto add_common = [&](CLI::App* cmd, bool with_target) {
    if (with_target)
      cmd->add_option("target", args.target,
                      "catalog entry name or spec file path")
          ->required();
    cmd->add_option("--tol", tol_value,
                    "override the pass tolerance of every residual check");
    cmd->add_option("--samples", samples_value, "sample points per chart");
    cmd->add_option("--seed", seed_value, "sampling seed");
    cmd->add_option("--backend", args.backend, "derivative backend: jet, fd or both")
        ->check(CLI::IsMember({"jet", "fd", "both"}));
    cmd->add_option("--report", args.report_path, "write the JSON report to this path");
  };

  CLI::App* curvature = app.add_subcommand("check-curvature", "curvature tensor invariants");
  CLI::App* duality = app.add_subcommand("check-duality", "Hodge star and W± suite");
  CLI::App* soliton = app.add_subcommand("check-soliton",
                                         "soliton residual, D tensor, contraction identity");
  CLI::App* warped = app.add_subcommand("check-warped", "warped identities and level sets");
  CLI::App* suite = app.add_subcommand("suite", "every check on the built-in catalog");
  add_common(curvature, true);
  add_common(duality, true);
  add_common(soliton, true);
  add_common(warped, true);
  add_common(suite, false);

  CLI::App* synth = app.add_subcommand("synthesize", "integrate a profile and export it");
  ProfileParams synth_params{6.0, std::numeric_limits<double>::infinity(), 1.0};
  std::string synth_m = "infinite";
  ProfileState synth_init{0.0, 1.0, 0.5};
  std::pair<double, double> synth_interval{0.0, 1.0};
  double synth_ode_tol = 1e-10;
  std::string out_csv = "profile.csv";
  std::string out_spec;
  int synth_samples = 40;
  std::uint64_t synth_seed = 7;
  synth->add_option("--kappa", synth_params.kappa, "fiber sectional curvature");
  synth->add_option("--lambda", synth_params.lambda, "soliton constant");
  synth->add_option("--m", synth_m, "quasi constant (nonzero number or 'infinite')");
  synth->add_option("--f0", synth_init.f, "initial f");
  synth->add_option("--f1", synth_init.f1, "initial f' (must be positive)");
  synth->add_option("--f2", synth_init.f2, "initial f''");
  synth->add_option("--r0", synth_interval.first, "interval start");
  synth->add_option("--r1", synth_interval.second, "interval end");
  synth->add_option("--ode-tol", synth_ode_tol, "per-step local error tolerance");
  synth->add_option("--out-csv", out_csv, "profile CSV output path");
  synth->add_option("--out-spec", out_spec, "also write an assembled spec document here");
  synth->add_option("--samples", synth_samples, "sampling count stored in the assembled spec");
  synth->add_option("--seed", synth_seed, "sampling seed stored in the assembled spec");

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (synth->parsed()) {
      if (synth_m == "infinite" || synth_m == "inf") {
        synth_params.m = std::numeric_limits<double>::infinity();
      } else {
        synth_params.m = std::strtod(synth_m.c_str(), nullptr);
      }
      try {
        SolitonData::validate_m(synth_params.m);
      } catch (const Error& e) {
        throw SpecError(e.what());
      }
      if (!(synth_init.f1 > 0)) throw SpecError("--f1 must be positive (no critical points)");
      StepControl ctl;
      ctl.tol = synth_ode_tol;
      const SolitonProfile profile =
          integrate_profile(synth_init, synth_params, synth_interval, ctl);
      {
        std::ofstream os(out_csv);
        if (!os) throw SpecError("cannot write profile CSV to '" + out_csv + "'");
        write_profile_csv(os, profile);
      }
      out << "profile: " << profile.r.size() << " nodes on [" << profile.r_begin() << ", "
          << profile.r_end() << "], " << to_string(profile.stop)
          << (profile.note.empty() ? "" : std::string(" (") + profile.note + ")") << "\n";
      out << "wrote " << out_csv << "\n";
      if (!out_spec.empty()) {
        std::ofstream os(out_spec);
        if (!os) throw SpecError("cannot write spec to '" + out_spec + "'");
        os << assembled_spec_json(std::filesystem::path(out_csv).filename().string(),
                                  synth_params, synth_samples, synth_seed)
                  .dump(2)
           << "\n";
        out << "wrote " << out_spec << "\n";
      }
      return profile.stop == ProfileStop::Completed ? 0 : 1;
    }

    if (tol_value != 0) args.tol_override = tol_value;
    if (samples_value != 0) args.samples = samples_value;
    for (CLI::App* cmd : {curvature, duality, soliton, warped, suite})
      if (cmd->parsed() && cmd->count("--seed") > 0) args.seed = seed_value;

    Report report;
    if (suite->parsed()) {
      CheckSettings s;
      if (args.tol_override) s.tol.override_all = *args.tol_override;
      if (args.samples) s.samples = *args.samples;
      if (args.seed) s.seed = *args.seed;
      if (args.backend == "both") s.both_backends = true;
      else if (args.backend == "fd") s.backend = Backend::Fd;
      report = run_suite(s);
    } else {
      const LoadedSpec spec = detail::resolve_target(args.target);
      const CheckSettings s = detail::settings_for(spec, args);
      report = detail::make_report(spec, s);

      if (curvature->parsed()) {
        if (spec.chart3) {
          const SampleSet<3> pts = sample_points(*spec.chart3, s.samples, s.seed);
          report.skipped_points += pts.rejected;
          curvature_checks(report.checks, *spec.chart3, pts.points, s);
        } else {
          const SampleSet<4> pts = sample_points(*spec.chart4, s.samples, s.seed);
          report.skipped_points += pts.rejected;
          curvature_checks(report.checks, *spec.chart4, pts.points, s);
        }
      } else if (duality->parsed()) {
        if (!spec.chart4) throw SpecError("check-duality needs a 4-dimensional chart");
        duality_static_checks(report.checks);
        const SampleSet<4> pts = sample_points(*spec.chart4, s.samples, s.seed);
        report.skipped_points += pts.rejected;
        duality_checks(report.checks, *spec.chart4, pts.points, s);
      } else if (soliton->parsed()) {
        if (!spec.chart4 || !spec.soliton)
          throw SpecError("check-soliton needs a 4-dimensional chart with a potential");
        const SampleSet<4> pts = sample_points(*spec.chart4, s.samples, s.seed);
        report.skipped_points += pts.rejected;
        soliton_checks(report.checks, *spec.chart4, *spec.soliton, spec.expect_soliton,
                       pts.points, s);
      } else if (warped->parsed()) {
        if (!spec.warped) throw SpecError("check-warped needs a 'warped' chart");
        const SampleSet<4> pts = sample_points(spec.warped->chart, s.samples, s.seed);
        report.skipped_points += pts.rejected;
        warped_checks(report.checks, *spec.warped,
                      spec.soliton && spec.expect_soliton ? &*spec.soliton : nullptr, pts.points,
                      s);
      }
    }

    detail::print_report(report, out);
    if (!args.report_path.empty()) detail::write_report_file(report, args.report_path);
    return report.pass() ? 0 : 1;
  } catch (const SpecError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace sforge
