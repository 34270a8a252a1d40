// Command-line harness: single runs, ensembles, fixed-point iteration,
// energy-ledger checks, operator certification, and the acceptance suite.
//
// Exit codes: 0 success, 1 failed check/criterion, 2 usage or config error,
// 3 model validation (hypothesis gate) failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sks/acceptance.hpp"
#include "sks/config.hpp"
#include "sks/diagnostics.hpp"
#include "sks/ensemble.hpp"
#include "sks/estimators.hpp"
#include "sks/grid.hpp"
#include "sks/integrator.hpp"
#include "sks/io.hpp"
#include "sks/model.hpp"
#include "sks/noise.hpp"
#include "sks/operators.hpp"
#include "sks/picard.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGate = 3;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> dt;
  std::optional<std::uint64_t> paths;
  std::string config_path;
};

void add_common(CLI::App* cmd, Overrides& ov, bool with_paths) {
  cmd->add_option("config", ov.config_path, "configuration file")->required();
  cmd->add_option("--seed", ov.seed, "override the master seed");
  cmd->add_option("--out", ov.out, "override the output directory");
  cmd->add_option("--dt", ov.dt, "override the integrator step size");
  if (with_paths) cmd->add_option("--paths", ov.paths, "override the ensemble path count");
}

sks::RunConfig load_and_override(const Overrides& ov) {
  sks::RunConfig cfg;
  try {
    cfg = sks::load_config(ov.config_path);
  } catch (const sks::ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw std::invalid_argument(e.what());  // unreadable file is a usage error
  }
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.out) cfg.out_dir = *ov.out;
  if (ov.dt) cfg.integrator.dt = *ov.dt;
  if (ov.paths) cfg.paths = std::size_t(*ov.paths);
  return cfg;
}

std::string run_status_name(sks::RunStatus s) {
  switch (s) {
    case sks::RunStatus::Completed: return "completed";
    case sks::RunStatus::StoppedAtTau: return "stopped_at_tau";
    case sks::RunStatus::Diverged: return "diverged";
    default: return "failed";
  }
}

// Manifest lines shared by every subcommand: the resolved values a re-run
// needs beyond the raw config echo (overrides and thresholds included).
std::string manifest_extra(const sks::RunConfig& cfg, const std::string& command) {
  std::ostringstream os;
  os << "command: " << command << "\n";
  os << "dt: " << sks::format_g17(cfg.integrator.dt) << "\n";
  os << "T: " << sks::format_g17(cfg.integrator.T) << "\n";
  os << "ceiling: " << sks::format_g17(cfg.integrator.ceiling) << "\n";
  os << "nonneg: " << (cfg.integrator.nonneg == sks::NonnegPolicy::Clip ? "clip" : "off") << "\n";
  os << "paths: " << cfg.paths << "\n";
  return os.str();
}

// Gate shared by every dynamical subcommand: the model hypotheses must be
// certified before any stepping starts.
int gate_model(sks::ModelParams& params, const sks::RunConfig& cfg, sks::GateOutcome& gate) {
  gate = sks::validate_config_model(params, cfg);
  if (!gate.ok) {
    std::cerr << "model validation failed: " << gate.message << "\n";
    return kExitGate;
  }
  return kExitOk;
}

int cmd_simulate(const Overrides& ov) {
  const sks::RunConfig cfg = load_and_override(ov);
  const sks::GridPtr grid = sks::config_grid(cfg);
  sks::ModelParams params = sks::build_model_params(cfg);
  sks::GateOutcome gate;
  if (int rc = gate_model(params, cfg, gate)) return rc;

  const sks::ScalarField u0 = sks::build_initial_field(cfg, grid);
  const sks::TrajectoryRecord rec =
      sks::run_trajectory(u0, params, cfg.integrator, sks::SeedContext{cfg.seed, 0});

  const std::string& dir = cfg.out_dir;
  sks::write_series_csv(dir + "/series.csv", rec);
  for (std::size_t k = 0; k < rec.snapshots.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%03zu.ksf1", k);
    sks::write_snapshot(dir + "/" + name, rec.snapshots[k].second, rec.snapshots[k].first);
  }
  if (cfg.integrator.store_fields && !rec.fields.empty())
    sks::write_snapshot(dir + "/final.ksf1", rec.fields.back(), rec.times.back(),
                        rec.status == sks::RunStatus::Diverged ? sks::kSnapshotFlagDiverged : 0);
  sks::write_manifest(dir + "/manifest.txt", cfg.echo, cfg.seed, *grid,
                      manifest_extra(cfg, "simulate"));

  std::cout << "simulate: status " << run_status_name(rec.status) << ", t_end "
            << sks::format_g17(rec.times.empty() ? 0.0 : rec.times.back()) << ", sup "
            << sks::format_g17(rec.running_sup.empty() ? 0.0 : rec.running_sup.back()) << ", mass "
            << sks::format_g17(rec.mass.empty() ? 0.0 : rec.mass.back()) << "\n";
  std::cout << "wrote " << dir << "/series.csv (+" << rec.snapshots.size() << " snapshots)\n";
  return kExitOk;
}

int cmd_ensemble(const Overrides& ov) {
  const sks::RunConfig cfg = load_and_override(ov);
  const sks::GridPtr grid = sks::config_grid(cfg);
  sks::ModelParams params = sks::build_model_params(cfg);
  sks::GateOutcome gate;
  if (int rc = gate_model(params, cfg, gate)) return rc;

  const sks::ScalarField u0 = sks::build_initial_field(cfg, grid);
  const sks::EnsembleRunResult res =
      sks::run_ensemble(u0, params, cfg.integrator, cfg.paths, cfg.seed, cfg.workers);

  const std::string& dir = cfg.out_dir;
  sks::write_file(dir + "/stats.csv",
                  sks::ensemble_stats_csv(res.stats, cfg.integrator.p_norms,
                                          cfg.integrator.checkpoint_times));

  // Optional estimators, written as one JSON document so downstream scripts
  // get named fields instead of positional columns.
  nlohmann::json est;
  if (cfg.moment_p0) {
    const sks::MomentReport m = sks::moment_estimator(res.records, *cfg.moment_p0, cfg.seed);
    est["moment"] = {{"p0", m.p0},         {"in_window", m.in_window}, {"paths", m.paths},
                     {"estimate", m.estimate}, {"ci_lo", m.ci_lo},     {"ci_hi", m.ci_hi}};
  }
  if (cfg.tail_q) {
    if (cfg.tail_grid.empty())
      throw std::runtime_error("[ensemble] tail_q set but tail_grid is empty");
    const sks::TailReport t = sks::tail_estimator(res.records, *cfg.tail_q, cfg.tail_grid);
    est["tail"] = {{"q", t.q},
                   {"paths", t.paths},
                   {"R", t.R},
                   {"survival", t.survival},
                   {"exceedances", t.exceedances},
                   {"slope", t.slope},
                   {"sufficient", t.sufficient}};
  }
  if (cfg.gamma_exp) {
    const sks::GammaMomentReport gm =
        sks::gamma_moment_estimator(res.records, *cfg.gamma_exp, cfg.seed);
    est["gamma_moment"] = {{"gamma", gm.gamma},   {"window_hi", gm.window_hi},
                           {"in_window", gm.in_window}, {"paths", gm.paths},
                           {"estimate", gm.estimate},   {"ci_lo", gm.ci_lo},
                           {"ci_hi", gm.ci_hi}};
  }
  if (!est.empty()) sks::write_file(dir + "/estimators.json", est.dump(2) + "\n");

  sks::write_manifest(dir + "/manifest.txt", cfg.echo, cfg.seed, *grid,
                      manifest_extra(cfg, "ensemble"));

  std::cout << "ensemble: " << res.stats.paths << " paths — " << res.stats.completed
            << " completed, " << res.stats.stopped << " stopped, " << res.stats.diverged
            << " diverged, " << res.stats.failed << " failed\n";
  std::cout << "wrote " << dir << "/stats.csv\n";
  return kExitOk;
}

int cmd_picard(const Overrides& ov) {
  const sks::RunConfig cfg = load_and_override(ov);
  const sks::GridPtr grid = sks::config_grid(cfg);
  sks::ModelParams params = sks::build_model_params(cfg);
  sks::GateOutcome gate;
  if (int rc = gate_model(params, cfg, gate)) return rc;

  const sks::ScalarField u0 = sks::build_initial_field(cfg, grid);
  const std::string& dir = cfg.out_dir;

  const std::vector<double> horizons =
      cfg.picard_horizons.empty() ? std::vector<double>{cfg.picard.horizon} : cfg.picard_horizons;
  std::vector<double> ms;
  if (!cfg.picard_ms.empty())
    ms = cfg.picard_ms;
  else if (cfg.picard.cutoff_m)
    ms = {*cfg.picard.cutoff_m};
  else
    ms = {0.0};  // 0 encodes "no cutoff" in the sweep listing

  const bool sweep = horizons.size() * ms.size() > 1;
  std::ostringstream sweep_csv;
  sweep_csv << "iter,diff_sup,ratio,T,m\n";
  bool all_converged = true;
  sks::PicardReport last;
  for (double T : horizons)
    for (double m : ms) {
      sks::PicardOptions po = cfg.picard;
      po.horizon = T;
      if (m > 0.0)
        po.cutoff_m = m;
      else
        po.cutoff_m.reset();
      const sks::PicardReport rep = sks::picard_solve(u0, params, po, sks::SeedContext{cfg.seed, 0});
      all_converged = all_converged && rep.converged;
      for (std::size_t k = 0; k < rep.diff_sup.size(); ++k) {
        sweep_csv << (k + 1) << ',' << sks::format_g17(rep.diff_sup[k]) << ',';
        if (k >= 1 && k - 1 < rep.ratios.size()) sweep_csv << sks::format_g17(rep.ratios[k - 1]);
        sweep_csv << ',' << sks::format_g17(T) << ',' << sks::format_g17(m) << "\n";
      }
      double worst = 0.0;
      for (double q : rep.ratios) worst = std::max(worst, q);
      std::cout << "picard T=" << sks::format_g17(T) << " m=" << sks::format_g17(m) << ": "
                << (rep.converged ? "converged" : "NOT converged") << " in " << rep.iterations
                << " iterations, max ratio " << sks::format_g17(worst) << "\n";
      last = rep;
    }

  if (sweep)
    sks::write_file(dir + "/picard_sweep.csv", sweep_csv.str());
  else
    sks::write_picard_csv(dir + "/picard.csv", last);
  sks::write_manifest(dir + "/manifest.txt", cfg.echo, cfg.seed, *grid,
                      manifest_extra(cfg, "picard"));
  std::cout << "wrote " << dir << (sweep ? "/picard_sweep.csv\n" : "/picard.csv\n");
  return all_converged ? kExitOk : kExitCheckFailed;
}

int cmd_ito_check(const Overrides& ov) {
  sks::RunConfig cfg = load_and_override(ov);
  const sks::GridPtr grid = sks::config_grid(cfg);
  sks::ModelParams params = sks::build_model_params(cfg);
  sks::GateOutcome gate;
  if (int rc = gate_model(params, cfg, gate)) return rc;

  cfg.integrator.store_fields = true;  // the ledger needs states + increments
  const sks::ScalarField u0 = sks::build_initial_field(cfg, grid);
  const sks::TrajectoryRecord rec =
      sks::run_trajectory(u0, params, cfg.integrator, sks::SeedContext{cfg.seed, 0});

  const sks::NoiseKind kind = params.nonlinear_noise ? sks::NoiseKind::Nonlinear
                              : params.linear_noise  ? sks::NoiseKind::Linear
                                                     : sks::NoiseKind::None;
  const std::string& dir = cfg.out_dir;
  nlohmann::json summary;
  summary["status"] = run_status_name(rec.status);
  summary["checks"] = nlohmann::json::array();
  bool all_pass = true;
  const auto push = [&](const std::string& name, bool pass, double measured, double threshold,
                        const std::string& note) {
    summary["checks"].push_back({{"name", name},
                                 {"pass", pass},
                                 {"measured", measured},
                                 {"threshold", threshold},
                                 {"note", note}});
    all_pass = all_pass && pass;
    std::cout << name << ": " << (pass ? "pass" : "FAIL") << " (measured "
              << sks::format_g17(measured) << ", threshold " << sks::format_g17(threshold)
              << ")\n";
  };

  // Energy ledger for every recorded norm order >= 2.
  for (double p : cfg.integrator.p_norms) {
    if (p < 2.0 || !std::isfinite(p)) continue;
    const sks::ItoLedger led = sks::ito_ledger(rec, p, kind);
    std::ostringstream name;
    name << "ledger_p" << p;
    sks::write_ledger_csv(dir + "/" + name.str() + ".csv", led);
    // Reporting bound for a single step size: the unexplained part of the
    // balance must be small against the energy scale that actually moved.
    double scale = 0.0;
    for (double v : led.lhs_norm) scale = std::max(scale, std::abs(v - led.lhs_norm.front()));
    const double tol = 0.05 * (1.0 + scale);
    push(name.str(), led.max_abs_residual <= tol, led.max_abs_residual, tol,
         "max |residual| of the cumulative balance; scales like sqrt(dt)");
  }

  // Mass balance along the same path.
  const sks::MassBalanceReport mb = sks::mass_balance_check(rec);
  push("mass_balance", mb.max_residual <= 1e-8, mb.max_residual, 1e-8,
       "per-step drift accounting, relative");

  // Cancellation identity on the initial state.
  const sks::CancellationReport cc = sks::cancellation_check(u0, 2.0);
  const double cc_rel = std::abs(cc.residual) / (1.0 + std::abs(cc.lhs));
  push("cancellation_p2", cc_rel <= 1e-8, cc_rel, 1e-8,
       "chemotaxis integral identity on the initial state, relative");

  // Dominated-drift sign test when a certified quadratic domination exists.
  if (gate.source_cert && gate.source_cert->ok) {
    const sks::P0Window w = sks::p0_window(params.chi, params.source.mu);
    if (!w.empty) {
      const double p0 = std::isfinite(w.hi) ? 0.5 * (w.lo + w.hi) : 3.0;
      const sks::DriftDominationReport dd =
          sks::drift_domination_check(rec, p0, *gate.source_cert);
      push("drift_domination_p" + sks::format_g17(p0), dd.holds, dd.max_measured_above, 0.0,
           "measured drift above the Young threshold must be <= 0; checked " +
               std::to_string(dd.times_above) + "/" + std::to_string(dd.times_checked) +
               " recorded times");
    }
  }

  sks::write_file(dir + "/ito_summary.json", summary.dump(2) + "\n");
  sks::write_manifest(dir + "/manifest.txt", cfg.echo, cfg.seed, *grid,
                      manifest_extra(cfg, "ito-check"));
  std::cout << "wrote " << dir << "/ito_summary.json\n";
  return all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_certify_operators(const Overrides& ov) {
  const sks::RunConfig cfg = load_and_override(ov);
  const sks::GridPtr grid = sks::config_grid(cfg);
  const std::vector<sks::CertRow> rows = sks::certify_semigroup_estimates(grid, cfg.certify);
  const std::string& dir = cfg.out_dir;
  sks::write_cert_csv(dir + "/cert.csv", rows);
  sks::write_manifest(dir + "/manifest.txt", cfg.echo, cfg.seed, *grid,
                      manifest_extra(cfg, "certify-operators"));
  bool finite = true;
  double worst = 0.0;
  for (const sks::CertRow& r : rows) {
    finite = finite && std::isfinite(r.max_ratio);
    worst = std::max(worst, r.max_ratio);
  }
  std::cout << "certify-operators: " << rows.size() << " rows, worst ratio "
            << sks::format_g17(worst) << (finite ? "" : " (NON-FINITE RATIO)") << "\n";
  std::cout << "wrote " << dir << "/cert.csv\n";
  return finite ? kExitOk : kExitCheckFailed;
}

int cmd_verify(const std::optional<std::string>& out_dir, const std::vector<int>& only) {
  std::vector<sks::CriterionResult> results;
  if (only.empty()) {
    for (int id = 1; id <= sks::criteria_count(); ++id) {
      const sks::CriterionResult r = sks::run_criterion(id);
      std::cout << sks::format_criterion_line(r) << "  [" << sks::format_g17(r.seconds) << "s]\n";
      std::cout.flush();
      results.push_back(r);
    }
  } else {
    for (int id : only) {
      const sks::CriterionResult r = sks::run_criterion(id);  // throws on bad id
      std::cout << sks::format_criterion_line(r) << "  [" << sks::format_g17(r.seconds) << "s]\n";
      std::cout.flush();
      results.push_back(r);
    }
  }
  int passed = 0;
  for (const auto& r : results) passed += r.pass ? 1 : 0;
  std::cout << passed << "/" << results.size() << " criteria passed\n";
  const std::string dir = out_dir.value_or("out");
  sks::write_file(dir + "/acceptance.json", sks::criteria_summary_json(results));
  std::cout << "wrote " << dir << "/acceptance.json\n";
  return passed == int(results.size()) ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral simulator and property checks for a stochastic chemotaxis system"};
  app.require_subcommand(1);

  Overrides sim_ov, ens_ov, pic_ov, ito_ov, cert_ov;
  add_common(app.add_subcommand("simulate", "run one path; write series, snapshots, manifest"),
             sim_ov, false);
  add_common(app.add_subcommand("ensemble", "run many paths in parallel; write statistics"),
             ens_ov, true);
  add_common(app.add_subcommand("picard", "fixed-point iteration on a frozen noise path"),
             pic_ov, false);
  add_common(app.add_subcommand("ito-check", "run one path and audit the balance identities"),
             ito_ov, false);
  add_common(
      app.add_subcommand("certify-operators", "measure the semigroup estimate envelopes"),
      cert_ov, false);

  auto* verify = app.add_subcommand("verify", "run the acceptance suite (exit 0 iff all pass)");
  std::optional<std::string> verify_out;
  std::vector<int> verify_only;
  verify->add_option("--out", verify_out, "directory for the machine-readable summary");
  verify->add_option("--criterion", verify_only, "run only these criterion numbers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand("simulate")) return cmd_simulate(sim_ov);
    if (app.got_subcommand("ensemble")) return cmd_ensemble(ens_ov);
    if (app.got_subcommand("picard")) return cmd_picard(pic_ov);
    if (app.got_subcommand("ito-check")) return cmd_ito_check(ito_ov);
    if (app.got_subcommand("certify-operators")) return cmd_certify_operators(cert_ov);
    if (app.got_subcommand("verify")) return cmd_verify(verify_out, verify_only);
  } catch (const sks::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitUsage;
}
