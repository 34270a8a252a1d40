#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "sks/ensemble.hpp"
#include "sks/grid.hpp"
#include "sks/integrator.hpp"
#include "sks/model.hpp"

using namespace sks;

namespace {
constexpr double kPi = 3.14159265358979323846;

ScalarField cosine_ic(const GridPtr& g, double base, double amp) {
  ScalarField f(g);
  for (std::size_t j = 0; j < g->ny(); ++j)
    for (std::size_t i = 0; i < g->nx(); ++i)
      f.at(i, j) = base + amp * std::cos(g->x(i)) * std::cos(g->y(j));
  return f;
}

ModelParams desk_params() {
  ModelParams p;
  p.chi = 1.0;
  p.source = logistic_source(1.0);
  LinearNoiseSpec lin;
  lin.kappas = {0.09, 0.04, 0.02};
  if (!validate_linear_noise(lin).ok) throw std::runtime_error("noise validation failed");
  p.linear_noise = lin;
  return p;
}

IntegratorOptions short_opts() {
  IntegratorOptions opt;
  opt.dt = 1e-3;
  opt.T = 0.02;
  opt.nonneg = NonnegPolicy::Off;
  opt.p_norms = {2.0, 3.0};
  opt.checkpoint_times = {0.01, 0.02};
  return opt;
}
}  // namespace

TEST_CASE("a single-path ensemble equals the bare trajectory bitwise") {
  const GridPtr g = build_grid(16, 16, kPi, kPi);
  const ScalarField u0 = cosine_ic(g, 1.0, 0.3);
  const ModelParams params = desk_params();
  const IntegratorOptions opt = short_opts();

  const EnsembleRunResult ens = run_ensemble(u0, params, opt, 1, 501, 1);
  const TrajectoryRecord solo = run_trajectory(u0, params, opt, SeedContext{501, 0});
  REQUIRE(ens.records.size() == 1);
  CHECK(ens.records[0].sup_norm == solo.sup_norm);
  CHECK(ens.records[0].mass == solo.mass);
  CHECK(ens.records[0].lp_series == solo.lp_series);
  CHECK(ens.stats.paths == 1);
  CHECK(ens.stats.completed == 1);
}

TEST_CASE("worker count does not change any byte of the statistics") {
  const GridPtr g = build_grid(16, 16, kPi, kPi);
  const ScalarField u0 = cosine_ic(g, 1.0, 0.3);
  const ModelParams params = desk_params();
  const IntegratorOptions opt = short_opts();

  const EnsembleRunResult w1 = run_ensemble(u0, params, opt, 6, 502, 1);
  const EnsembleRunResult w3 = run_ensemble(u0, params, opt, 6, 502, 3);
  const std::string csv1 = ensemble_stats_csv(w1.stats, opt.p_norms, opt.checkpoint_times);
  const std::string csv3 = ensemble_stats_csv(w3.stats, opt.p_norms, opt.checkpoint_times);
  CHECK(csv1 == csv3);
  REQUIRE(w1.records.size() == w3.records.size());
  for (std::size_t k = 0; k < w1.records.size(); ++k) {
    CHECK(w1.records[k].sup_norm == w3.records[k].sup_norm);
    CHECK(w1.records[k].mass == w3.records[k].mass);
  }
}

TEST_CASE("summaries expose checkpoints and running sup in path order") {
  const GridPtr g = build_grid(16, 16, kPi, kPi);
  const ScalarField u0 = cosine_ic(g, 1.0, 0.3);
  const EnsembleRunResult ens = run_ensemble(u0, desk_params(), short_opts(), 4, 503, 2);
  REQUIRE(ens.stats.summaries.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    const PathSummary& s = ens.stats.summaries[k];
    CHECK(s.path_index == k);
    CHECK(s.status == RunStatus::Completed);
    CHECK(s.final_time == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(s.running_sup > 0.0);
    REQUIRE(s.checkpoint_sup.size() == 2);
    // Prefix sup is nondecreasing across checkpoints.
    CHECK(s.checkpoint_sup[0] <= s.checkpoint_sup[1] + 1e-15);
    REQUIRE(s.lp_sup.size() == 2);
    CHECK(s.lp_sup[0] > 0.0);
  }
}

TEST_CASE("diverged paths are counted, not fatal") {
  const GridPtr g = build_grid(16, 16, kPi, kPi);
  // Supercritical growth crosses a tiny ceiling immediately on every path.
  ModelParams p;
  p.chi = 0.0;
  p.source.kind = SourceSpec::Kind::Custom;
  p.source.fn = [](double s) { return s * s; };
  p.source.label = "quadratic";
  IntegratorOptions opt = short_opts();
  opt.T = 5.0;
  opt.ceiling = 1.5;
  ScalarField u0(g);
  for (double& v : u0.values) v = 1.0;
  const EnsembleRunResult ens = run_ensemble(u0, p, opt, 3, 504, 2);
  CHECK(ens.stats.diverged == 3);
  CHECK(ens.stats.completed == 0);
  for (const PathSummary& s : ens.stats.summaries) {
    CHECK(s.status == RunStatus::Diverged);
    CHECK(s.final_time < 5.0);
  }
}

TEST_CASE("stats CSV layout is stable") {
  const GridPtr g = build_grid(16, 16, kPi, kPi);
  const ScalarField u0 = cosine_ic(g, 1.0, 0.3);
  const IntegratorOptions opt = short_opts();
  const EnsembleRunResult ens = run_ensemble(u0, desk_params(), opt, 2, 505, 1);
  const std::string csv = ensemble_stats_csv(ens.stats, opt.p_norms, opt.checkpoint_times);
  // Header names the configured norms and checkpoints.
  const std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header == "path,status,final_time,running_sup,mass_final,negativity,"
                  "sup_lp_2,sup_lp_3,sup_at_0.01,sup_at_0.02");
  // Header, one row per path, and the aggregate count comment.
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(csv.find("# paths=2 completed=2") != std::string::npos);
}

TEST_CASE("zero paths are refused") {
  const GridPtr g = build_grid(16, 16, kPi, kPi);
  const ScalarField u0 = cosine_ic(g, 1.0, 0.3);
  CHECK_THROWS_AS(run_ensemble(u0, desk_params(), short_opts(), 0, 1, 1),
                  std::invalid_argument);
}
