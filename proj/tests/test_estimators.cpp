#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "sks/estimators.hpp"
#include "sks/grid.hpp"
#include "sks/integrator.hpp"
#include "sks/model.hpp"

using namespace sks;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Build a tiny ensemble of real records so the estimators see genuine series.
std::vector<TrajectoryRecord> small_ensemble(std::size_t paths, std::vector<double> p_norms) {
  const GridPtr g = build_grid(16, 16, kPi, kPi);
  ScalarField u0(g);
  for (std::size_t j = 0; j < g->ny(); ++j)
    for (std::size_t i = 0; i < g->nx(); ++i)
      u0.at(i, j) = 1.0 + 0.3 * std::cos(g->x(i)) * std::cos(g->y(j));
  ModelParams p;
  p.chi = 1.0;
  p.source = logistic_source(1.0);
  LinearNoiseSpec lin;
  lin.kappas = {0.09, 0.04, 0.02};
  if (!validate_linear_noise(lin).ok) throw std::runtime_error("validate failed");
  p.linear_noise = lin;
  IntegratorOptions opt;
  opt.dt = 1e-3;
  opt.T = 0.05;
  opt.nonneg = NonnegPolicy::Off;
  opt.p_norms = std::move(p_norms);
  std::vector<TrajectoryRecord> recs;
  for (std::size_t k = 0; k < paths; ++k)
    recs.push_back(run_trajectory(u0, p, opt, SeedContext{321, k}));
  return recs;
}
}  // namespace

TEST_CASE("bootstrap CI is deterministic, ordered, and tight for constants") {
  const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0, 5.0};
  const BootstrapCI a = bootstrap_mean_ci(xs, 99);
  const BootstrapCI b = bootstrap_mean_ci(xs, 99);
  CHECK(a.mean == b.mean);
  CHECK(a.lo == b.lo);
  CHECK(a.hi == b.hi);
  CHECK(a.mean == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(a.lo <= a.mean);
  CHECK(a.mean <= a.hi);
  // Seed sensitivity needs continuous-valued data: tiny integer samples have
  // so few distinct resample means that two seeds can share the quantiles.
  std::vector<double> wide;
  for (int i = 0; i < 40; ++i) wide.push_back(std::sqrt(2.0 * i + 1.0));
  const BootstrapCI c1 = bootstrap_mean_ci(wide, 100);
  const BootstrapCI c2 = bootstrap_mean_ci(wide, 101);
  const bool same = c1.lo == c2.lo && c1.hi == c2.hi;
  CHECK_FALSE(same);  // a different seed resamples differently

  const std::vector<double> flat(10, 7.0);
  const BootstrapCI d = bootstrap_mean_ci(flat, 1);
  CHECK(d.lo == doctest::Approx(7.0));
  CHECK(d.hi == doctest::Approx(7.0));

  CHECK_THROWS_AS(bootstrap_mean_ci({}, 1), std::invalid_argument);
}

TEST_CASE("moment estimator reads the recorded norm series") {
  const auto recs = small_ensemble(4, {2.0, 3.0});
  const MomentReport rep = moment_estimator(recs, 3.0, 55);
  CHECK(rep.p0 == 3.0);
  CHECK(rep.paths == 4);
  CHECK(rep.estimate > 0.0);
  CHECK(rep.ci_lo <= rep.estimate);
  CHECK(rep.estimate <= rep.ci_hi);
  // chi = 1, mu = 1 -> window (2, inf): p0 = 3 is inside.
  CHECK(rep.in_window);

  // A norm order the runs never recorded is refused.
  CHECK_THROWS_AS(moment_estimator(recs, 4.0, 55), std::invalid_argument);
  // Fewer than 2 paths is refused.
  const auto one = small_ensemble(1, {2.0, 3.0});
  CHECK_THROWS_AS(moment_estimator(one, 3.0, 55), std::invalid_argument);
}

TEST_CASE("tail estimator recovers a synthetic Pareto exponent") {
  const double alpha = 2.0;
  const std::vector<double> xs = synthetic_pareto_values(10000, alpha, 1.0, 4242);
  CHECK(xs.size() == 10000);
  for (double x : xs) CHECK(x >= 1.0);

  std::vector<double> grid;
  for (int k = 0; k < 16; ++k) grid.push_back(std::pow(10.0, 0.1 + 1.4 * k / 15.0));
  // Requiring 50 exceedances keeps the fit window out of the starved top of
  // the grid, where single-sample noise would dominate the fitted slope.
  const TailReport rep = tail_estimator_from_values(xs, grid, 50);
  REQUIRE(rep.sufficient);
  CHECK(rep.slope == doctest::Approx(-alpha).epsilon(0.05));
  const TailReport loose = tail_estimator_from_values(xs, grid);
  CHECK(loose.sufficient);
  CHECK(loose.slope < 0.0);
  CHECK(rep.R.size() == rep.survival.size());
  CHECK(rep.exceedances.size() == rep.survival.size());

  // Survival curve is nonincreasing.
  for (std::size_t i = 1; i < rep.survival.size(); ++i)
    CHECK(rep.survival[i] <= rep.survival[i - 1] + 1e-15);
}

TEST_CASE("tail estimator reports insufficient data honestly") {
  const std::vector<double> xs = {1.0, 1.1, 0.9, 1.05};
  const TailReport rep = tail_estimator_from_values(xs, {10.0, 100.0, 1000.0});
  CHECK_FALSE(rep.sufficient);
  CHECK_THROWS_AS(tail_estimator_from_values(xs, {5.0, 1.0}), std::invalid_argument);
}

TEST_CASE("tail estimator over records uses the recorded q-norm supremum") {
  const auto recs = small_ensemble(6, {2.0, 4.0});
  std::vector<double> grid;
  for (int k = 0; k < 8; ++k) grid.push_back(std::pow(10.0, -1.0 + 3.0 * k / 7.0));
  const TailReport rep = tail_estimator(recs, 4.0, grid);
  CHECK(rep.q == 4.0);
  CHECK(rep.paths == 6);
  CHECK_THROWS_AS(tail_estimator(recs, 3.0, grid), std::invalid_argument);
}

TEST_CASE("gamma window endpoint") {
  // 1 / (2 max(2, n, r+1)): n = 2, r = 1 -> 1/4.
  CHECK(gamma_window_max(2.0, 1.0) == doctest::Approx(0.25).epsilon(1e-12));
  // Higher source degree shrinks the window.
  CHECK(gamma_window_max(3.0, 1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  // Larger norm exponent r shrinks it too.
  CHECK(gamma_window_max(2.0, 2.5) == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("gamma moment estimator flags the window and is deterministic") {
  const auto recs = small_ensemble(4, {2.0});
  const GammaMomentReport a = gamma_moment_estimator(recs, 0.2, 77);
  const GammaMomentReport b = gamma_moment_estimator(recs, 0.2, 77);
  CHECK(a.estimate == b.estimate);
  CHECK(a.ci_lo == b.ci_lo);
  CHECK(a.estimate > 0.0);
  CHECK(a.paths == 4);
  // Records carry linear noise, not the norm-coupled family: no window.
  CHECK(a.window_hi == 0.0);
  CHECK_FALSE(a.in_window);
  CHECK_THROWS_AS(gamma_moment_estimator(recs, -0.5, 77), std::invalid_argument);
}

TEST_CASE("synthetic pareto values are deterministic in the seed") {
  const auto a = synthetic_pareto_values(100, 1.5, 2.0, 9);
  const auto b = synthetic_pareto_values(100, 1.5, 2.0, 9);
  CHECK(a == b);
  const auto c = synthetic_pareto_values(100, 1.5, 2.0, 10);
  CHECK(a != c);
  CHECK_THROWS_AS(synthetic_pareto_values(10, -1.0, 1.0, 9), std::invalid_argument);
}
