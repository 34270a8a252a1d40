#include "sks/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sks/noise.hpp"

namespace sks {

namespace {

/// sup over recorded times of the p-norm, from the recorded series.
double norm_sup(const TrajectoryRecord& rec, double p) {
  const std::vector<double>& ps = rec.options.p_norms;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (std::fabs(ps[i] - p) <= 1e-12 * std::max(1.0, std::fabs(p))) {
      const std::vector<double>& series = rec.lp_series[i];
      if (series.empty()) break;
      return *std::max_element(series.begin(), series.end());
    }
  }
  throw std::invalid_argument("estimator: requested norm was not recorded by the run");
}

void require_paths(const std::vector<TrajectoryRecord>& ensemble) {
  if (ensemble.empty()) throw std::invalid_argument("estimator: empty ensemble");
}

}  // namespace

BootstrapCI bootstrap_mean_ci(const std::vector<double>& xs, std::uint64_t master_seed,
                              std::size_t resamples) {
  if (xs.empty()) throw std::invalid_argument("bootstrap_mean_ci: no samples");
  const std::size_t n = xs.size();

  BootstrapCI ci;
  for (double x : xs) ci.mean += x;
  ci.mean /= double(n);

  std::vector<double> means(resamples);
  for (std::size_t b = 0; b < resamples; ++b) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = philox_uniform(master_seed, std::uint32_t(b), std::uint32_t(i), 0,
                                      RngStream::kBootstrap);
      const std::size_t idx = std::min(n - 1, std::size_t(u * double(n)));
      s += xs[idx];
    }
    means[b] = s / double(n);
  }
  std::sort(means.begin(), means.end());
  const auto pick = [&](double level) {
    const auto idx = std::size_t(std::llround(level * double(resamples - 1)));
    return means[idx];
  };
  ci.lo = pick(0.025);
  ci.hi = pick(0.975);
  return ci;
}

MomentReport moment_estimator(const std::vector<TrajectoryRecord>& ensemble, double p0,
                              std::uint64_t master_seed) {
  require_paths(ensemble);
  if (ensemble.size() < 2)
    throw std::invalid_argument("moment_estimator: need at least 2 paths");

  const ModelParams& params = ensemble.front().params;
  const double mu =
      params.source.kind == SourceSpec::Kind::Logistic ? params.source.mu : 0.0;
  const P0Window win = p0_window(params.chi, mu);

  MomentReport rep;
  rep.p0 = p0;
  rep.in_window = !win.empty && p0 > win.lo && p0 < win.hi;
  if (!rep.in_window)
    throw std::invalid_argument("moment_estimator: p0 outside the moment window");
  rep.paths = ensemble.size();

  std::vector<double> vals;
  vals.reserve(ensemble.size());
  for (const TrajectoryRecord& rec : ensemble)
    vals.push_back(std::pow(norm_sup(rec, p0), p0));

  const BootstrapCI ci = bootstrap_mean_ci(vals, master_seed);
  rep.estimate = ci.mean;
  rep.ci_lo = ci.lo;
  rep.ci_hi = ci.hi;
  return rep;
}

TailReport tail_estimator_from_values(const std::vector<double>& values,
                                      const std::vector<double>& R_grid,
                                      std::size_t min_exceedances) {
  if (values.empty()) throw std::invalid_argument("tail_estimator: empty ensemble");
  if (R_grid.size() < 2 || !std::is_sorted(R_grid.begin(), R_grid.end()) ||
      R_grid.front() <= 0.0)
    throw std::invalid_argument("tail_estimator: R grid must be positive and increasing");

  TailReport rep;
  rep.paths = values.size();
  rep.R = R_grid;
  rep.survival.resize(R_grid.size());
  rep.exceedances.resize(R_grid.size());
  for (std::size_t i = 0; i < R_grid.size(); ++i) {
    std::size_t c = 0;
    for (double v : values)
      if (v >= R_grid[i]) ++c;
    rep.exceedances[i] = c;
    rep.survival[i] = double(c) / double(values.size());
  }

  // Fit over the upper decade [R_hi/10, R_hi] of the largest grid point that
  // still has min_exceedances exceedances.
  double R_hi = 0.0;
  for (std::size_t i = 0; i < R_grid.size(); ++i)
    if (rep.exceedances[i] >= min_exceedances) R_hi = R_grid[i];
  if (R_hi > 0.0) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < R_grid.size(); ++i) {
      if (R_grid[i] < R_hi / 10.0 || R_grid[i] > R_hi || rep.survival[i] <= 0.0) continue;
      const double x = std::log(R_grid[i]);
      const double y = std::log(rep.survival[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++m;
    }
    const double det = double(m) * sxx - sx * sx;
    if (m >= 2 && std::fabs(det) > 0.0) {
      rep.slope = (double(m) * sxy - sx * sy) / det;
      rep.sufficient = true;
    }
  }
  return rep;
}

TailReport tail_estimator(const std::vector<TrajectoryRecord>& ensemble, double q,
                          const std::vector<double>& R_grid) {
  require_paths(ensemble);
  std::vector<double> vals;
  vals.reserve(ensemble.size());
  for (const TrajectoryRecord& rec : ensemble) vals.push_back(std::pow(norm_sup(rec, q), q));
  TailReport rep = tail_estimator_from_values(vals, R_grid);
  rep.q = q;
  return rep;
}

double gamma_window_max(double n_exp, double r) {
  const double worst = std::max({2.0, n_exp, r + 1.0});
  return 1.0 / (2.0 * worst);
}

GammaMomentReport gamma_moment_estimator(const std::vector<TrajectoryRecord>& ensemble,
                                         double gamma, std::uint64_t master_seed) {
  require_paths(ensemble);
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma_moment_estimator: gamma must be > 0");

  GammaMomentReport rep;
  rep.gamma = gamma;
  rep.paths = ensemble.size();
  const ModelParams& params = ensemble.front().params;
  if (params.nonlinear_noise) {
    rep.window_hi = gamma_window_max(params.source.n_exp, params.nonlinear_noise->r);
    rep.in_window = gamma < rep.window_hi;
  }

  std::vector<double> vals;
  vals.reserve(ensemble.size());
  for (const TrajectoryRecord& rec : ensemble)
    vals.push_back(std::pow(rec.running_sup.back(), gamma));

  const BootstrapCI ci = bootstrap_mean_ci(vals, master_seed);
  rep.estimate = ci.mean;
  rep.ci_lo = ci.lo;
  rep.ci_hi = ci.hi;
  return rep;
}

std::vector<double> synthetic_pareto_values(std::size_t count, double alpha, double x_m,
                                            std::uint64_t master_seed) {
  if (!(alpha > 0.0) || !(x_m > 0.0))
    throw std::invalid_argument("synthetic_pareto_values: alpha and x_m must be positive");
  std::vector<double> vals(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double u =
        philox_uniform(master_seed, std::uint32_t(i), 0, 0, RngStream::kSynthetic);
    vals[i] = x_m * std::pow(u, -1.0 / alpha);
  }
  return vals;
}

}  // namespace sks
