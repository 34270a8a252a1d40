#pragma once

// Monte Carlo estimators over ensembles of trajectory records: moment and
// tail statistics of path suprema, with percentile-bootstrap confidence
// intervals.  Everything is seeded explicitly and deterministic.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sks/integrator.hpp"

namespace sks {

/// Sample mean with a percentile bootstrap CI (2.5% / 97.5%), B resamples.
/// Resampling indices come from the dedicated bootstrap stream of the master
/// seed, so the CI is reproducible and independent of the Wiener draws.
struct BootstrapCI {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};
BootstrapCI bootstrap_mean_ci(const std::vector<double>& xs, std::uint64_t master_seed,
                              std::size_t resamples = 1000);

/// E sup_t |u(t)|_{p0}^{p0} estimated by the sample mean of per-path suprema.
/// The p0-norm series must have been recorded by the runs (p0 in p_norms).
struct MomentReport {
  double p0 = 0.0;
  bool in_window = false;  // p0 inside (2, chi/(chi-mu)^+)
  std::size_t paths = 0;
  double estimate = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};
MomentReport moment_estimator(const std::vector<TrajectoryRecord>& ensemble, double p0,
                              std::uint64_t master_seed);

/// Empirical survival curve R -> P(sup_t |u|_q^q >= R) and the least-squares
/// slope of log P vs log R over the upper decade of the grid that still has
/// at least `min_exceedances` exceedances.  sufficient=false when fewer than
/// two usable grid points remain.
struct TailReport {
  double q = 0.0;
  std::size_t paths = 0;
  std::vector<double> R;
  std::vector<double> survival;
  std::vector<std::size_t> exceedances;
  double slope = 0.0;
  bool sufficient = false;
};
TailReport tail_estimator(const std::vector<TrajectoryRecord>& ensemble, double q,
                          const std::vector<double>& R_grid);
/// Same computation from raw per-path supremum values (synthetic calibration).
TailReport tail_estimator_from_values(const std::vector<double>& values,
                                      const std::vector<double>& R_grid,
                                      std::size_t min_exceedances = 5);

/// Upper end of the admissible gamma window 1 / (2 max(2, n, r+1)) for the
/// gamma-moment bound under a degree-n source envelope and norm exponent r.
double gamma_window_max(double n_exp, double r);

/// E sup_t |u(t)|_inf^gamma by sample mean of (running sup)^gamma.  A gamma
/// outside the window is still computed but annotated.
struct GammaMomentReport {
  double gamma = 0.0;
  double window_hi = 0.0;  // 0 when the record has no norm-coupled noise
  bool in_window = false;
  std::size_t paths = 0;
  double estimate = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};
GammaMomentReport gamma_moment_estimator(const std::vector<TrajectoryRecord>& ensemble,
                                         double gamma, std::uint64_t master_seed);

/// Pareto(alpha, x_m) draws from the synthetic-data stream: x_m U^{-1/alpha}.
/// Used to calibrate the tail slope fit against a law with known exponent.
std::vector<double> synthetic_pareto_values(std::size_t count, double alpha, double x_m,
                                            std::uint64_t master_seed);

}  // namespace sks
