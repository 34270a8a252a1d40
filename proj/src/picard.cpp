#include "sks/picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sks/integrator.hpp"

namespace sks {

namespace {

std::size_t checked_step_count(const PicardOptions& opt) {
  if (!(opt.dt > 0.0) || !(opt.horizon > 0.0))
    throw std::invalid_argument("picard: dt and horizon must be positive");
  const double ratio = opt.horizon / opt.dt;
  const auto steps = static_cast<std::size_t>(std::llround(ratio));
  if (steps < 1 || std::fabs(ratio - static_cast<double>(steps)) > 1e-9 * ratio)
    throw std::invalid_argument("picard: horizon must be a whole number of steps");
  return steps;
}

/// Sup over nodes of |a - b|.
double nodal_distance(const ScalarField& a, const ScalarField& b) {
  double d = 0.0;
  for (std::size_t n = 0; n < a.values.size(); ++n)
    d = std::max(d, std::fabs(a.values[n] - b.values[n]));
  return d;
}

}  // namespace

std::vector<ScalarField> picard_apply(const ScalarField& u0,
                                      const std::vector<ScalarField>& candidate,
                                      const std::vector<WienerIncrement>& increments,
                                      const ModelParams& params, const PicardOptions& opt) {
  const std::size_t steps = increments.size();
  if (candidate.size() != steps + 1)
    throw std::invalid_argument("picard_apply: candidate path length must be steps + 1");

  Stepper stepper(u0.grid, params, opt.dt, opt.cutoff_m, opt.cutoff_noise);

  std::vector<ScalarField> next;
  next.reserve(steps + 1);
  next.push_back(u0);

  // theta sees the running sup of the candidate path, exactly as the
  // integrator sees the running sup of the path it is producing.
  double running_sup = lp_norm(u0, std::numeric_limits<double>::infinity());
  for (std::size_t j = 0; j < steps; ++j) {
    running_sup = std::max(
        running_sup, lp_norm(candidate[j], std::numeric_limits<double>::infinity()));
    next.push_back(
        stepper.step_mixed(next.back(), candidate[j], running_sup, increments[j]).u_next);
  }
  return next;
}

PicardReport picard_solve(const ScalarField& u0, const ModelParams& params,
                          const PicardOptions& opt, const SeedContext& ctx) {
  if (!all_finite(u0.values))
    throw std::invalid_argument("picard_solve: initial state not finite");
  const std::size_t steps = checked_step_count(opt);

  PicardReport rep;
  rep.times.reserve(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j)
    rep.times.push_back(static_cast<double>(j) * opt.dt);

  const std::size_t modes = params.noise_mode_count();
  rep.increments.reserve(steps);
  for (std::size_t j = 0; j < steps; ++j)
    rep.increments.push_back(sample_increment(ctx, j, opt.dt, modes));

  // First iterate: the path frozen at its initial state.
  rep.path.assign(steps + 1, u0);

  for (std::size_t k = 0; k < opt.max_iter; ++k) {
    std::vector<ScalarField> next =
        picard_apply(u0, rep.path, rep.increments, params, opt);
    double d = 0.0;
    for (std::size_t j = 0; j <= steps; ++j)
      d = std::max(d, nodal_distance(next[j], rep.path[j]));
    rep.path = std::move(next);
    rep.iterations = k + 1;
    rep.diff_sup.push_back(d);
    if (k >= 1 && rep.diff_sup[k - 1] > 0.0)
      rep.ratios.push_back(d / rep.diff_sup[k - 1]);
    if (d <= opt.tol) {
      rep.converged = true;
      break;
    }
  }
  return rep;
}

}  // namespace sks
