#include "sks/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "sks/operators.hpp"

namespace sks {

double cutoff_theta(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double x = r - 1.0;
  const double s = x * x * x * (10.0 + x * (-15.0 + 6.0 * x));  // quintic smoothstep
  return 1.0 - s;
}

double cutoff_theta_m(double x, double m) {
  if (!(m > 0.0)) throw std::invalid_argument("cutoff_theta_m: need m > 0");
  return cutoff_theta(x / m);
}

Stepper::Stepper(GridPtr grid, ModelParams params, double dt, std::optional<double> cutoff_m,
                 bool cutoff_noise)
    : grid_(std::move(grid)),
      params_(std::move(params)),
      dt_(dt),
      cutoff_m_(cutoff_m),
      cutoff_noise_(cutoff_noise) {
  if (!(dt_ > 0.0)) throw std::invalid_argument("Stepper: need dt > 0");
  if (params_.linear_noise && !params_.linear_noise->validated)
    throw std::invalid_argument("Stepper: linear noise spec is not validated");
  if (params_.nonlinear_noise && !params_.nonlinear_noise->validated)
    throw std::invalid_argument("Stepper: nonlinear noise spec is not validated");
  const auto& lambda = grid_->eigenvalues();
  decay_.resize(lambda.size());
  for (std::size_t n = 0; n < lambda.size(); ++n) decay_[n] = std::exp(-dt_ * lambda[n]);
}

Stepper::StepResult Stepper::step(const ScalarField& u, double running_sup,
                                  const WienerIncrement& inc) const {
  return step_mixed(u, u, running_sup, inc);
}

Stepper::StepResult Stepper::step_mixed(const ScalarField& carry, const ScalarField& src,
                                        double running_sup, const WienerIncrement& inc) const {
  BracketResult br = form_bracket(carry, src, running_sup, inc);
  for (std::size_t n = 0; n < br.what.coeffs.size(); ++n) br.what.coeffs[n] *= decay_[n];

  StepResult res;
  res.u_next = from_spectral(br.what);
  res.mass_drift = br.mass_drift;
  return res;
}

Stepper::BracketResult Stepper::form_bracket(const ScalarField& carry, const ScalarField& src,
                                             double running_sup,
                                             const WienerIncrement& inc) const {
  require_same_grid(*grid_, *carry.grid, "Stepper::step");
  require_same_grid(*grid_, *src.grid, "Stepper::step");
  const std::size_t n_modes = params_.noise_mode_count();
  if (inc.dw.size() != n_modes)
    throw std::invalid_argument("Stepper::step: increment mode count mismatch");

  const double theta =
      cutoff_m_ ? cutoff_theta_m(running_sup, *cutoff_m_) : 1.0;
  const double noise_scale = cutoff_noise_ ? theta : 1.0;

  // Nodal part of the bracket: carry + dt*theta*g(src) + noise increment.
  ScalarField bracket(carry.grid);
  double source_integral = 0.0;
  for (std::size_t n = 0; n < carry.values.size(); ++n) {
    const double g = source_eval(params_.source, src.values[n]);
    source_integral += g;
    bracket.values[n] = carry.values[n] + dt_ * theta * g;
  }
  source_integral *= carry.grid->cell_area();

  double noise_mass = 0.0;
  if (n_modes > 0) {
    std::vector<ScalarField> sigma =
        params_.linear_noise ? diffusion_fields(*params_.linear_noise, src)
                             : nonlinear_diffusion_fields(*params_.nonlinear_noise, src);
    for (std::size_t i = 0; i < n_modes; ++i) {
      const double w = noise_scale * inc.dw[i];
      double s = 0.0;
      for (std::size_t n = 0; n < carry.values.size(); ++n) {
        bracket.values[n] += w * sigma[i].values[n];
        s += sigma[i].values[n];
      }
      noise_mass += w * s * carry.grid->cell_area();
    }
  }

  SpectralCoeffs bracket_hat = to_spectral(bracket);
  if (params_.chi != 0.0) {
    SpectralCoeffs u_hat = to_spectral(src);
    SpectralCoeffs v_hat = u_hat;
    green_solve_inplace(v_hat);
    const SpectralCoeffs flux_hat =
        chemotaxis_flux_div_spectral(u_hat, v_hat, params_.chi);
    // The flux has no constant mode, so it moves no mass.
    const double w = dt_ * theta;
    for (std::size_t n = 0; n < bracket_hat.coeffs.size(); ++n)
      bracket_hat.coeffs[n] -= w * flux_hat.coeffs[n];
  }

  BracketResult res{std::move(bracket_hat), dt_ * theta * source_integral + noise_mass};
  return res;
}

ScalarField step_mild(const ScalarField& u, const ModelParams& params,
                      const WienerIncrement& inc, double dt) {
  Stepper st(u.grid, params, dt, std::nullopt, false);
  return st.step(u, 0.0, inc).u_next;
}

ScalarField step_mild_cutoff(const ScalarField& u, const ModelParams& params,
                             const WienerIncrement& inc, double dt, double running_sup,
                             double m, bool cutoff_noise) {
  Stepper st(u.grid, params, dt, m, cutoff_noise);
  return st.step(u, running_sup, inc).u_next;
}

StopCheck detect_stopping(double sup, bool finite, double ceiling, std::optional<double> stop_m,
                          double running_sup) {
  StopCheck c;
  if (!finite || sup >= ceiling) {
    c.diverged = true;
    return c;
  }
  if (stop_m && running_sup >= *stop_m) c.stopped = true;
  return c;
}

namespace {

double nodal_min(const std::vector<double>& v) {
  double m = v.empty() ? 0.0 : v[0];
  for (double x : v) m = std::min(m, x);
  return m;
}

double nodal_sup(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

TrajectoryRecord run_trajectory(const ScalarField& u0, const ModelParams& params,
                                const IntegratorOptions& opt, const SeedContext& seed) {
  if (!(opt.dt > 0.0) || !(opt.T >= opt.dt))
    throw std::invalid_argument("run_trajectory: need 0 < dt <= T");
  if (!(opt.ceiling > 0.0)) throw std::invalid_argument("run_trajectory: need ceiling > 0");
  if (opt.increment_split < 1)
    throw std::invalid_argument("run_trajectory: need increment_split >= 1");
  if (!all_finite(u0.values)) throw std::invalid_argument("run_trajectory: non-finite u0");
  if (nodal_min(u0.values) < 0.0)
    throw std::invalid_argument("run_trajectory: initial field must be nonnegative");

  TrajectoryRecord rec;
  rec.grid = u0.grid;
  rec.dt = opt.dt;
  rec.params = params;
  rec.options = opt;
  rec.seed = seed;

  const std::size_t steps = std::size_t(std::llround(opt.T / opt.dt));
  const std::size_t n_modes = params.noise_mode_count();
  const double fine_dt = opt.dt / double(opt.increment_split);

  Stepper stepper(u0.grid, params, opt.dt, opt.cutoff_m, opt.cutoff_noise);

  ScalarField u = u0;
  double running_sup = 0.0;

  auto record_state = [&](double t, const ScalarField& f, double pre_clip_min) {
    rec.times.push_back(t);
    const double sup = nodal_sup(f.values);
    rec.sup_norm.push_back(sup);
    rec.mass.push_back(integral(f));
    rec.min_value.push_back(pre_clip_min);
    if (rec.lp_series.empty()) rec.lp_series.resize(opt.p_norms.size());
    for (std::size_t i = 0; i < opt.p_norms.size(); ++i)
      rec.lp_series[i].push_back(lp_norm(f, opt.p_norms[i]));
    running_sup = std::max(running_sup, sup);
    rec.running_sup.push_back(running_sup);
    for (double m : opt.tau_thresholds)
      if (!rec.tau_hits.count(m) && running_sup >= m) rec.tau_hits[m] = t;
    const long long step_idx = std::llround(t / opt.dt);
    for (double ts : opt.snapshot_times)
      if (std::llround(ts / opt.dt) == step_idx) {
        rec.snapshots.emplace_back(t, f);
        break;
      }
    if (opt.store_fields) rec.fields.push_back(f);
  };

  record_state(0.0, u, nodal_min(u.values));

  rec.status = RunStatus::Completed;
  for (std::size_t j = 0; j < steps; ++j) {
    {
      const StopCheck chk =
          detect_stopping(rec.sup_norm.back(), true, opt.ceiling, opt.stop_m, running_sup);
      if (chk.stopped || chk.diverged) {
        rec.status = chk.diverged ? RunStatus::Diverged : RunStatus::StoppedAtTau;
        break;
      }
    }

    WienerIncrement inc;
    inc.dt = opt.dt;
    inc.dw.assign(n_modes, 0.0);
    for (int s = 0; s < opt.increment_split; ++s) {
      const WienerIncrement fine =
          sample_increment(seed, j * std::size_t(opt.increment_split) + std::size_t(s),
                           fine_dt, n_modes);
      for (std::size_t i = 0; i < n_modes; ++i) inc.dw[i] += fine.dw[i];
    }

    Stepper::StepResult res = stepper.step(u, running_sup, inc);

    const bool finite = all_finite(res.u_next.values);
    const double sup = finite ? nodal_sup(res.u_next.values) : 0.0;
    if (!finite || sup >= opt.ceiling) {
      rec.status = RunStatus::Diverged;
      break;
    }

    const double pre_clip_min = nodal_min(res.u_next.values);
    rec.negativity = std::max(rec.negativity, std::max(0.0, -pre_clip_min));
    double clipped = 0.0;
    if (opt.nonneg == NonnegPolicy::Clip && pre_clip_min < 0.0) {
      for (double& v : res.u_next.values)
        if (v < 0.0) {
          clipped -= v;
          v = 0.0;
        }
      clipped *= u0.grid->cell_area();
    }

    if (opt.store_fields) rec.increments.push_back(inc);
    rec.mass_drift.push_back(res.mass_drift);
    rec.clipped_mass.push_back(clipped);
    u = std::move(res.u_next);
    record_state(double(j + 1) * opt.dt, u, pre_clip_min);
  }

  return rec;
}

}  // namespace sks
