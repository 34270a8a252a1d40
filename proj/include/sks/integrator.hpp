#pragma once

#include <map>
#include <optional>

#include "sks/grid.hpp"
#include "sks/model.hpp"
#include "sks/noise.hpp"
#include "sks/spectral.hpp"

namespace sks {

/// C^2 drift-localization profile: theta(r) = 1 on [0,1], quintic-smoothstep
/// descent on [1,2], 0 on [2,inf). theta_m(x) = theta(x/m).
double cutoff_theta(double r);
double cutoff_theta_m(double x, double m);

enum class NonnegPolicy { Off, Clip };

enum class RunStatus { Completed, StoppedAtTau, Diverged, Failed };

struct IntegratorOptions {
  double dt = 1e-3;
  double T = 1.0;
  NonnegPolicy nonneg = NonnegPolicy::Clip;
  double ceiling = 1e8;                   // sup-norm divergence ceiling
  std::vector<double> p_norms = {2.0, 3.0};
  std::vector<double> tau_thresholds;     // record first hit of running sup
  std::optional<double> stop_m;           // stop the walk at this level
  std::optional<double> cutoff_m;         // theta_m drift localization level
  bool cutoff_noise = false;              // localized system also scales noise
  bool store_fields = false;              // keep every state + increment
  std::vector<double> snapshot_times;
  std::vector<double> checkpoint_times;   // prefix-sup norms reported at these
  int increment_split = 1;  // this dt = split * base dt; dW = sum of base draws
};

/// Everything one simulated path reports. Series are indexed by grid time
/// (times[0] = 0); per-step arrays (mass_drift, clipped_mass, increments)
/// have one entry per completed step.
struct TrajectoryRecord {
  GridPtr grid;
  double dt = 0.0;
  RunStatus status = RunStatus::Completed;
  std::vector<double> times;
  std::vector<double> sup_norm;
  std::vector<double> mass;
  std::vector<double> min_value;   // nodal min before any clipping
  std::vector<std::vector<double>> lp_series;  // one series per p_norms entry
  std::vector<double> running_sup;
  std::vector<double> mass_drift;    // dt*int(applied source) + sum_i int(sigma_i) dW_i
  std::vector<double> clipped_mass;  // mass added by the nonneg clip, per step
  double negativity = 0.0;           // worst negative excursion observed
  std::map<double, double> tau_hits;  // threshold -> first grid time at/above it
  std::vector<std::pair<double, ScalarField>> snapshots;
  std::vector<ScalarField> fields;          // states at all times (store_fields)
  std::vector<WienerIncrement> increments;  // per step (store_fields)
  ModelParams params;
  IntegratorOptions options;
  SeedContext seed;
};

/// One exponential mild step with cached spectral tables:
///   u+ = e^{-dt A}[ u + dt theta (g(u) - div(chi u grad Gu)) + noise ],
/// noise = sum_i sigma_i(u) dW_i, scaled by theta only when cutoff_noise.
class Stepper {
 public:
  Stepper(GridPtr grid, ModelParams params, double dt, std::optional<double> cutoff_m,
          bool cutoff_noise);

  struct StepResult {
    ScalarField u_next;
    double mass_drift = 0.0;  // mass change implied by source + noise terms
  };
  /// running_sup must include the current state's sup norm.
  StepResult step(const ScalarField& u, double running_sup, const WienerIncrement& inc) const;

  /// Same update with the linear carry term and the nonlinear source state
  /// decoupled: u+ = e^{-dt A}[ carry + dt theta (g(src) - flux(src)) + noise(src) ].
  /// step(u, ...) is exactly step_mixed(u, u, ...); successive-substitution
  /// schemes evaluate the sources on a frozen candidate path while carrying
  /// the new one, and at a fixed point both calls are bit-identical.
  StepResult step_mixed(const ScalarField& carry, const ScalarField& src, double running_sup,
                        const WienerIncrement& inc) const;

  struct BracketResult {
    SpectralCoeffs what;      // spectral bracket w with u+ = e^{-dt A} w
    double mass_drift = 0.0;  // mass change implied by source + noise terms
  };
  /// The pre-decay bracket w = carry + dt theta g(src) + noise(src) - dt theta flux(src)
  /// in spectral form.  step_mixed is exactly e^{-dt A} applied to this, so energy
  /// bookkeeping along a path can recover each step's bracket bit for bit.
  BracketResult form_bracket(const ScalarField& carry, const ScalarField& src,
                             double running_sup, const WienerIncrement& inc) const;

  double dt() const { return dt_; }
  const ModelParams& params() const { return params_; }

 private:
  GridPtr grid_;
  ModelParams params_;
  double dt_;
  std::optional<double> cutoff_m_;
  bool cutoff_noise_;
  std::vector<double> decay_;  // e^{-lambda dt}
};

/// Single un-localized mild step (theta = 1).
ScalarField step_mild(const ScalarField& u, const ModelParams& params,
                      const WienerIncrement& inc, double dt);

/// Localized step: drift scaled by theta_m(running_sup); noise scaled too
/// only for the norm-coupled system.
ScalarField step_mild_cutoff(const ScalarField& u, const ModelParams& params,
                             const WienerIncrement& inc, double dt, double running_sup,
                             double m, bool cutoff_noise);

/// True when the state must stop the walk: non-finite values, sup norm at or
/// above the ceiling, or (when stop_m is set) running sup at or above it.
struct StopCheck {
  bool diverged = false;
  bool stopped = false;
};
StopCheck detect_stopping(double sup, bool finite, double ceiling, std::optional<double> stop_m,
                          double running_sup);

/// March the mild scheme from u0 until T, divergence, or the stop level.
TrajectoryRecord run_trajectory(const ScalarField& u0, const ModelParams& params,
                                const IntegratorOptions& opt, const SeedContext& seed);

}  // namespace sks
