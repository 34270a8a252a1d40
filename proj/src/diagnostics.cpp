#include "sks/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sks/operators.hpp"
#include "sks/spectral.hpp"

namespace sks {

namespace {

/// Signed power x|x|^{q-1}: odd extension of x^q, well defined for the small
/// negative excursions an unclipped path can carry.
double spow(double x, double q) {
  if (x == 0.0) return 0.0;
  return x < 0.0 ? -std::pow(-x, q) : std::pow(x, q);
}

double apow(double x, double q) { return q == 0.0 ? 1.0 : std::pow(std::fabs(x), q); }

}  // namespace

CancellationReport cancellation_check(const ScalarField& u, double p) {
  if (!all_finite(u.values))
    throw std::invalid_argument("cancellation_check: field not finite");
  if (!(p >= 2.0)) throw std::invalid_argument("cancellation_check: p must be >= 2");

  const ScalarField v = green_solve(u);
  const double area = u.grid->cell_area();

  // lhs: p int u^{p-1} grad u . grad v with the quadratic factors dealiased.
  SpectralCoeffs u_hat = to_spectral(u);
  dealias(u_hat);
  SpectralCoeffs v_hat = to_spectral(v);
  dealias(v_hat);
  const ScalarField u_d = from_spectral(u_hat);
  const VectorField gu = gradient(u_hat);
  const VectorField gv = gradient(v_hat);

  double lhs = 0.0;
  for (std::size_t n = 0; n < u_d.values.size(); ++n)
    lhs += spow(u_d.values[n], p - 1.0) *
           (gu.x[n] * gv.x[n] + gu.y[n] * gv.y[n]);
  lhs *= p * area;

  // rhs: int u^{p+1} - int u^p v by plain nodal quadrature.
  double rhs = 0.0;
  for (std::size_t n = 0; n < u.values.size(); ++n)
    rhs += spow(u.values[n], p) * (u.values[n] - v.values[n]);
  rhs *= area;

  return {lhs, rhs, lhs - rhs};
}

ItoLedger ito_ledger(const TrajectoryRecord& rec, double p, NoiseKind kind) {
  if (!(p >= 2.0)) throw std::invalid_argument("ito_ledger: p must be >= 2");
  if (rec.fields.empty() || rec.fields.size() != rec.times.size())
    throw std::invalid_argument("ito_ledger: record lacks stored fields");
  if (rec.increments.size() + 1 != rec.fields.size())
    throw std::invalid_argument("ito_ledger: record lacks stored increments");
  const bool has_linear = rec.params.linear_noise.has_value();
  const bool has_nonlinear = rec.params.nonlinear_noise.has_value();
  if (kind == NoiseKind::Linear && has_nonlinear)
    throw std::invalid_argument("ito_ledger: record carries norm-coupled noise");
  if (kind == NoiseKind::Nonlinear && has_linear)
    throw std::invalid_argument("ito_ledger: record carries linear-growth noise");
  if (kind == NoiseKind::None && (has_linear || has_nonlinear) &&
      rec.params.noise_mode_count() > 0)
    throw std::invalid_argument("ito_ledger: record carries noise terms");

  const GridPtr grid = rec.grid;
  const double area = grid->cell_area();
  const double dt = rec.dt;
  const std::size_t steps = rec.increments.size();
  const std::vector<double>& lambda = grid->eigenvalues();

  Stepper stepper(grid, rec.params, dt, rec.options.cutoff_m, rec.options.cutoff_noise);

  ItoLedger led;
  led.p = p;
  led.times = rec.times;
  const auto n_times = rec.times.size();
  led.lhs_norm.reserve(n_times);
  for (const ScalarField& f : rec.fields) {
    double s = 0.0;
    for (double v : f.values) s += apow(v, p);
    led.lhs_norm.push_back(s * area);
  }

  led.dissipation.assign(1, 0.0);
  led.chemo_term.assign(1, 0.0);
  led.source_term.assign(1, 0.0);
  led.martingale_term.assign(1, 0.0);
  led.quadratic_term.assign(1, 0.0);
  led.residual.assign(1, 0.0);

  // Parseval weight of mode (k,l): lx ly / (a_k a_l), a_0 = 1, a_k = 2.
  const std::size_t nx = grid->nx(), ny = grid->ny();
  auto parseval_weight = [&](std::size_t k, std::size_t l) {
    return grid->lx() * grid->ly() / ((k == 0 ? 1.0 : 2.0) * (l == 0 ? 1.0 : 2.0));
  };

  double diss = 0.0, chemo = 0.0, source = 0.0, mart = 0.0, quad = 0.0;
  for (std::size_t j = 0; j < steps; ++j) {
    const ScalarField& u = rec.fields[j];
    const double run_sup = rec.running_sup[j];
    const double theta = rec.options.cutoff_m
                             ? cutoff_theta_m(run_sup, *rec.options.cutoff_m)
                             : 1.0;
    const double noise_scale = rec.options.cutoff_noise ? theta : 1.0;

    // Dissipation p(p-1) int |grad u^{p/2}|^2. For p = 2 integrate the
    // exponential decay of the step's own bracket exactly:
    //   int_0^dt |grad e^{-sA} w|_2^2 ds = (1/2) sum w_kl^2 (1 - e^{-2 lambda dt}) P_kl.
    if (p == 2.0) {
      const Stepper::BracketResult br =
          stepper.form_bracket(u, u, run_sup, rec.increments[j]);
      double d = 0.0;
      for (std::size_t l = 0; l < ny; ++l)
        for (std::size_t k = 0; k < nx; ++k) {
          const double w = br.what.coeffs[l * nx + k];
          const double lam = lambda[l * nx + k];
          d += w * w * (1.0 - std::exp(-2.0 * lam * dt)) * parseval_weight(k, l);
        }
      diss += d;  // p(p-1)/2 = 1 at p = 2
    } else {
      ScalarField pw(grid);
      for (std::size_t n = 0; n < u.values.size(); ++n)
        pw.values[n] = spow(u.values[n], 0.5 * p);
      SpectralCoeffs pw_hat = to_spectral(pw);
      dealias(pw_hat);
      const VectorField gpw = gradient(pw_hat);
      double d = 0.0;
      for (std::size_t n = 0; n < u.values.size(); ++n)
        d += gpw.x[n] * gpw.x[n] + gpw.y[n] * gpw.y[n];
      diss += p * (p - 1.0) * dt * d * area;
    }

    // Chemotaxis drift term with dealiased factors, scaled by the replayed theta.
    if (rec.params.chi != 0.0) {
      SpectralCoeffs u_hat = to_spectral(u);
      SpectralCoeffs v_hat = u_hat;
      green_solve_inplace(v_hat);
      dealias(u_hat);
      dealias(v_hat);
      const ScalarField u_d = from_spectral(u_hat);
      const VectorField gu = gradient(u_hat);
      const VectorField gv = gradient(v_hat);
      double c = 0.0;
      for (std::size_t n = 0; n < u_d.values.size(); ++n)
        c += spow(u_d.values[n], p - 1.0) *
             (gu.x[n] * gv.x[n] + gu.y[n] * gv.y[n]);
      chemo += p * (p - 1.0) * rec.params.chi * theta * dt * c * area;
    }

    // Source drift term.
    if (rec.params.source.kind != SourceSpec::Kind::Zero) {
      double s = 0.0;
      for (double v : u.values) s += spow(v, p - 1.0) * source_eval(rec.params.source, v);
      source += p * theta * dt * s * area;
    }

    // Noise terms share the structure sigma_k(u) = c_k * base field.
    const std::size_t modes = rec.params.noise_mode_count();
    if (modes > 0) {
      double mart_base = 0.0;  // int base * u|u|^{p-2}
      double quad_base = 0.0;  // int base^2 * |u|^{p-2}
      if (has_linear) {
        for (double v : u.values) {
          const double b = noise_profile_eval(*rec.params.linear_noise, v);
          mart_base += b * spow(v, p - 1.0);
          quad_base += b * b * apow(v, p - 2.0);
        }
      } else {
        const double nq = lp_norm(u, rec.params.nonlinear_noise->q);
        const double scale = std::pow(nq, rec.params.nonlinear_noise->r);
        for (double v : u.values) {
          mart_base += scale * v * spow(v, p - 1.0);
          quad_base += scale * scale * v * v * apow(v, p - 2.0);
        }
      }
      mart_base *= area;
      quad_base *= area;

      const std::vector<double>& cs = has_linear ? rec.params.linear_noise->kappas
                                                 : rec.params.nonlinear_noise->bs;
      double cdw = 0.0, c2 = 0.0;
      for (std::size_t k = 0; k < modes; ++k) {
        cdw += cs[k] * rec.increments[j].dw[k];
        c2 += cs[k] * cs[k];
      }
      mart += p * noise_scale * cdw * mart_base;
      quad += 0.5 * p * (p - 1.0) * noise_scale * noise_scale * c2 * dt * quad_base;
    }

    led.dissipation.push_back(diss);
    led.chemo_term.push_back(chemo);
    led.source_term.push_back(source);
    led.martingale_term.push_back(mart);
    led.quadratic_term.push_back(quad);
    led.residual.push_back(led.lhs_norm[j + 1] - led.lhs_norm[0] + diss -
                           (chemo + source + mart + quad));
  }

  // The step that crosses a stopping level is grid-ambiguous; leave it out of
  // the reported maximum.
  led.crossing_excluded = rec.status == RunStatus::StoppedAtTau;
  const std::size_t bound =
      led.crossing_excluded && led.residual.size() > 1 ? led.residual.size() - 1
                                                       : led.residual.size();
  for (std::size_t j = 0; j < bound; ++j)
    led.max_abs_residual = std::max(led.max_abs_residual, std::fabs(led.residual[j]));
  return led;
}

MassBalanceReport mass_balance_check(const TrajectoryRecord& rec) {
  if (rec.mass.size() < 1 || rec.mass_drift.size() + 1 != rec.mass.size() ||
      rec.clipped_mass.size() != rec.mass_drift.size())
    throw std::invalid_argument("mass_balance_check: record lacks per-step drift data");

  MassBalanceReport rep;
  rep.steps = rec.mass_drift.size();
  for (std::size_t j = 0; j < rep.steps; ++j) {
    const double res = std::fabs((rec.mass[j + 1] - rec.clipped_mass[j]) - rec.mass[j] -
                                 rec.mass_drift[j]) /
                       (1.0 + std::fabs(rec.mass[j]));
    rep.max_residual = std::max(rep.max_residual, res);
  }
  return rep;
}

DriftDominationReport drift_domination_check(const TrajectoryRecord& rec, double p0,
                                             const SourceCertificate& cert) {
  if (!cert.ok)
    throw std::invalid_argument("drift_domination_check: source certificate not valid");
  if (rec.fields.empty())
    throw std::invalid_argument("drift_domination_check: record lacks stored fields");

  const double chi = rec.params.chi;
  const double area = rec.grid->cell_area();
  const YoungSplit split = young_allowance(p0, chi, cert.c1, cert.mu_tilde,
                                           rec.grid->area());

  DriftDominationReport rep;
  rep.p0 = p0;
  rep.delta = split.delta;
  rep.allowance = split.C;
  rep.threshold = split.threshold;
  rep.max_measured_above = -std::numeric_limits<double>::infinity();
  rep.max_split_slack = -std::numeric_limits<double>::infinity();

  for (const ScalarField& f : rec.fields) {
    double I = 0.0;  // int u+^{p0+1}
    double S = 0.0;  // int u+^{p0-1} g(u+)
    for (double v : f.values) {
      const double up = std::max(v, 0.0);
      I += std::pow(up, p0 + 1.0);
      S += std::pow(up, p0 - 1.0) * source_eval(rec.params.source, up);
    }
    I *= area;
    S *= area;

    const double M = (p0 - 1.0) * chi * I + p0 * S;
    rep.times_checked += 1;
    rep.max_split_slack =
        std::max(rep.max_split_slack, M + 0.5 * rep.delta * I - rep.allowance);
    if (I > rep.threshold) {
      rep.times_above += 1;
      rep.max_measured_above = std::max(rep.max_measured_above, M);
      if (M > 0.0) rep.holds = false;
    }
  }
  return rep;
}

}  // namespace sks
