#pragma once

// Pathwise verification checks: the chemotaxis cancellation identity, the
// L^p energy ledger along a stored trajectory, mass balance, and the
// drift-domination sign test.  All checks are pure functions of stored
// records and reuse the trajectory's own Wiener increments; nothing here
// re-simulates randomness.

#include <cstddef>
#include <vector>

#include "sks/grid.hpp"
#include "sks/integrator.hpp"
#include "sks/model.hpp"

namespace sks {

/// Integration-by-parts identity for the chemotaxis pairing with v = Gu:
///   p int u^{p-1} grad u . grad v dx  =  int u^{p+1} dx - int u^p v dx.
/// lhs uses spectral gradients of the dealiased factors; rhs uses the Green
/// solve and plain nodal quadrature. residual = lhs - rhs.
struct CancellationReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};
CancellationReport cancellation_check(const ScalarField& u, double p);

enum class NoiseKind { None, Linear, Nonlinear };

/// Cumulative terms of the L^p energy identity along one path:
///   |u(t)|_p^p - |u0|_p^p + p(p-1) int_0^t |grad u^{p/2}|_2^2 ds
///     = p(p-1) chi int int u^{p-1} grad u . grad Gu dx ds     (chemo)
///     + p int int u^{p-1} g(u) dx ds                          (source)
///     + p sum_k int int sigma_k(u) u |u|^{p-2} dx dW_k        (martingale)
///     + (p(p-1)/2) int int sum_k sigma_k(u)^2 |u|^{p-2} dx ds (quadratic),
/// with u^{p-1}-type powers read as the signed powers u|u|^{p-2}.  For the
/// norm-coupled family the integrands reduce to b_k |u|_q^r |u|^p and
/// |u|_q^{2r} (sum b_k^2) |u|^p.  Every drift term uses left-point
/// quadrature; at p = 2 the dissipation instead integrates the step's own
/// exponential decay exactly, which makes the pure-heat ledger cancel to
/// roundoff.  theta localization factors are replayed from the recorded
/// running sup so the ledger sees exactly the drift the stepper applied.
struct ItoLedger {
  double p = 2.0;
  std::vector<double> times;
  std::vector<double> lhs_norm;     // |u(t)|_p^p
  std::vector<double> dissipation;  // cumulative p(p-1) int |grad u^{p/2}|^2
  std::vector<double> chemo_term;
  std::vector<double> source_term;
  std::vector<double> martingale_term;
  std::vector<double> quadratic_term;
  std::vector<double> residual;     // lhs - lhs(0) + dissipation - rhs sum
  double max_abs_residual = 0.0;    // excludes the stopping-crossing step
  bool crossing_excluded = false;
};
ItoLedger ito_ledger(const TrajectoryRecord& rec, double p, NoiseKind kind);

/// Per-step bookkeeping check: the recorded mass change must equal the
/// recorded drift (source quadrature + noise mass) plus any clipped mass.
/// Returns the max over steps of |dm - drift - clip| / (1 + |m|).
struct MassBalanceReport {
  double max_residual = 0.0;
  std::size_t steps = 0;
};
MassBalanceReport mass_balance_check(const TrajectoryRecord& rec);

/// Sign test for the dominated drift.  With a certified quadratic domination
/// g(s) <= c1 - mu_tilde s^2 (s >= 0) and delta = p0 mu_tilde - (p0-1) chi > 0,
/// the measured drift
///   M(t) = (p0-1) chi int u+^{p0+1} + p0 int u+^{p0-1} g(u+)
/// obeys M <= -(delta/2) I + C pointwise in time (I = int u+^{p0+1}, C the
/// explicit Young constant), hence M <= 0 whenever I > threshold = 2C/delta.
struct DriftDominationReport {
  double p0 = 0.0;
  double delta = 0.0;
  double allowance = 0.0;  // the Young constant C
  double threshold = 0.0;  // 2C/delta
  std::size_t times_checked = 0;
  std::size_t times_above = 0;      // recorded times with I > threshold
  double max_measured_above = 0.0;  // max M over those times (<= 0 when held)
  double max_split_slack = 0.0;     // max over all times of M + (delta/2)I - C
  bool holds = true;
};
DriftDominationReport drift_domination_check(const TrajectoryRecord& rec, double p0,
                                             const SourceCertificate& cert);

}  // namespace sks
