#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sks {

/// Reaction source g(u). The logistic prototype is g(s) = mu s (1 - s);
/// custom sources carry their own callable for validator experiments.
struct SourceSpec {
  enum class Kind { Zero, Logistic, Custom };
  Kind kind = Kind::Zero;
  double mu = 0.0;                   // logistic rate
  std::function<double(double)> fn;  // custom g
  std::string label = "zero";

  // Declared polynomial envelope |g(s)| <= c2 + mu_prime |s|^n_exp,
  // used by the nonlinear-noise admissibility check.
  double c2 = 0.0;
  double mu_prime = 1.0;
  double n_exp = 2.0;
};

SourceSpec logistic_source(double mu);
SourceSpec zero_source();
double source_eval(const SourceSpec& s, double v);

/// Linear-growth multiplicative noise sigma_i(u) = kappa_i h(u), h scalar.
struct LinearNoiseSpec {
  std::vector<double> kappas;
  enum class Profile { Linear, Saturating, Custom };
  Profile profile = Profile::Linear;
  std::function<double(double)> h;  // custom profile
  std::string profile_label = "linear";

  // Filled in by validate_linear_noise:
  double lipschitz = 0.0;  // sampled Lipschitz constant of h
  double K = 0.0;          // lipschitz * sqrt(sum kappa_i^2)
  bool validated = false;
};

double noise_profile_eval(const LinearNoiseSpec& s, double z);

/// Norm-coupled multiplicative noise sigma_i(u) = b_i ||u||_q^r u.
struct NonlinearNoiseSpec {
  std::vector<double> bs;
  double q = 4.0;
  double r = 1.0;
  bool validated = false;
};

/// Outcome of a hypothesis check: either a certificate (ok=true, constants
/// filled) or a violation (ok=false, witness and message say which
/// inequality failed and where).
struct NoiseCertificate {
  bool ok = false;
  double lipschitz = 0.0;
  double K = 0.0;
  double witness = 0.0;
  std::string message;
};

/// Certify the linear-growth/Lipschitz envelope of sigma_i = kappa_i h(.):
/// needs h(0) = 0 and a bounded difference quotient of h over [-window,window]
/// (sampled densely); then ||sigma(z)||_{l2} <= K(|z|+1) and the l2 Lipschitz
/// bound hold with K = L_h sqrt(sum kappa_i^2). Marks the spec validated.
NoiseCertificate validate_linear_noise(LinearNoiseSpec& spec, double window = 1e3);

struct SourceCertificate {
  bool ok = false;
  double c1 = 0.0;
  double mu_tilde = 0.0;
  bool analytic = false;  // true when derived in closed form (logistic)
  double witness = 0.0;
  std::string message;
};

/// Certify the quadratic domination g(s) <= c1 - mu_tilde s^2 (s >= 0) plus
/// g(0) >= 0. For the logistic source the optimal c1 = mu^2/(4(mu-mu_tilde))
/// is returned in closed form; otherwise c1 is found (or refuted) by sampling
/// a geometric grid. Passing c1 turns the call into a pure check of the pair.
SourceCertificate validate_source_domination(const SourceSpec& g, double mu_tilde,
                                             std::optional<double> c1 = std::nullopt,
                                             double s_max = 1e6);

struct AdmissibilityReport {
  bool ok = false;
  std::string message;  // names the violated inequality
};

/// Check the nonlinear-noise exponent constraints together with the declared
/// polynomial envelope of the source:
///   sum b_i^2 finite, r > ((2 v n)-1)/2, q >= 2r,
///   q > 2((2 v n)-1) r / (2r - (2 v n) + 1),
///   g(0) >= 0 and |g(s)| <= c2 + mu_prime |s|^n sampled.
/// Marks the noise spec validated on success.
AdmissibilityReport validate_nonlinear_noise(NonlinearNoiseSpec& noise, const SourceSpec& g,
                                             double s_max = 1e3);

/// Moment window (2, chi/(chi-mu)^+) for the p0-th moment bound;
/// chi/0^+ = +inf. Empty exactly when mu <= chi/2.
struct P0Window {
  bool empty = true;
  double lo = 2.0;
  double hi = 2.0;  // +inf allowed
};
P0Window p0_window(double chi, double mu);

/// Drift margin delta = p0 mu_tilde - (p0-1) chi (positive inside the
/// window) and the explicit Young constant C with
///   c1 p0 s^{p0-1} <= (delta/2) s^{p0+1} + C/area   pointwise,
/// so that c1 p0 int u^{p0-1} <= (delta/2) int u^{p0+1} + C.
/// threshold = 2C/delta: above it the full drift bound is <= 0.
struct YoungSplit {
  double delta = 0.0;
  double C = 0.0;
  double threshold = 0.0;
};
YoungSplit young_allowance(double p0, double chi, double c1, double mu_tilde, double area);

/// Parameters of one model instance (the initial field lives elsewhere).
struct ModelParams {
  double chi = 1.0;
  SourceSpec source;
  std::optional<LinearNoiseSpec> linear_noise;
  std::optional<NonlinearNoiseSpec> nonlinear_noise;

  std::size_t noise_mode_count() const {
    if (linear_noise) return linear_noise->kappas.size();
    if (nonlinear_noise) return nonlinear_noise->bs.size();
    return 0;
  }
};

}  // namespace sks
