#include "sks/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sks {

SourceSpec logistic_source(double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("logistic_source: need mu > 0");
  SourceSpec s;
  s.kind = SourceSpec::Kind::Logistic;
  s.mu = mu;
  s.label = "logistic";
  s.c2 = mu;  // |mu s(1-s)| <= mu + 2 mu s^2 on the line
  s.mu_prime = 2.0 * mu;
  s.n_exp = 2.0;
  return s;
}

SourceSpec zero_source() { return SourceSpec{}; }

double source_eval(const SourceSpec& s, double v) {
  switch (s.kind) {
    case SourceSpec::Kind::Zero:
      return 0.0;
    case SourceSpec::Kind::Logistic:
      return s.mu * v * (1.0 - v);
    case SourceSpec::Kind::Custom:
      return s.fn(v);
  }
  return 0.0;
}

double noise_profile_eval(const LinearNoiseSpec& s, double z) {
  switch (s.profile) {
    case LinearNoiseSpec::Profile::Linear:
      return z;
    case LinearNoiseSpec::Profile::Saturating:
      return z / (1.0 + std::fabs(z));
    case LinearNoiseSpec::Profile::Custom:
      return s.h(z);
  }
  return z;
}

namespace {

// Sample points for difference quotients: uniform across the window plus a
// geometric refinement toward 0 so steep-near-zero profiles are seen.
std::vector<double> lipschitz_sample_points(double window) {
  std::vector<double> pts;
  const int n_uniform = 4096, n_geo = 512;
  for (int i = 0; i <= n_uniform; ++i)
    pts.push_back(-window + 2.0 * window * double(i) / n_uniform);
  double z = 1e-6 * window;
  const double grow = std::pow(1e6, 1.0 / n_geo);
  for (int i = 0; i < n_geo; ++i, z *= grow) {
    pts.push_back(z);
    pts.push_back(-z);
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace

NoiseCertificate validate_linear_noise(LinearNoiseSpec& spec, double window) {
  NoiseCertificate cert;
  double sum_sq = 0.0;
  for (double k : spec.kappas) {
    if (!std::isfinite(k)) {
      cert.message = "kappa coefficients must be finite";
      return cert;
    }
    sum_sq += k * k;
  }
  if (spec.kappas.empty() || !(sum_sq > 0.0)) {
    cert.message = "need at least one nonzero kappa";
    return cert;
  }
  const double h0 = noise_profile_eval(spec, 0.0);
  if (h0 != 0.0) {
    cert.witness = h0;
    cert.message = "profile violates h(0) = 0 (sigma(0) must vanish)";
    return cert;
  }

  const auto pts = lipschitz_sample_points(window);
  double lip = 0.0, witness = 0.0;
  double prev_z = pts.front(), prev_h = noise_profile_eval(spec, prev_z);
  constexpr double kRatioCap = 1e6;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double z = pts[i];
    if (z == prev_z) continue;
    const double h = noise_profile_eval(spec, z);
    if (!std::isfinite(h)) {
      cert.witness = z;
      cert.message = "profile non-finite inside sampling window";
      return cert;
    }
    const double ratio = std::fabs(h - prev_h) / (z - prev_z);
    if (ratio > lip) {
      lip = ratio;
      witness = z;
    }
    prev_z = z;
    prev_h = h;
  }
  if (lip > kRatioCap) {
    cert.witness = witness;
    cert.message = "difference quotient of profile unbounded over window";
    return cert;
  }

  cert.ok = true;
  cert.lipschitz = lip;
  cert.K = lip * std::sqrt(sum_sq);
  spec.lipschitz = lip;
  spec.K = cert.K;
  spec.validated = true;
  return cert;
}

SourceCertificate validate_source_domination(const SourceSpec& g, double mu_tilde,
                                             std::optional<double> c1, double s_max) {
  SourceCertificate cert;
  cert.mu_tilde = mu_tilde;
  if (!(mu_tilde > 0.0)) {
    cert.message = "need mu_tilde > 0";
    return cert;
  }
  const double g0 = source_eval(g, 0.0);
  if (!(g0 >= 0.0)) {
    cert.witness = 0.0;
    cert.message = "g(0) < 0";
    return cert;
  }

  if (c1.has_value()) {
    // Pure check of the pair (c1, mu_tilde) on a geometric grid.
    const int n = 2000;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      s = (i == 0) ? 0.0 : s_max * std::pow(1e-9, 1.0 - double(i) / n);
      const double lhs = source_eval(g, s);
      const double rhs = *c1 - mu_tilde * s * s;
      if (lhs > rhs + 1e-12 * (1.0 + std::fabs(rhs))) {
        cert.witness = s;
        std::ostringstream msg;
        msg << "g(s) > c1 - mu_tilde s^2 at s = " << s;
        cert.message = msg.str();
        return cert;
      }
    }
    cert.ok = true;
    cert.c1 = *c1;
    return cert;
  }

  if (g.kind == SourceSpec::Kind::Logistic) {
    // g(s) = mu s - mu s^2 <= c1 - mu_tilde s^2 iff mu s - eps s^2 <= c1
    // with eps = mu - mu_tilde; the maximum is mu^2/(4 eps).
    const double eps = g.mu - mu_tilde;
    if (!(eps > 0.0)) {
      cert.witness = std::numeric_limits<double>::infinity();
      cert.message = "mu_tilde must sit strictly below the logistic rate mu";
      return cert;
    }
    cert.ok = true;
    cert.analytic = true;
    cert.c1 = g.mu * g.mu / (4.0 * eps);
    return cert;
  }

  // Generic sampled search for c1 = max_s g(s) + mu_tilde s^2 over [0, s_max].
  const int n = 4000;
  double best = g0, best_s = 0.0, s = 0.0;
  for (int i = 0; i <= n; ++i) {
    s = (i == 0) ? 0.0 : s_max * std::pow(1e-9, 1.0 - double(i) / n);
    const double v = source_eval(g, s) + mu_tilde * s * s;
    if (!std::isfinite(v)) {
      cert.witness = s;
      cert.message = "source non-finite inside sampling window";
      return cert;
    }
    if (v > best) {
      best = v;
      best_s = s;
    }
  }
  // A maximum still climbing at the window edge means no quadratic
  // domination (e.g. g(s) = s, or g identically 0 with mu_tilde > 0).
  if (best_s > 0.5 * s_max) {
    cert.witness = best_s;
    cert.message = "g(s) + mu_tilde s^2 keeps growing: no quadratic domination";
    return cert;
  }
  cert.ok = true;
  cert.c1 = best;
  return cert;
}

AdmissibilityReport validate_nonlinear_noise(NonlinearNoiseSpec& noise, const SourceSpec& g,
                                             double s_max) {
  AdmissibilityReport rep;
  double sum_sq = 0.0;
  for (double b : noise.bs) {
    if (!std::isfinite(b)) {
      rep.message = "b coefficients must be finite";
      return rep;
    }
    sum_sq += b * b;
  }
  if (noise.bs.empty() || !(sum_sq > 0.0)) {
    rep.message = "need at least one nonzero b";
    return rep;
  }
  const double n = g.n_exp;
  const double nv = std::max(2.0, n);
  const double r = noise.r, q = noise.q;
  std::ostringstream msg;
  if (!(r > (nv - 1.0) / 2.0)) {
    msg << "need r > ((2 v n)-1)/2 = " << (nv - 1.0) / 2.0 << ", got r = " << r;
    rep.message = msg.str();
    return rep;
  }
  if (!(q >= 2.0 * r)) {
    msg << "need q >= 2r = " << 2.0 * r << ", got q = " << q;
    rep.message = msg.str();
    return rep;
  }
  const double denom = 2.0 * r - nv + 1.0;
  const double q_floor = 2.0 * (nv - 1.0) * r / denom;
  if (!(q > q_floor)) {
    msg << "need q > 2((2 v n)-1)r/(2r-(2 v n)+1) = " << q_floor << ", got q = " << q;
    rep.message = msg.str();
    return rep;
  }
  if (!(source_eval(g, 0.0) >= 0.0)) {
    rep.message = "g(0) < 0";
    return rep;
  }
  // Declared envelope |g(s)| <= c2 + mu_prime |s|^n, sampled on both sides.
  const int steps = 2000;
  for (int i = 0; i <= steps; ++i) {
    const double s = -s_max + 2.0 * s_max * double(i) / steps;
    const double lhs = std::fabs(source_eval(g, s));
    const double rhs = g.c2 + g.mu_prime * std::pow(std::fabs(s), n);
    if (lhs > rhs + 1e-12 * (1.0 + rhs)) {
      msg << "declared envelope |g| <= c2 + mu' |s|^n fails at s = " << s;
      rep.message = msg.str();
      return rep;
    }
  }
  rep.ok = true;
  noise.validated = true;
  return rep;
}

P0Window p0_window(double chi, double mu) {
  P0Window w;
  w.lo = 2.0;
  const double gap = chi - mu;
  w.hi = (gap > 0.0) ? chi / gap : std::numeric_limits<double>::infinity();
  w.empty = !(w.hi > w.lo);
  return w;
}

YoungSplit young_allowance(double p0, double chi, double c1, double mu_tilde, double area) {
  if (!(p0 > 2.0)) throw std::invalid_argument("young_allowance: need p0 > 2");
  YoungSplit y;
  y.delta = p0 * mu_tilde - (p0 - 1.0) * chi;
  if (!(y.delta > 0.0))
    throw std::invalid_argument("young_allowance: drift margin delta is not positive");
  // Young with exponents (p0+1)/(p0-1) and (p0+1)/2:
  //   a b <= eps a^alpha + (eps alpha)^{-alpha'/alpha} b^{alpha'} / alpha'
  // applied to a = s^{p0-1}, b = c1 p0, eps = delta/2.
  const double alpha = (p0 + 1.0) / (p0 - 1.0);
  const double alpha_p = (p0 + 1.0) / 2.0;
  const double eps = 0.5 * y.delta;
  const double c_pw = std::pow(eps * alpha, -alpha_p / alpha) *
                      std::pow(c1 * p0, alpha_p) / alpha_p;
  y.C = c_pw * area;
  y.threshold = 2.0 * y.C / y.delta;
  return y;
}

}  // namespace sks
