#include "sks/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace sks {

namespace {
// FFTW's planner is not thread-safe; plan creation/destruction is serialized.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

SpectralWorkspace::SpectralWorkspace(std::size_t nx, std::size_t ny)
    : nx_(nx), ny_(ny), scratch_in_(nx * ny), scratch_out_(nx * ny) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  const int n0 = int(ny), n1 = int(nx);  // row-major: y slow, x fast
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  double* in = scratch_in_.data();
  double* out = scratch_out_.data();
  plan_fwd_cc_ = fftw_plan_r2r_2d(n0, n1, in, out, FFTW_REDFT10, FFTW_REDFT10, flags);
  plan_bwd_cc_ = fftw_plan_r2r_2d(n0, n1, in, out, FFTW_REDFT01, FFTW_REDFT01, flags);
  plan_bwd_sc_x_ = fftw_plan_r2r_2d(n0, n1, in, out, FFTW_REDFT01, FFTW_RODFT01, flags);
  plan_bwd_cs_y_ = fftw_plan_r2r_2d(n0, n1, in, out, FFTW_RODFT01, FFTW_REDFT01, flags);
  plan_fwd_sc_x_ = fftw_plan_r2r_2d(n0, n1, in, out, FFTW_REDFT10, FFTW_RODFT10, flags);
  plan_fwd_cs_y_ = fftw_plan_r2r_2d(n0, n1, in, out, FFTW_RODFT10, FFTW_REDFT10, flags);
  if (!plan_fwd_cc_ || !plan_bwd_cc_ || !plan_bwd_sc_x_ || !plan_bwd_cs_y_ ||
      !plan_fwd_sc_x_ || !plan_fwd_cs_y_)
    throw std::runtime_error("SpectralWorkspace: FFTW plan creation failed");
}

SpectralWorkspace::~SpectralWorkspace() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  for (void* p : {plan_fwd_cc_, plan_bwd_cc_, plan_bwd_sc_x_, plan_bwd_cs_y_,
                  plan_fwd_sc_x_, plan_fwd_cs_y_})
    if (p) fftw_destroy_plan(static_cast<fftw_plan>(p));
}

void SpectralWorkspace::forward_cc(const double* nodal, double* coeffs) const {
  fftw_execute_r2r(static_cast<fftw_plan>(plan_fwd_cc_), const_cast<double*>(nodal), coeffs);
  // REDFT10 gives Y_k = 2 sum_j u_j cos(pi k (j+1/2)/n) per dimension;
  // orthogonality sums to n (k=0) or n/2 (k>=1), hence these factors.
  const double inv_x0 = 1.0 / (2.0 * double(nx_)), inv_x = 1.0 / double(nx_);
  const double inv_y0 = 1.0 / (2.0 * double(ny_)), inv_y = 1.0 / double(ny_);
  for (std::size_t l = 0; l < ny_; ++l) {
    const double fy = (l == 0) ? inv_y0 : inv_y;
    for (std::size_t k = 0; k < nx_; ++k) {
      coeffs[l * nx_ + k] *= fy * ((k == 0) ? inv_x0 : inv_x);
    }
  }
}

void SpectralWorkspace::backward_cc(const double* coeffs, double* nodal) const {
  std::vector<double> tmp(nx_ * ny_);
  // REDFT01 synthesizes X_0 + 2 sum_{k>=1} X_k cos(...), so halve k>=1 inputs.
  for (std::size_t l = 0; l < ny_; ++l) {
    const double fy = (l == 0) ? 1.0 : 0.5;
    for (std::size_t k = 0; k < nx_; ++k) {
      tmp[l * nx_ + k] = coeffs[l * nx_ + k] * fy * ((k == 0) ? 1.0 : 0.5);
    }
  }
  fftw_execute_r2r(static_cast<fftw_plan>(plan_bwd_cc_), tmp.data(), nodal);
}

void SpectralWorkspace::backward_sc_x(const double* sine_coeffs, double* nodal) const {
  std::vector<double> tmp(nx_ * ny_, 0.0);
  // RODFT01 synthesizes 2 sum_{m<=n-2} X_m sin(pi(m+1)(j+1/2)/n) + (-1)^j X_{n-1};
  // our sine mode k maps to slot m=k-1 with weight 1/2, and the staggered
  // slot stays zero.
  for (std::size_t l = 0; l < ny_; ++l) {
    const double fy = (l == 0) ? 1.0 : 0.5;
    for (std::size_t k = 1; k < nx_; ++k) {
      tmp[l * nx_ + (k - 1)] = sine_coeffs[l * nx_ + k] * 0.5 * fy;
    }
  }
  fftw_execute_r2r(static_cast<fftw_plan>(plan_bwd_sc_x_), tmp.data(), nodal);
}

void SpectralWorkspace::backward_cs_y(const double* sine_coeffs, double* nodal) const {
  std::vector<double> tmp(nx_ * ny_, 0.0);
  for (std::size_t l = 1; l < ny_; ++l) {
    for (std::size_t k = 0; k < nx_; ++k) {
      tmp[(l - 1) * nx_ + k] = sine_coeffs[l * nx_ + k] * 0.5 * ((k == 0) ? 1.0 : 0.5);
    }
  }
  fftw_execute_r2r(static_cast<fftw_plan>(plan_bwd_cs_y_), tmp.data(), nodal);
}

void SpectralWorkspace::forward_sc_x(const double* nodal, double* sine_coeffs) const {
  std::vector<double> tmp(nx_ * ny_);
  fftw_execute_r2r(static_cast<fftw_plan>(plan_fwd_sc_x_), const_cast<double*>(nodal), tmp.data());
  // RODFT10 output slot m carries sine mode k=m+1 with weight n (1<=k<=n-1);
  // slot n-1 is the staggered k=n mode, dropped.
  const double inv_x = 1.0 / double(nx_);
  const double inv_y0 = 1.0 / (2.0 * double(ny_)), inv_y = 1.0 / double(ny_);
  for (std::size_t l = 0; l < ny_; ++l) {
    const double fy = (l == 0) ? inv_y0 : inv_y;
    sine_coeffs[l * nx_ + 0] = 0.0;
    for (std::size_t k = 1; k < nx_; ++k) {
      sine_coeffs[l * nx_ + k] = tmp[l * nx_ + (k - 1)] * fy * inv_x;
    }
  }
}

void SpectralWorkspace::forward_cs_y(const double* nodal, double* sine_coeffs) const {
  std::vector<double> tmp(nx_ * ny_);
  fftw_execute_r2r(static_cast<fftw_plan>(plan_fwd_cs_y_), const_cast<double*>(nodal), tmp.data());
  const double inv_x0 = 1.0 / (2.0 * double(nx_)), inv_x = 1.0 / double(nx_);
  const double inv_y = 1.0 / double(ny_);
  for (std::size_t k = 0; k < nx_; ++k) sine_coeffs[k] = 0.0;
  for (std::size_t l = 1; l < ny_; ++l) {
    for (std::size_t k = 0; k < nx_; ++k) {
      sine_coeffs[l * nx_ + k] = tmp[(l - 1) * nx_ + k] * inv_y * ((k == 0) ? inv_x0 : inv_x);
    }
  }
}

SpectralCoeffs to_spectral(const ScalarField& u) {
  if (!u.grid) throw std::invalid_argument("to_spectral: field has no grid");
  if (!all_finite(u.values)) throw std::invalid_argument("to_spectral: non-finite input");
  SpectralCoeffs c(u.grid);
  u.grid->workspace().forward_cc(u.values.data(), c.coeffs.data());
  return c;
}

ScalarField from_spectral(const SpectralCoeffs& c) {
  if (!c.grid) throw std::invalid_argument("from_spectral: coeffs have no grid");
  ScalarField u(c.grid);
  c.grid->workspace().backward_cc(c.coeffs.data(), u.values.data());
  return u;
}

std::size_t dealias_cutoff(std::size_t n) { return (2 * n) / 3; }

void dealias(SpectralCoeffs& c) {
  const std::size_t nx = c.grid->nx(), ny = c.grid->ny();
  const std::size_t kc = dealias_cutoff(nx), lc = dealias_cutoff(ny);
  for (std::size_t l = 0; l < ny; ++l) {
    for (std::size_t k = 0; k < nx; ++k) {
      if (k >= kc || l >= lc) c.coeffs[l * nx + k] = 0.0;
    }
  }
}

}  // namespace sks
