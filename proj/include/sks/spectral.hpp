#pragma once

#include "sks/grid.hpp"

namespace sks {

/// FFTW r2r plans for one grid. Forward/backward cosine transforms plus the
/// mixed sine/cosine plans used by the derivative operators. Plan creation
/// goes through a global planner lock; execution is thread-safe and works on
/// caller-provided buffers (plans are created FFTW_UNALIGNED).
///
/// Normalization: with nodal values u_j and coefficients c_k of
/// u(x) = sum_k c_k cos(k pi x/lx), the discrete transforms are orthogonal
/// and roundtrip exactly (up to roundoff). Parseval on the cell-average
/// quadrature reads ||u||_2^2 = lx*ly * sum_{kl} c_{kl}^2 / (a_k a_l) with
/// a_0 = 1 and a_k = 2 for k >= 1.
class SpectralWorkspace {
 public:
  explicit SpectralWorkspace(std::size_t nx, std::size_t ny);
  ~SpectralWorkspace();

  SpectralWorkspace(const SpectralWorkspace&) = delete;
  SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

  /// Nodal -> cosine coefficients (normalized as documented above).
  void forward_cc(const double* nodal, double* coeffs) const;
  /// Cosine coefficients -> nodal values.
  void backward_cc(const double* coeffs, double* nodal) const;

  /// Synthesize nodal values of sum_{k>=1,l} s_{kl} sin(k pi x/lx) cos(l pi y/ly).
  /// Input layout s[l*nx+k], the k=0 column is ignored.
  void backward_sc_x(const double* sine_coeffs, double* nodal) const;
  /// Synthesize nodal values of sum_{k,l>=1} s_{kl} cos(k pi x/lx) sin(l pi y/ly).
  void backward_cs_y(const double* sine_coeffs, double* nodal) const;

  /// Analyze nodal values into x-sine coefficients (k=1..nx-1; the k=nx
  /// staggered mode is nodally invisible under differentiation and dropped).
  /// Output layout s[l*nx+k] with the k=0 column zero.
  void forward_sc_x(const double* nodal, double* sine_coeffs) const;
  void forward_cs_y(const double* nodal, double* sine_coeffs) const;

 private:
  std::size_t nx_, ny_;
  void* plan_fwd_cc_;
  void* plan_bwd_cc_;
  void* plan_bwd_sc_x_;
  void* plan_bwd_cs_y_;
  void* plan_fwd_sc_x_;
  void* plan_fwd_cs_y_;
  std::vector<double> scratch_in_, scratch_out_;  // plan-time buffers
};

/// Nodal field -> cosine coefficients. Rejects non-finite input.
SpectralCoeffs to_spectral(const ScalarField& u);

/// Cosine coefficients -> nodal field.
ScalarField from_spectral(const SpectralCoeffs& c);

/// Zero all modes with k >= floor(2 nx/3) or l >= floor(2 ny/3) (2/3-rule
/// alias guard for quadratic products).
void dealias(SpectralCoeffs& c);
std::size_t dealias_cutoff(std::size_t n);

}  // namespace sks
