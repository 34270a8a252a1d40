#pragma once

// Successive-substitution (Picard) solver for the localized mild equation on a
// short horizon.  The map Phi sends a candidate discrete path (u_j)_{j=0..J} to
//
//   (Phi u)_0     = u_0,
//   (Phi u)_{j+1} = e^{-dt A} [ (Phi u)_j
//                               + dt theta_j (g(u_j) - div(chi u_j grad G u_j))
//                               + sum_i sigma_i(u_j) dW_{j,i} ],
//
// i.e. the discrete Duhamel sum evaluated by the same one-step recursion the
// time integrator uses, with all nonlinear terms frozen on the candidate path
// and one fixed set of Wiener increments shared by every iteration.  A fixed
// point of Phi is exactly a path of the integrator driven by those increments,
// bit for bit, because both run the identical step arithmetic.

#include <cstddef>
#include <optional>
#include <vector>

#include "sks/grid.hpp"
#include "sks/model.hpp"
#include "sks/noise.hpp"

namespace sks {

struct PicardOptions {
  double horizon = 0.05;  // total time covered by the iteration
  double dt = 1e-3;       // step size; horizon/dt must be a whole number >= 1
  std::optional<double> cutoff_m;  // localization level; absent = theta == 1
  bool cutoff_noise = false;       // scale noise by theta (norm-coupled systems)
  double tol = 1e-9;               // stop when sup_j |u^{k+1}_j - u^k_j|_inf <= tol
  std::size_t max_iter = 20;
};

struct PicardReport {
  bool converged = false;
  std::size_t iterations = 0;        // number of Phi applications performed
  std::vector<double> diff_sup;      // d_k = sup over the path of the nodal sup
                                     // distance between iterates k and k+1
  std::vector<double> ratios;        // d_k / d_{k-1}, one per k >= 1
  std::vector<double> times;         // grid times 0, dt, ..., horizon
  std::vector<ScalarField> path;     // final iterate, one field per grid time
  std::vector<WienerIncrement> increments;  // frozen driving increments
};

/// Apply Phi once: rebuild the path from u0 with every nonlinear term and
/// noise coefficient evaluated on `candidate`.  `candidate` must hold one
/// field per grid time (J+1 entries for J = increments.size()).
std::vector<ScalarField> picard_apply(const ScalarField& u0,
                                      const std::vector<ScalarField>& candidate,
                                      const std::vector<WienerIncrement>& increments,
                                      const ModelParams& params, const PicardOptions& opt);

/// Iterate Phi from the constant-in-time path u_j == u0 until the sup distance
/// between successive iterates falls below opt.tol or opt.max_iter is reached.
/// Increments are drawn once from ctx and reused by every iteration.
PicardReport picard_solve(const ScalarField& u0, const ModelParams& params,
                          const PicardOptions& opt, const SeedContext& ctx);

}  // namespace sks
