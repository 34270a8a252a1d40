#pragma once

#include <cstdint>

#include "sks/grid.hpp"

namespace sks {

/// Gaussian random field synthesized in mode space with coefficient weights
/// exp(-lambda_{kl}/lambda0). Coefficients are keyed by the mode indices, so
/// two grids over the same rectangle produce the same continuum field up to
/// an exp(-lambda_max/lambda0) tail — refinement-stable test data.
ScalarField random_spectral_field(const GridPtr& grid, std::uint64_t seed, std::uint32_t trial,
                                  double lambda0);

/// Vector field with two independent random_spectral_field components.
VectorField random_spectral_vector(const GridPtr& grid, std::uint64_t seed, std::uint32_t trial,
                                   double lambda0);

/// I.i.d. standard normal nodal values (rough test data).
ScalarField random_nodal_field(const GridPtr& grid, std::uint64_t seed, std::uint32_t trial);

/// Nonnegative field whose cosine interpolant is nonnegative everywhere:
/// the square of a band-limited random field (modes below half the alias
/// cutoff, so the square is exactly resolved on the grid).
ScalarField random_resolved_nonneg(const GridPtr& grid, std::uint64_t seed, std::uint32_t trial);

}  // namespace sks
