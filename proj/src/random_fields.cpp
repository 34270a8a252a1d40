#include "sks/random_fields.hpp"

#include <cmath>

#include "sks/noise.hpp"
#include "sks/spectral.hpp"

namespace sks {

namespace {

ScalarField synth_component(const GridPtr& grid, std::uint64_t seed, std::uint32_t trial,
                            double lambda0, std::uint32_t component) {
  SpectralCoeffs c(grid);
  const std::size_t nx = grid->nx(), ny = grid->ny();
  const auto& lambda = grid->eigenvalues();
  for (std::size_t l = 0; l < ny; ++l) {
    for (std::size_t k = 0; k < nx; ++k) {
      const std::size_t n = l * nx + k;
      const double w = std::exp(-lambda[n] / lambda0);
      if (w < 1e-300) continue;
      c.coeffs[n] = w * philox_normal(seed, trial, std::uint32_t(k), std::uint32_t(l),
                                      RngStream::kFieldSynthesis, component);
    }
  }
  return from_spectral(c);
}

}  // namespace

ScalarField random_spectral_field(const GridPtr& grid, std::uint64_t seed, std::uint32_t trial,
                                  double lambda0) {
  return synth_component(grid, seed, trial, lambda0, 0);
}

VectorField random_spectral_vector(const GridPtr& grid, std::uint64_t seed, std::uint32_t trial,
                                   double lambda0) {
  VectorField w(grid);
  w.x = synth_component(grid, seed, trial, lambda0, 1).values;
  w.y = synth_component(grid, seed, trial, lambda0, 2).values;
  return w;
}

ScalarField random_nodal_field(const GridPtr& grid, std::uint64_t seed, std::uint32_t trial) {
  ScalarField u(grid);
  const std::size_t nx = grid->nx();
  for (std::size_t j = 0; j < grid->ny(); ++j)
    for (std::size_t i = 0; i < nx; ++i)
      u.values[j * nx + i] =
          philox_normal(seed, trial, std::uint32_t(i), std::uint32_t(j),
                        RngStream::kFieldSynthesis, 3);
  return u;
}

ScalarField random_resolved_nonneg(const GridPtr& grid, std::uint64_t seed, std::uint32_t trial) {
  // Band limit at half the 2/3 cutoff: squaring keeps all content below the
  // cutoff, so the nodal square *is* the square of the interpolant.
  SpectralCoeffs c(grid);
  const std::size_t nx = grid->nx(), ny = grid->ny();
  const std::size_t kmax = dealias_cutoff(nx) / 2, lmax = dealias_cutoff(ny) / 2;
  for (std::size_t l = 0; l < lmax; ++l) {
    for (std::size_t k = 0; k < kmax; ++k) {
      const double decay = std::exp(-3.0 * double(k * k + l * l) / double(kmax * lmax));
      c.coeffs[l * nx + k] = decay * philox_normal(seed, trial, std::uint32_t(k),
                                                   std::uint32_t(l),
                                                   RngStream::kFieldSynthesis, 4);
    }
  }
  ScalarField base = from_spectral(c);
  ScalarField out(grid);
  for (std::size_t n = 0; n < out.values.size(); ++n)
    out.values[n] = base.values[n] * base.values[n];
  return out;
}

}  // namespace sks
