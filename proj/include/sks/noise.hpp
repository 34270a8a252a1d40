#pragma once

#include <array>
#include <cstdint>

#include "sks/grid.hpp"
#include "sks/model.hpp"

namespace sks {

/// Philox 4x32-10 counter-based generator. Every draw is a pure function of
/// (key, counter); there is no generator state, so paths, steps and modes can
/// be sampled in any order — and in parallel — with bit-identical results.
std::array<std::uint32_t, 4> philox4x32(std::uint64_t key,
                                        const std::array<std::uint32_t, 4>& counter);

/// Disjoint counter streams; the stream id occupies the last counter word so
/// different uses of the generator can never collide.
enum class RngStream : std::uint32_t {
  kWiener = 0,
  kFieldSynthesis = 1,
  kBootstrap = 2,
  kSynthetic = 3,
};

/// Uniform draw on (0,1) from one Philox block (53-bit mantissa).
double philox_uniform(std::uint64_t key, std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                      RngStream stream, std::uint32_t substream = 0);

/// Standard normal draw (Box-Muller on one Philox block).
double philox_normal(std::uint64_t key, std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                     RngStream stream, std::uint32_t substream = 0);

/// Identifies one sample path of one experiment.
struct SeedContext {
  std::uint64_t master_seed = 0;
  std::uint64_t path_index = 0;
};

/// Brownian increments for one time step: dw[i] ~ N(0, dt), one per noise
/// mode, generated from (master_seed, path_index, step_index, mode_index).
struct WienerIncrement {
  double dt = 0.0;
  std::vector<double> dw;
};

WienerIncrement sample_increment(const SeedContext& ctx, std::uint64_t step_index, double dt,
                                 std::size_t mode_count);

/// Diffusion fields sigma_i(u) = kappa_i h(u(x)) for a validated linear
/// noise spec (one nodal field per mode).
std::vector<ScalarField> diffusion_fields(const LinearNoiseSpec& spec, const ScalarField& u);

/// Diffusion fields sigma_i(u) = b_i ||u||_q^r u for a validated
/// norm-coupled noise spec.
std::vector<ScalarField> nonlinear_diffusion_fields(const NonlinearNoiseSpec& spec,
                                                    const ScalarField& u);

/// Discrete stochastic convolution driven by per-step diffusion fields
/// h_path[j][i] and increments inc[j].dw[i]:
///   M_{j+1} = e^{-dt A}(M_j + sum_i h_path[j][i] inc[j].dw[i]),  M_0 = 0,
/// evaluated after `steps` steps. The recursion is the defining formula, so
/// the semigroup recursion identity holds exactly by construction.
ScalarField stochastic_convolution(const std::vector<std::vector<ScalarField>>& h_path,
                                   const std::vector<WienerIncrement>& increments, double dt,
                                   std::size_t steps);

}  // namespace sks
