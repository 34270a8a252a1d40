#include "sks/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "sks/spectral.hpp"

namespace sks {

namespace {

constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;  // golden ratio
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;  // sqrt(3)-1
constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = std::uint64_t(a) * std::uint64_t(b);
  hi = std::uint32_t(p >> 32);
  lo = std::uint32_t(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::uint64_t key,
                                        const std::array<std::uint32_t, 4>& counter) {
  std::uint32_t k0 = std::uint32_t(key);
  std::uint32_t k1 = std::uint32_t(key >> 32);
  std::array<std::uint32_t, 4> s = counter;
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mul_hi_lo(kPhiloxM0, s[0], hi0, lo0);
    mul_hi_lo(kPhiloxM1, s[2], hi1, lo1);
    const std::array<std::uint32_t, 4> next = {hi1 ^ s[1] ^ k0, lo1, hi0 ^ s[3] ^ k1, lo0};
    s = next;
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return s;
}

namespace {

inline std::uint64_t to_u64(std::uint32_t hi, std::uint32_t lo) {
  return (std::uint64_t(hi) << 32) | std::uint64_t(lo);
}

// (0,1): top 53 bits, shifted away from 0 by half an ulp.
inline double u64_to_unit(std::uint64_t x) {
  return (double(x >> 11) + 0.5) * 0x1.0p-53;
}

std::array<std::uint32_t, 4> make_counter(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                                          RngStream stream, std::uint32_t substream) {
  return {c0, c1, c2, std::uint32_t(stream) | (substream << 8)};
}

}  // namespace

double philox_uniform(std::uint64_t key, std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                      RngStream stream, std::uint32_t substream) {
  const auto r = philox4x32(key, make_counter(c0, c1, c2, stream, substream));
  return u64_to_unit(to_u64(r[0], r[1]));
}

double philox_normal(std::uint64_t key, std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                     RngStream stream, std::uint32_t substream) {
  const auto r = philox4x32(key, make_counter(c0, c1, c2, stream, substream));
  const double u1 = u64_to_unit(to_u64(r[0], r[1]));
  const double u2 = u64_to_unit(to_u64(r[2], r[3]));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

WienerIncrement sample_increment(const SeedContext& ctx, std::uint64_t step_index, double dt,
                                 std::size_t mode_count) {
  if (!(dt > 0.0)) throw std::invalid_argument("sample_increment: need dt > 0");
  if (ctx.path_index >> 32 || step_index >> 32)
    throw std::invalid_argument("sample_increment: path/step index exceeds 2^32");
  WienerIncrement inc;
  inc.dt = dt;
  inc.dw.resize(mode_count);
  const double root_dt = std::sqrt(dt);
  for (std::size_t i = 0; i < mode_count; ++i) {
    inc.dw[i] = root_dt * philox_normal(ctx.master_seed, std::uint32_t(ctx.path_index),
                                        std::uint32_t(step_index), std::uint32_t(i),
                                        RngStream::kWiener);
  }
  return inc;
}

std::vector<ScalarField> diffusion_fields(const LinearNoiseSpec& spec, const ScalarField& u) {
  if (!spec.validated)
    throw std::invalid_argument("diffusion_fields: noise spec is not validated");
  std::vector<ScalarField> out;
  out.reserve(spec.kappas.size());
  ScalarField h_of_u(u.grid);
  for (std::size_t n = 0; n < u.values.size(); ++n)
    h_of_u.values[n] = noise_profile_eval(spec, u.values[n]);
  for (double kappa : spec.kappas) {
    ScalarField f(u.grid);
    for (std::size_t n = 0; n < u.values.size(); ++n) f.values[n] = kappa * h_of_u.values[n];
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<ScalarField> nonlinear_diffusion_fields(const NonlinearNoiseSpec& spec,
                                                    const ScalarField& u) {
  if (!spec.validated)
    throw std::invalid_argument("nonlinear_diffusion_fields: noise spec is not validated");
  const double norm_pow = std::pow(lp_norm(u, spec.q), spec.r);
  std::vector<ScalarField> out;
  out.reserve(spec.bs.size());
  for (double b : spec.bs) {
    ScalarField f(u.grid);
    const double scale = b * norm_pow;
    for (std::size_t n = 0; n < u.values.size(); ++n) f.values[n] = scale * u.values[n];
    out.push_back(std::move(f));
  }
  return out;
}

ScalarField stochastic_convolution(const std::vector<std::vector<ScalarField>>& h_path,
                                   const std::vector<WienerIncrement>& increments, double dt,
                                   std::size_t steps) {
  if (steps > h_path.size() || steps > increments.size())
    throw std::invalid_argument("stochastic_convolution: not enough stored steps");
  if (h_path.empty() || h_path.front().empty())
    throw std::invalid_argument("stochastic_convolution: empty diffusion path");
  const GridPtr grid = h_path.front().front().grid;
  const auto& lambda = grid->eigenvalues();
  std::vector<double> decay(lambda.size());
  for (std::size_t n = 0; n < lambda.size(); ++n) decay[n] = std::exp(-dt * lambda[n]);

  SpectralCoeffs m_hat(grid);
  ScalarField noise(grid);
  SpectralCoeffs noise_hat(grid);
  for (std::size_t j = 0; j < steps; ++j) {
    const auto& fields = h_path[j];
    const auto& dw = increments[j].dw;
    if (fields.size() != dw.size())
      throw std::invalid_argument("stochastic_convolution: mode count mismatch");
    std::fill(noise.values.begin(), noise.values.end(), 0.0);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      require_same_grid(*grid, *fields[i].grid, "stochastic_convolution");
      const double w = dw[i];
      for (std::size_t n = 0; n < noise.values.size(); ++n)
        noise.values[n] += w * fields[i].values[n];
    }
    grid->workspace().forward_cc(noise.values.data(), noise_hat.coeffs.data());
    for (std::size_t n = 0; n < m_hat.coeffs.size(); ++n)
      m_hat.coeffs[n] = decay[n] * (m_hat.coeffs[n] + noise_hat.coeffs[n]);
  }
  return from_spectral(m_hat);
}

}  // namespace sks
