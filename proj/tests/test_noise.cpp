#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "sks/grid.hpp"
#include "sks/model.hpp"
#include "sks/noise.hpp"
#include "sks/operators.hpp"

using namespace sks;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("philox block is deterministic and key/counter sensitive") {
  const std::array<std::uint32_t, 4> ctr = {1, 2, 3, 4};
  const auto a = philox4x32(42, ctr);
  const auto b = philox4x32(42, ctr);
  CHECK(a == b);
  CHECK(philox4x32(43, ctr) != a);
  const std::array<std::uint32_t, 4> ctr2 = {1, 2, 3, 5};
  CHECK(philox4x32(42, ctr2) != a);
}

TEST_CASE("philox streams are disjoint") {
  const double w = philox_normal(7, 0, 0, 0, RngStream::kWiener);
  const double f = philox_normal(7, 0, 0, 0, RngStream::kFieldSynthesis);
  const double b = philox_normal(7, 0, 0, 0, RngStream::kBootstrap);
  const double s = philox_normal(7, 0, 0, 0, RngStream::kSynthetic);
  CHECK(w != f);
  CHECK(w != b);
  CHECK(w != s);
  CHECK(f != b);
}

TEST_CASE("philox uniform lands strictly inside (0,1)") {
  for (std::uint32_t i = 0; i < 1000; ++i) {
    const double u = philox_uniform(99, i, 0, 0, RngStream::kSynthetic);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("wiener increments have N(0, dt) statistics") {
  const double dt = 0.25;
  const std::size_t draws = 10000;
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t s = 0; s < draws; ++s) {
    const WienerIncrement inc = sample_increment(SeedContext{2024, 3}, s, dt, 1);
    sum += inc.dw[0];
    sum2 += inc.dw[0] * inc.dw[0];
  }
  const double mean = sum / double(draws);
  const double var = sum2 / double(draws) - mean * mean;
  CHECK(std::abs(mean) < 3.0 * std::sqrt(dt / double(draws)));  // 3 sigma
  CHECK(var == doctest::Approx(dt).epsilon(0.05));
}

TEST_CASE("increments are reproducible and distinct across paths/steps/modes") {
  const SeedContext ctx{11, 5};
  const WienerIncrement a = sample_increment(ctx, 17, 1e-3, 3);
  const WienerIncrement b = sample_increment(ctx, 17, 1e-3, 3);
  CHECK(a.dw == b.dw);
  CHECK(a.dw.size() == 3);
  CHECK(a.dw[0] != a.dw[1]);
  const WienerIncrement c = sample_increment(ctx, 18, 1e-3, 3);
  CHECK(a.dw[0] != c.dw[0]);
  const WienerIncrement d = sample_increment(SeedContext{11, 6}, 17, 1e-3, 3);
  CHECK(a.dw[0] != d.dw[0]);
}

TEST_CASE("linear diffusion fields scale the profile by kappa") {
  const GridPtr g = build_grid(8, 8, kPi, kPi);
  ScalarField u(g);
  for (std::size_t n = 0; n < u.values.size(); ++n) u.values[n] = double(n % 5) - 1.0;

  LinearNoiseSpec spec;
  spec.kappas = {0.5, 2.0};
  spec.profile = LinearNoiseSpec::Profile::Linear;
  REQUIRE(validate_linear_noise(spec).ok);

  const std::vector<ScalarField> sig = diffusion_fields(spec, u);
  REQUIRE(sig.size() == 2);
  for (std::size_t n = 0; n < u.values.size(); ++n) {
    CHECK(sig[0].values[n] == doctest::Approx(0.5 * u.values[n]).epsilon(1e-15));
    CHECK(sig[1].values[n] == doctest::Approx(2.0 * u.values[n]).epsilon(1e-15));
  }
}

TEST_CASE("diffusion fields require a validated spec") {
  const GridPtr g = build_grid(8, 8, kPi, kPi);
  const ScalarField u(g);
  LinearNoiseSpec spec;
  spec.kappas = {1.0};
  CHECK_THROWS_AS(diffusion_fields(spec, u), std::invalid_argument);
}

TEST_CASE("norm-coupled diffusion fields match b_i |u|_q^r u") {
  const GridPtr g = build_grid(16, 16, kPi, kPi);
  ScalarField u(g);
  for (std::size_t j = 0; j < g->ny(); ++j)
    for (std::size_t i = 0; i < g->nx(); ++i) u.at(i, j) = 1.0 + 0.3 * std::cos(g->x(i));

  NonlinearNoiseSpec spec;
  spec.bs = {0.4, 0.3};
  spec.q = 4.0;
  spec.r = 1.0;
  REQUIRE(validate_nonlinear_noise(spec, logistic_source(1.0)).ok);

  const double scale = std::pow(lp_norm(u, 4.0), 1.0);
  const std::vector<ScalarField> sig = nonlinear_diffusion_fields(spec, u);
  REQUIRE(sig.size() == 2);
  for (std::size_t n = 0; n < u.values.size(); ++n) {
    CHECK(sig[0].values[n] == doctest::Approx(0.4 * scale * u.values[n]).epsilon(1e-13));
    CHECK(sig[1].values[n] == doctest::Approx(0.3 * scale * u.values[n]).epsilon(1e-13));
  }
}

TEST_CASE("stochastic convolution satisfies its defining recursion") {
  const GridPtr g = build_grid(16, 16, kPi, kPi);
  const double dt = 0.01;
  const std::size_t steps = 5;

  LinearNoiseSpec spec;
  spec.kappas = {0.2, 0.1};
  REQUIRE(validate_linear_noise(spec).ok);

  ScalarField u(g);
  for (std::size_t j = 0; j < g->ny(); ++j)
    for (std::size_t i = 0; i < g->nx(); ++i)
      u.at(i, j) = 1.0 + 0.5 * std::cos(g->x(i)) * std::cos(g->y(j));

  std::vector<std::vector<ScalarField>> h_path;
  std::vector<WienerIncrement> incs;
  for (std::size_t s = 0; s < steps; ++s) {
    h_path.push_back(diffusion_fields(spec, u));
    incs.push_back(sample_increment(SeedContext{5, 0}, s, dt, spec.kappas.size()));
  }

  // Manual recursion M_{j+1} = e^{-dt A}(M_j + sum_i h dW).
  ScalarField m(g);
  for (std::size_t s = 0; s < steps; ++s) {
    ScalarField acc = m;
    for (std::size_t i = 0; i < spec.kappas.size(); ++i)
      for (std::size_t n = 0; n < acc.values.size(); ++n)
        acc.values[n] += h_path[s][i].values[n] * incs[s].dw[i];
    m = heat_semigroup(acc, dt);
  }

  const ScalarField conv = stochastic_convolution(h_path, incs, dt, steps);
  double diff = 0.0;
  for (std::size_t n = 0; n < m.values.size(); ++n)
    diff = std::max(diff, std::abs(m.values[n] - conv.values[n]));
  CHECK(diff < 1e-13);
}
