#include <cmath>
#include <random>

#include "doctest.h"
#include "sks/grid.hpp"
#include "sks/noise.hpp"
#include "sks/operators.hpp"
#include "sks/spectral.hpp"

using namespace sks;

namespace {
constexpr double kPi = 3.14159265358979323846;

ScalarField noisy_field(const GridPtr& g, std::uint64_t key) {
  ScalarField f(g);
  for (std::size_t n = 0; n < f.values.size(); ++n)
    f.values[n] = philox_normal(key, std::uint32_t(n), 0, 0, RngStream::kSynthetic);
  return f;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}
}  // namespace

TEST_CASE("cosine transform roundtrip is exact to roundoff") {
  for (auto dims : {std::pair<std::size_t, std::size_t>{32, 32}, {16, 48}, {48, 16}}) {
    const GridPtr g = build_grid(dims.first, dims.second, kPi, 2.0);
    const ScalarField f = noisy_field(g, 0x51D0 + dims.first);
    const ScalarField back = from_spectral(to_spectral(f));
    CHECK(max_abs_diff(f.values, back.values) < 1e-12);
  }
}

TEST_CASE("single cosine mode analyzes to a single coefficient") {
  const GridPtr g = build_grid(32, 32, kPi, kPi);
  ScalarField f(g);
  for (std::size_t j = 0; j < g->ny(); ++j)
    for (std::size_t i = 0; i < g->nx(); ++i)
      f.at(i, j) = 2.5 * std::cos(3.0 * g->x(i)) * std::cos(2.0 * g->y(j));
  const SpectralCoeffs c = to_spectral(f);
  CHECK(c.at(3, 2) == doctest::Approx(2.5).epsilon(1e-12));
  double off = 0.0;
  for (std::size_t l = 0; l < g->ny(); ++l)
    for (std::size_t k = 0; k < g->nx(); ++k)
      if (!(k == 3 && l == 2)) off = std::max(off, std::abs(c.at(k, l)));
  CHECK(off < 1e-13);
}

TEST_CASE("Parseval identity matches the nodal 2-norm") {
  const GridPtr g = build_grid(24, 40, 1.5, kPi);
  const ScalarField f = noisy_field(g, 0x9A55E7A1);
  const SpectralCoeffs c = to_spectral(f);
  double sum = 0.0;
  for (std::size_t l = 0; l < g->ny(); ++l)
    for (std::size_t k = 0; k < g->nx(); ++k) {
      const double ak = (k == 0) ? 1.0 : 2.0;
      const double al = (l == 0) ? 1.0 : 2.0;
      sum += c.at(k, l) * c.at(k, l) / (ak * al);
    }
  const double l2_spec = std::sqrt(g->lx() * g->ly() * sum);
  CHECK(l2_spec == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-12));
}

TEST_CASE("dealias cutoff and mode zeroing") {
  CHECK(dealias_cutoff(64) == 42);
  CHECK(dealias_cutoff(32) == 21);
  CHECK(dealias_cutoff(48) == 32);
  const GridPtr g = build_grid(32, 32, kPi, kPi);
  SpectralCoeffs c(g);
  for (double& v : c.coeffs) v = 1.0;
  dealias(c);
  for (std::size_t l = 0; l < g->ny(); ++l)
    for (std::size_t k = 0; k < g->nx(); ++k) {
      const bool kept = k < 21 && l < 21;
      CHECK(c.at(k, l) == (kept ? 1.0 : 0.0));
    }
}

TEST_CASE("spectral gradient of analytic modes") {
  const GridPtr g = build_grid(64, 64, kPi, kPi);
  ScalarField f(g);
  for (std::size_t j = 0; j < g->ny(); ++j)
    for (std::size_t i = 0; i < g->nx(); ++i)
      f.at(i, j) = std::cos(2.0 * g->x(i)) * std::cos(g->y(j));
  const VectorField grad = gradient(f);
  double err = 0.0;
  for (std::size_t j = 0; j < g->ny(); ++j)
    for (std::size_t i = 0; i < g->nx(); ++i) {
      const double gx = -2.0 * std::sin(2.0 * g->x(i)) * std::cos(g->y(j));
      const double gy = -std::cos(2.0 * g->x(i)) * std::sin(g->y(j));
      err = std::max(err, std::abs(grad.x[j * g->nx() + i] - gx));
      err = std::max(err, std::abs(grad.y[j * g->nx() + i] - gy));
    }
  CHECK(err < 1e-12);
}

TEST_CASE("gradient/divergence adjointness on random fields") {
  const GridPtr g = build_grid(32, 24, 2.0, 1.0);
  const ScalarField u = noisy_field(g, 0xAD301);
  VectorField w(g);
  const ScalarField wx = noisy_field(g, 0xAD302);
  const ScalarField wy = noisy_field(g, 0xAD303);
  w.x = wx.values;
  w.y = wy.values;

  const VectorField gu = gradient(u);
  const ScalarField dw = divergence(w);
  double ip_grad = 0.0, ip_div = 0.0;
  for (std::size_t n = 0; n < u.values.size(); ++n) {
    ip_grad += gu.x[n] * w.x[n] + gu.y[n] * w.y[n];
    ip_div += u.values[n] * dw.values[n];
  }
  ip_grad *= g->cell_area();
  ip_div *= g->cell_area();
  // <grad u, w> = -<u, div w> exactly (same sine basis on both sides).
  CHECK(std::abs(ip_grad + ip_div) < 1e-12 * (1.0 + std::abs(ip_grad)));
}

TEST_CASE("to_spectral rejects non-finite input") {
  const GridPtr g = build_grid(8, 8, 1.0, 1.0);
  ScalarField f(g);
  f.values[10] = std::nan("");
  CHECK_THROWS_AS(to_spectral(f), std::invalid_argument);
}
