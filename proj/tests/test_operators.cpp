#include <cmath>
#include <limits>

#include "doctest.h"
#include "sks/grid.hpp"
#include "sks/operators.hpp"
#include "sks/random_fields.hpp"
#include "sks/spectral.hpp"

using namespace sks;

namespace {
constexpr double kPi = 3.14159265358979323846;

ScalarField mode(const GridPtr& g, double amp, int kx, int ky) {
  ScalarField f(g);
  for (std::size_t j = 0; j < g->ny(); ++j)
    for (std::size_t i = 0; i < g->nx(); ++i)
      f.at(i, j) = amp * std::cos(kx * kPi * g->x(i) / g->lx()) *
                   std::cos(ky * kPi * g->y(j) / g->ly());
  return f;
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}
}  // namespace

TEST_CASE("heat semigroup multiplies each mode by exp(-lambda t)") {
  const GridPtr g = build_grid(32, 32, kPi, kPi);
  const ScalarField u = mode(g, 1.0, 2, 1);  // lambda = 5
  const double t = 0.3;
  const ScalarField hu = heat_semigroup(u, t);
  const ScalarField expect = mode(g, std::exp(-5.0 * t), 2, 1);
  CHECK(max_abs_diff(hu, expect) < 1e-13);
  // t = 0 is the identity.
  CHECK(max_abs_diff(heat_semigroup(u, 0.0), u) < 1e-14);
  CHECK_THROWS_AS(heat_semigroup(u, -0.1), std::invalid_argument);
}

TEST_CASE("heat semigroup preserves the mean and contracts L2") {
  const GridPtr g = build_grid(32, 32, kPi, kPi);
  const ScalarField u = random_nodal_field(g, 77, 0);
  const ScalarField hu = heat_semigroup(u, 0.1);
  CHECK(integral(hu) == doctest::Approx(integral(u)).epsilon(1e-12));
  CHECK(lp_norm(hu, 2.0) <= lp_norm(u, 2.0) + 1e-14);
}

TEST_CASE("green solve inverts 1 + lambda per mode and fixes constants") {
  const GridPtr g = build_grid(32, 32, kPi, kPi);
  const ScalarField u = mode(g, 3.0, 1, 0);  // lambda = 1
  const ScalarField v = green_solve(u);
  CHECK(max_abs_diff(v, mode(g, 1.5, 1, 0)) < 1e-13);

  ScalarField c(g);
  for (double& x : c.values) x = 4.0;
  CHECK(max_abs_diff(green_solve(c), c) < 1e-13);  // lambda = 0: v = u
}

TEST_CASE("fractional-power semigroup multiplier") {
  const GridPtr g = build_grid(32, 32, kPi, kPi);
  const ScalarField u = mode(g, 1.0, 1, 0);  // lambda = 1
  const double beta = 0.5, t = 1.0;
  // (lambda+1)^beta e^{-lambda t} = sqrt(2) e^{-1}.
  const ScalarField fu = frac_power_semigroup(u, beta, t);
  const ScalarField expect = mode(g, std::sqrt(2.0) * std::exp(-1.0), 1, 0);
  CHECK(max_abs_diff(fu, expect) < 1e-13);
  CHECK_THROWS_AS(frac_power_semigroup(u, 0.5, 0.0), std::invalid_argument);
  CHECK_NOTHROW(frac_power_semigroup(u, 0.0, 0.0));
}

TEST_CASE("yosida approximation multiplier and domain guard") {
  const GridPtr g = build_grid(32, 32, kPi, kPi);
  const ScalarField u = mode(g, 2.0, 1, 0);  // lambda = 1
  const double n = 10.0;
  const ScalarField yu = yosida_apply(u, n);
  CHECK(max_abs_diff(yu, mode(g, 2.0 * 10.0 / 11.0, 1, 0)) < 1e-13);
  CHECK_THROWS_AS(yosida_apply(u, 0.5), std::invalid_argument);  // n <= nu1
}

TEST_CASE("chemotaxis flux divergence has zero mean and matches a mild case") {
  const GridPtr g = build_grid(64, 64, kPi, kPi);
  const ScalarField u = random_resolved_nonneg(g, 31, 2);
  const ScalarField v = green_solve(u);
  const ScalarField d = chemotaxis_flux_div(u, v, 1.7);
  CHECK(std::abs(integral(d)) < 1e-12 * (1.0 + lp_norm(u, 2.0)));

  // For constant u the flux is u grad v with v = Gu = u: grad v = 0.
  ScalarField c(g);
  for (double& x : c.values) x = 2.0;
  const ScalarField dzero = chemotaxis_flux_div(c, green_solve(c), 1.0);
  CHECK(lp_norm(dzero, std::numeric_limits<double>::infinity()) < 1e-13);
}

TEST_CASE("semigroup certificate rows are finite and refinement-stable on a small grid") {
  CertOptions opt = default_cert_options();
  opt.trials = 10;
  opt.t_grid = {1e-2, 1e-1, 1.0};
  opt.p_list = {2.0};
  opt.beta_list = {0.0, 0.25};
  const GridPtr g = build_grid(32, 32, kPi, kPi);
  const std::vector<CertRow> rows = certify_semigroup_estimates(g, opt);
  CHECK(!rows.empty());
  for (const CertRow& r : rows) {
    CHECK(std::isfinite(r.max_ratio));
    CHECK(r.max_ratio > 0.0);
    CHECK(r.trials == 10);
  }
}

TEST_CASE("spectrum info exposes the grid tables") {
  const GridPtr g = build_grid(16, 16, kPi, kPi);
  const SpectrumInfo s = spectrum(g);
  CHECK(s.lambda == &g->eigenvalues());
  CHECK(s.nu1 == doctest::Approx(1.0).epsilon(1e-14));
}
