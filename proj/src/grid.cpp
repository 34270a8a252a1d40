#include "sks/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sks/operators.hpp"
#include "sks/spectral.hpp"

namespace sks {

Grid2D::Grid2D(std::size_t nx, std::size_t ny, double lx, double ly)
    : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
  if (nx < 4 || ny < 4) throw std::invalid_argument("Grid2D: need nx,ny >= 4");
  if (!(lx > 0.0) || !(ly > 0.0)) throw std::invalid_argument("Grid2D: need lx,ly > 0");
  dx_ = lx_ / double(nx_);
  dy_ = ly_ / double(ny_);
  lambda_.resize(nx_ * ny_);
  const double ax = M_PI / lx_, ay = M_PI / ly_;
  for (std::size_t l = 0; l < ny_; ++l) {
    const double muy = double(l) * ay;
    for (std::size_t k = 0; k < nx_; ++k) {
      const double mux = double(k) * ax;
      lambda_[l * nx_ + k] = mux * mux + muy * muy;
    }
  }
  nu1_ = std::min(ax, ay) * std::min(ax, ay);
  workspace_ = std::make_unique<SpectralWorkspace>(nx_, ny_);
}

Grid2D::~Grid2D() = default;

GridPtr build_grid(std::size_t nx, std::size_t ny, double lx, double ly) {
  return std::make_shared<const Grid2D>(nx, ny, lx, ly);
}

ScalarField::ScalarField(GridPtr g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid->size())
    throw std::invalid_argument("ScalarField: value count does not match grid");
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* where) {
  if (!a.same_as(b)) throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

double integral(const ScalarField& u) {
  double s = 0.0;
  for (double v : u.values) s += v;
  return s * u.grid->cell_area();
}

namespace {

bool is_integer(double p) { return p == std::floor(p) && p < 64; }

double pow_abs(double v, double p) {
  if (is_integer(p)) {
    double a = std::fabs(v), r = 1.0;
    for (int i = 0; i < int(p); ++i) r *= a;
    return r;
  }
  return std::pow(std::fabs(v), p);
}

double lp_of_values(const std::vector<double>& vals, double p, double cell_area) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : vals) m = std::max(m, std::fabs(v));
    return m;
  }
  double s = 0.0;
  for (double v : vals) s += pow_abs(v, p);
  return std::pow(s * cell_area, 1.0 / p);
}

}  // namespace

double lp_norm(const ScalarField& u, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: need p >= 1");
  return lp_of_values(u.values, p, u.grid->cell_area());
}

double w1p_norm(const ScalarField& u, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("w1p_norm: need p >= 1");
  VectorField g = gradient(u);
  if (std::isinf(p)) {
    return std::max({lp_of_values(u.values, p, 0.0), lp_of_values(g.x, p, 0.0),
                     lp_of_values(g.y, p, 0.0)});
  }
  const double a = u.grid->cell_area();
  double s = 0.0;
  for (double v : u.values) s += pow_abs(v, p);
  for (double v : g.x) s += pow_abs(v, p);
  for (double v : g.y) s += pow_abs(v, p);
  return std::pow(s * a, 1.0 / p);
}

}  // namespace sks
