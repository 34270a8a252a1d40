#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace sks {

class SpectralWorkspace;

/// Rectangular domain [0,lx] x [0,ly] sampled at cell centers:
/// x_i = (i+1/2) lx/nx, y_j = (j+1/2) ly/ny.
///
/// The grid owns the transform plans and the Neumann-Laplacian spectrum
/// shared by every field living on it, so it is created once through
/// build_grid() and passed around as shared_ptr<const Grid2D>.
class Grid2D {
 public:
  Grid2D(std::size_t nx, std::size_t ny, double lx, double ly);
  ~Grid2D();

  Grid2D(const Grid2D&) = delete;
  Grid2D& operator=(const Grid2D&) = delete;

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }
  double cell_area() const { return dx_ * dy_; }
  double area() const { return lx_ * ly_; }
  std::size_t size() const { return nx_ * ny_; }

  double x(std::size_t i) const { return (double(i) + 0.5) * dx_; }
  double y(std::size_t j) const { return (double(j) + 0.5) * dy_; }

  /// Eigenvalue of -Laplacian (Neumann) for cosine mode (k,l):
  /// lambda_{kl} = (k pi/lx)^2 + (l pi/ly)^2, stored y-major (l*nx+k).
  const std::vector<double>& eigenvalues() const { return lambda_; }
  double eigenvalue(std::size_t k, std::size_t l) const { return lambda_[l * nx_ + k]; }

  /// Smallest nonzero eigenvalue: min(pi/lx, pi/ly)^2.
  double nu1() const { return nu1_; }

  const SpectralWorkspace& workspace() const { return *workspace_; }

  bool same_as(const Grid2D& o) const {
    return nx_ == o.nx_ && ny_ == o.ny_ && lx_ == o.lx_ && ly_ == o.ly_;
  }

 private:
  std::size_t nx_, ny_;
  double lx_, ly_, dx_, dy_;
  double nu1_;
  std::vector<double> lambda_;
  std::unique_ptr<SpectralWorkspace> workspace_;
};

using GridPtr = std::shared_ptr<const Grid2D>;

/// Validates nx,ny >= 4, lx,ly > 0 and builds the grid with its spectrum
/// tables and transform plans.
GridPtr build_grid(std::size_t nx, std::size_t ny, double lx, double ly);

/// Nodal scalar field on a Grid2D, values stored row-major with y as the
/// slow index: values[j*nx + i].
struct ScalarField {
  GridPtr grid;
  std::vector<double> values;
  bool diverged = false;

  ScalarField() = default;
  explicit ScalarField(GridPtr g) : grid(std::move(g)), values(grid->size(), 0.0) {}
  ScalarField(GridPtr g, std::vector<double> v);

  double& at(std::size_t i, std::size_t j) { return values[j * grid->nx() + i]; }
  double at(std::size_t i, std::size_t j) const { return values[j * grid->nx() + i]; }
  std::size_t size() const { return values.size(); }
};

/// Coefficients c_{kl} of the cosine expansion
///   u(x,y) = sum_{k<nx, l<ny} c_{kl} cos(k pi x/lx) cos(l pi y/ly),
/// stored y-major (coeffs[l*nx + k]).
struct SpectralCoeffs {
  GridPtr grid;
  std::vector<double> coeffs;

  SpectralCoeffs() = default;
  explicit SpectralCoeffs(GridPtr g) : grid(std::move(g)), coeffs(grid->size(), 0.0) {}

  double& at(std::size_t k, std::size_t l) { return coeffs[l * grid->nx() + k]; }
  double at(std::size_t k, std::size_t l) const { return coeffs[l * grid->nx() + k]; }
};

/// Nodal vector field (two components, same layout as ScalarField).
struct VectorField {
  GridPtr grid;
  std::vector<double> x, y;

  VectorField() = default;
  explicit VectorField(GridPtr g)
      : grid(std::move(g)), x(grid->size(), 0.0), y(grid->size(), 0.0) {}
};

/// Midpoint-rule integral over the domain: cell_area * sum of values.
double integral(const ScalarField& u);

/// L^p norm with the cell-average quadrature, p in [1, inf].
/// Pass p = std::numeric_limits<double>::infinity() for the sup norm.
double lp_norm(const ScalarField& u, double p);

/// W^{1,p} norm (||u||_p^p + ||du/dx||_p^p + ||du/dy||_p^p)^{1/p} with
/// spectral derivatives; for p = inf the max of the three sup norms.
double w1p_norm(const ScalarField& u, double p);

bool all_finite(const std::vector<double>& v);

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* where);

}  // namespace sks
