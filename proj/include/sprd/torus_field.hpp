#pragma once

// Fields on the flat torus [0,1)^d with unit Lebesgue measure, spectral
// differentiation and the integral functionals monitored along trajectories.

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sprd/error.hpp"

namespace sprd {

inline constexpr int kMaxDim = 3;

struct Grid {
  int dim = 1;
  int n = 4;

  std::size_t cells() const {
    std::size_t c = 1;
    for (int j = 0; j < dim; ++j) c *= static_cast<std::size_t>(n);
    return c;
  }
  double spacing() const { return 1.0 / n; }

  /// Multi-index of a flat row-major cell index (last axis fastest).
  std::array<int, kMaxDim> index(std::size_t flat) const;
  /// Physical coordinates of a cell (left corner, i.e. x_j = i_j / n).
  std::array<double, kMaxDim> coords(std::size_t flat) const;

  bool operator==(const Grid&) const = default;
};

/// Rejects dim outside {1,2,3} and n that is not a power of two >= 4.
Grid make_grid(int dim, int points_per_dim);

/// One real scalar component sampled on a grid. Value type.
class Field {
 public:
  Field() = default;
  explicit Field(const Grid& grid, double fill = 0.0);
  Field(const Grid& grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  bool all_finite() const;
  double max_abs() const;
  double min() const;

  Field& operator+=(const Field& other);
  Field& operator*=(double s);

 private:
  Grid grid_{};
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

using VectorField = std::vector<Field>;

struct SystemState {
  std::vector<Field> components;
  double time = 0.0;

  const Grid& grid() const { return components.front().grid(); }
  std::size_t ell() const { return components.size(); }
  /// Throws unless ell >= 1 and all components share one grid.
  void validate() const;
};

/// Evaluates `fn` at the cell coordinates of every grid point.
Field sample_field(const Grid& grid,
                   const std::function<double(std::span<const double>)>& fn);

/// Spectral partial derivatives (d_1 u, ..., d_d u). Exact on trigonometric
/// polynomials with |k_j| < n/2.
VectorField gradient(const Field& u);

/// sum_j d_j v_j via spectral differentiation.
Field divergence(const VectorField& v);

/// Cell-average quadrature of u.
double mean(const Field& u);

/// n^{-d} sum |u|^zeta, i.e. ||u||_{L^zeta}^zeta on the unit torus.
double lzeta_power(const Field& u, double zeta);

/// (n^{-d} sum |u|^zeta)^{1/zeta}. Requires zeta >= 2.
double lzeta_norm(const Field& u, double zeta);

/// n^{-d} sum |u|^{zeta-2} |grad u|^2 with a spectral gradient. At zeta = 2
/// the weight is identically 1.
double dissipation_integral(const Field& u, double zeta);

/// Same integral with a precomputed gradient.
double dissipation_integral(const Field& u, const VectorField& grad,
                            double zeta);

/// ||u||_{L^2}^2 from the Fourier coefficients (Parseval).
double spectral_l2_squared(const Field& u);

}  // namespace sprd
