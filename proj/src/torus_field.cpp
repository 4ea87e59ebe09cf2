#include "sprd/torus_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sprd/spectral.hpp"

namespace sprd {

std::array<int, kMaxDim> Grid::index(std::size_t flat) const {
  std::array<int, kMaxDim> idx{};
  for (int j = dim - 1; j >= 0; --j) {
    idx[j] = static_cast<int>(flat % static_cast<std::size_t>(n));
    flat /= static_cast<std::size_t>(n);
  }
  return idx;
}

std::array<double, kMaxDim> Grid::coords(std::size_t flat) const {
  const auto idx = index(flat);
  std::array<double, kMaxDim> x{};
  for (int j = 0; j < dim; ++j) x[j] = idx[j] * spacing();
  return x;
}

Grid make_grid(int dim, int points_per_dim) {
  require(dim >= 1 && dim <= kMaxDim,
          "grid dimension must be 1, 2 or 3, got " + std::to_string(dim));
  const int n = points_per_dim;
  require(n >= 4 && (n & (n - 1)) == 0,
          "points per dimension must be a power of two >= 4, got " +
              std::to_string(n));
  return Grid{dim, n};
}

Field::Field(const Grid& grid, double fill)
    : grid_(grid), values_(grid.cells(), fill) {}

Field::Field(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  require(values_.size() == grid_.cells(),
          "field value count does not match the grid");
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values_) {
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    m = std::max(m, std::abs(v));
  }
  return m;
}

double Field::min() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : values_) m = std::min(m, v);
  return m;
}

Field& Field::operator+=(const Field& other) {
  require(grid_ == other.grid_, "field grids differ", ErrorCode::GridMismatch);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }

Field operator-(Field a, const Field& b) {
  require(a.grid() == b.grid(), "field grids differ", ErrorCode::GridMismatch);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

Field operator*(double s, Field a) { return a *= s; }

void SystemState::validate() const {
  require(!components.empty(), "system state needs at least one component");
  for (const auto& c : components) {
    require(c.grid() == components.front().grid(),
            "system components live on different grids",
            ErrorCode::GridMismatch);
  }
}

Field sample_field(const Grid& grid,
                   const std::function<double(std::span<const double>)>& fn) {
  Field f(grid);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto x = grid.coords(i);
    f[i] = fn(std::span<const double>(x.data(), grid.dim));
  }
  return f;
}

VectorField gradient(const Field& u) {
  require(u.all_finite(), "gradient: non-finite input", ErrorCode::NonFinite);
  const Grid& grid = u.grid();
  const SpectralField uh = forward(u);
  SpectralField dh;
  VectorField out;
  out.reserve(grid.dim);
  for (int j = 0; j < grid.dim; ++j) {
    differentiate(uh, j, dh);
    out.push_back(inverse(dh));
  }
  return out;
}

Field divergence(const VectorField& v) {
  require(!v.empty(), "divergence: empty vector field");
  const Grid& grid = v.front().grid();
  require(static_cast<int>(v.size()) == grid.dim,
          "divergence: component count must equal the dimension");
  for (const auto& c : v) {
    require(c.grid() == grid, "divergence: mismatched grids",
            ErrorCode::GridMismatch);
  }
  SpectralField acc;
  acc.grid = grid;
  acc.coeffs.assign(spectral_size(grid), 0.0);
  SpectralField dh;
  for (int j = 0; j < grid.dim; ++j) {
    differentiate(forward(v[j]), j, dh);
    for (std::size_t k = 0; k < acc.coeffs.size(); ++k) acc.coeffs[k] += dh.coeffs[k];
  }
  return inverse(acc);
}

double mean(const Field& u) {
  double s = 0.0;
  for (double v : u.values()) s += v;
  return s / static_cast<double>(u.size());
}

double lzeta_power(const Field& u, double zeta) {
  double s = 0.0;
  if (zeta == 2.0) {
    for (double v : u.values()) s += v * v;
  } else {
    for (double v : u.values()) s += std::pow(std::abs(v), zeta);
  }
  return s / static_cast<double>(u.size());
}

double lzeta_norm(const Field& u, double zeta) {
  require(zeta >= 2.0, "lzeta_norm: zeta must be >= 2");
  return std::pow(lzeta_power(u, zeta), 1.0 / zeta);
}

double dissipation_integral(const Field& u, const VectorField& grad,
                            double zeta) {
  require(zeta >= 2.0, "dissipation_integral: zeta must be >= 2");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double g2 = 0.0;
    for (const auto& g : grad) g2 += g[i] * g[i];
    const double w = zeta == 2.0 ? 1.0 : std::pow(std::abs(u[i]), zeta - 2.0);
    s += w * g2;
  }
  return s / static_cast<double>(u.size());
}

double dissipation_integral(const Field& u, double zeta) {
  return dissipation_integral(u, gradient(u), zeta);
}

double spectral_l2_squared(const Field& u) {
  const SpectralField uh = forward(u);
  const auto& w = hermitian_weights(u.grid());
  double s = 0.0;
  for (std::size_t k = 0; k < uh.coeffs.size(); ++k) s += w[k] * std::norm(uh.coeffs[k]);
  const double n = static_cast<double>(u.size());
  return s / (n * n);
}

}  // namespace sprd
