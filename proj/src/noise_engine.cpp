#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sprd/noise.hpp"

namespace sprd {
namespace {

using Vec3 = std::array<double, kMaxDim>;

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

Vec3 normalized(Vec3 v) {
  const double s = norm3(v);
  for (double& c : v) c /= s;
  return v;
}

// First nonzero coordinate positive: one representative per +-k pair.
bool canonical(const std::array<int, kMaxDim>& k, int dim) {
  for (int j = 0; j < dim; ++j) {
    if (k[j] != 0) return k[j] > 0;
  }
  return false;
}

std::vector<std::array<int, kMaxDim>> resolvable_wavevectors(const Grid& grid) {
  const int kmax = (grid.n - 1) / 3;  // 3|k| < n
  std::vector<std::array<int, kMaxDim>> ks;
  std::array<int, kMaxDim> k{};
  const int span = 2 * kmax + 1;
  std::size_t total = 1;
  for (int j = 0; j < grid.dim; ++j) total *= static_cast<std::size_t>(span);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    for (int j = grid.dim - 1; j >= 0; --j) {
      k[j] = static_cast<int>(rest % span) - kmax;
      rest /= span;
    }
    if (canonical(k, grid.dim)) ks.push_back(k);
  }
  std::sort(ks.begin(), ks.end(), [](const auto& a, const auto& b) {
    const int na = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
    const int nb = b[0] * b[0] + b[1] * b[1] + b[2] * b[2];
    if (na != nb) return na < nb;
    return a < b;
  });
  return ks;
}

std::vector<Vec3> polarizations(const std::array<int, kMaxDim>& k, int dim) {
  const Vec3 kv{double(k[0]), double(k[1]), double(k[2])};
  if (dim == 2) return {normalized({-kv[1], kv[0], 0.0})};
  // d = 3: an orthonormal pair spanning the plane orthogonal to k.
  Vec3 ref{0.0, 0.0, 1.0};
  if (k[0] == 0 && k[1] == 0) ref = {1.0, 0.0, 0.0};
  const Vec3 e1 = normalized(cross(kv, ref));
  const Vec3 e2 = normalized(cross(kv, e1));
  return {e1, e2};
}

VectorField mode_field(const Grid& grid, const NoiseMode& m) {
  VectorField b;
  const double two_pi = 2.0 * std::numbers::pi;
  Field shape(grid);
  for (std::size_t i = 0; i < shape.size(); ++i) {
    const auto x = grid.coords(i);
    double phase = 0.0;
    for (int j = 0; j < grid.dim; ++j) phase += m.k[j] * x[j];
    phase *= two_pi;
    shape[i] = m.coefficient * (m.sine ? std::sin(phase) : std::cos(phase));
  }
  for (int j = 0; j < grid.dim; ++j) b.push_back(m.polarization[j] * shape);
  return b;
}

std::vector<NoiseMode> kraichnan_modes(const Grid& grid, std::size_t n_modes,
                                       double alpha, double amplitude) {
  std::vector<NoiseMode> modes;
  const double decay = alpha + 0.5 * grid.dim;
  if (grid.dim == 1) {
    require(n_modes <= static_cast<std::size_t>(grid.n / 2),
            "n_modes exceeds the resolvable constant modes (n/2) in d = 1");
    for (std::size_t m = 1; m <= n_modes; ++m) {
      NoiseMode mode;
      mode.polarization = {1.0, 0.0, 0.0};
      mode.coefficient = amplitude * std::pow(double(m), -decay);
      modes.push_back(mode);
    }
    return modes;
  }
  for (const auto& k : resolvable_wavevectors(grid)) {
    const double kn = std::sqrt(double(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]));
    for (const Vec3& pol : polarizations(k, grid.dim)) {
      for (bool sine : {false, true}) {
        if (modes.size() == n_modes) return modes;
        NoiseMode mode;
        mode.k = k;
        mode.polarization = pol;
        mode.sine = sine;
        mode.coefficient = amplitude * std::pow(kn, -decay);
        modes.push_back(mode);
      }
    }
  }
  require(modes.size() == n_modes,
          "n_modes = " + std::to_string(n_modes) + " exceeds the " +
              std::to_string(modes.size()) + " resolvable transport modes");
  return modes;
}

}  // namespace

double TransportNoise::scale(std::size_t component) const {
  if (per_component_scale.empty()) return 1.0;
  require(component < per_component_scale.size(),
          "noise scale requested for unknown component");
  return per_component_scale[component];
}

TransportNoise zero_noise(const Grid& grid) {
  TransportNoise noise;
  noise.grid = grid;
  return noise;
}

TransportNoise build_kraichnan_noise(const Grid& grid, std::size_t n_modes,
                                     double alpha, double amplitude) {
  require(n_modes >= 1, "Kraichnan noise needs n_modes >= 1");
  require(amplitude >= 0.0, "noise amplitude must be non-negative");
  TransportNoise noise;
  noise.grid = grid;
  noise.alpha = alpha;
  noise.amplitude = amplitude;
  noise.modes = kraichnan_modes(grid, n_modes, alpha, amplitude);
  for (const auto& m : noise.modes) noise.fields_b.push_back(mode_field(grid, m));
  noise.divergence_free = max_divergence(noise) <= 1e-10;
  return noise;
}

TransportNoise calibrate_kraichnan_noise(const Grid& grid, std::size_t n_modes,
                                         double alpha, double nu0) {
  require(nu0 > 0.0, "calibration target nu0 must be positive");
  const TransportNoise unit = build_kraichnan_noise(grid, n_modes, alpha, 1.0);
  const double s2 = sup_square_sum(unit);
  require(s2 > 0.0, "unit noise has zero energy");
  // Slightly below the target so the bound survives rounding in the fields.
  const double amplitude = std::sqrt(2.0 * nu0 / s2) * (1.0 - 1e-12);
  return build_kraichnan_noise(grid, n_modes, alpha, amplitude);
}

TransportNoise noise_from_fields(const Grid& grid, std::vector<VectorField> fields) {
  TransportNoise noise;
  noise.grid = grid;
  for (const auto& b : fields) {
    require(static_cast<int>(b.size()) == grid.dim,
            "transport field must have d components");
    for (const auto& c : b) {
      require(c.grid() == grid, "transport field on a different grid",
              ErrorCode::GridMismatch);
    }
  }
  noise.fields_b = std::move(fields);
  noise.modes.resize(noise.fields_b.size());
  noise.divergence_free = max_divergence(noise) <= 1e-10;
  return noise;
}

double max_divergence(const TransportNoise& noise) {
  double m = 0.0;
  for (const auto& b : noise.fields_b) m = std::max(m, divergence(b).max_abs());
  return m;
}

double sup_square_sum(const TransportNoise& noise, std::size_t component) {
  const double s = noise.scale(component);
  double total = 0.0;
  for (const auto& b : noise.fields_b) {
    double sup = 0.0;
    for (std::size_t i = 0; i < noise.grid.cells(); ++i) {
      double v = 0.0;
      for (const auto& c : b) v += c[i] * c[i];
      sup = std::max(sup, v);
    }
    total += s * s * sup;
  }
  return total;
}

std::vector<Eigen::MatrixXd> noise_covariance(const TransportNoise& noise,
                                              std::size_t component) {
  const int d = noise.grid.dim;
  const double s2 = noise.scale(component) * noise.scale(component);
  std::vector<Eigen::MatrixXd> cov(noise.grid.cells(), Eigen::MatrixXd::Zero(d, d));
  for (const auto& b : noise.fields_b) {
    for (std::size_t i = 0; i < cov.size(); ++i) {
      for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) cov[i](j, k) += s2 * b[j][i] * b[k][i];
      }
    }
  }
  return cov;
}

double kraichnan_bound_margin(const TransportNoise& noise, double nu0,
                              std::size_t component) {
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& c : noise_covariance(noise, component)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
    margin = std::min(margin, 2.0 * nu0 - es.eigenvalues().maxCoeff());
  }
  return margin;
}

DiffusionTensor DiffusionTensor::isotropic(int dim, std::span<const double> nu) {
  DiffusionTensor t;
  for (double v : nu) t.a.push_back(v * Eigen::MatrixXd::Identity(dim, dim));
  return t;
}

void DiffusionTensor::validate(int dim) const {
  require(!a.empty(), "diffusion tensor needs at least one component");
  for (const auto& m : a) {
    require(m.rows() == dim && m.cols() == dim,
            "diffusion matrix must be d x d");
    require((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * (1.0 + m.cwiseAbs().maxCoeff()),
            "diffusion matrix must be symmetric");
  }
}

double ellipticity_margin(const DiffusionTensor& a, const TransportNoise& noise,
                          std::size_t component) {
  require(a.ell() > 0, "ellipticity_margin: empty diffusion tensor");
  // A single matrix is shared by all components.
  const Eigen::MatrixXd& ai = a.a[std::min(component, a.ell() - 1)];
  if (noise.n_modes() == 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ai, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& c : noise_covariance(noise, component)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ai - 0.5 * c,
                                                      Eigen::EigenvaluesOnly);
    margin = std::min(margin, es.eigenvalues().minCoeff());
  }
  return margin;
}

TensorField stratonovich_correction(const TransportNoise& noise,
                                    std::size_t component) {
  require(noise.divergence_free,
          "Stratonovich transport requires divergence-free b");
  const int d = noise.grid.dim;
  const double s2 = noise.scale(component) * noise.scale(component);
  TensorField t;
  t.dim = d;
  t.entries.assign(static_cast<std::size_t>(d * d), Field(noise.grid));
  for (const auto& b : noise.fields_b) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        Field& e = t.entries[j * d + k];
        for (std::size_t i = 0; i < e.size(); ++i) e[i] += 0.5 * s2 * b[j][i] * b[k][i];
      }
    }
  }
  return t;
}

void accumulate_transport(const TransportNoise& noise, const VectorField& grad,
                          std::span<const double> increments,
                          std::size_t component, Field& out) {
  require(increments.size() >= noise.n_modes(),
          "increment count does not match the transport mode count");
  const double s = noise.scale(component);
  const std::size_t cells = out.size();
  for (std::size_t n = 0; n < noise.n_modes(); ++n) {
    const double w = s * increments[n];
    if (w == 0.0) continue;
    const VectorField& b = noise.fields_b[n];
    for (std::size_t j = 0; j < b.size(); ++j) {
      const auto bj = b[j].values();
      const auto gj = grad[j].values();
      for (std::size_t i = 0; i < cells; ++i) out[i] += w * bj[i] * gj[i];
    }
  }
}

Field apply_transport(const TransportNoise& noise, const Field& u,
                      std::span<const double> increments,
                      std::size_t component) {
  require(u.grid() == noise.grid, "apply_transport: grids differ",
          ErrorCode::GridMismatch);
  require(increments.size() == noise.n_modes(),
          "apply_transport: increment count must equal n_modes");
  Field out(u.grid());
  if (noise.n_modes() == 0) return out;
  accumulate_transport(noise, gradient(u), increments, component, out);
  return out;
}

}  // namespace sprd
