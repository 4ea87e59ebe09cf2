#pragma once

// Brownian driver, divergence-free transport fields b_n, diffusion tensors a_i
// and the parabolicity / Stratonovich machinery built from them.

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "sprd/torus_field.hpp"

namespace sprd {

/// Independent standard Brownian motions w^1..w^N. Increments are a pure
/// function of (seed, stream_id, step), so paths are reproducible and can be
/// regenerated at any refinement level.
class BrownianDriver {
 public:
  BrownianDriver(std::size_t n_modes, std::uint64_t seed,
                 std::uint64_t stream_id = 0);

  std::size_t n_modes() const { return n_modes_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// N(0,1) draws for the given step.
  void standard_normals(std::uint64_t step, std::span<double> out) const;

  /// N(0, dt) increments for the given step. Rejects dt <= 0.
  std::vector<double> sample_increments(std::uint64_t step, double dt) const;
  void sample_increments(std::uint64_t step, double dt,
                         std::span<double> out) const;

 private:
  std::size_t n_modes_;
  std::uint64_t seed_;
  std::uint64_t stream_id_;
};

/// Description of one real Fourier transport mode.
struct NoiseMode {
  std::array<int, kMaxDim> k{};
  std::array<double, kMaxDim> polarization{};
  bool sine = false;
  double coefficient = 0.0;
};

struct TransportNoise {
  Grid grid{};
  std::vector<VectorField> fields_b;
  std::vector<NoiseMode> modes;
  double alpha = 0.0;
  double amplitude = 0.0;
  bool divergence_free = true;
  /// b_{n,i} = per_component_scale[i] * b_n; empty means 1 for every i.
  std::vector<double> per_component_scale;

  std::size_t n_modes() const { return fields_b.size(); }
  double scale(std::size_t component) const;
};

/// No transport (N = 0).
TransportNoise zero_noise(const Grid& grid);

/// Kraichnan-type noise: real divergence-free Fourier modes with coefficient
/// amplitude * |k|^{-(alpha + d/2)}. For d = 1 the modes are constants of
/// magnitude amplitude * n^{-(alpha + 1/2)}, n = 1..N.
TransportNoise build_kraichnan_noise(const Grid& grid, std::size_t n_modes,
                                     double alpha, double amplitude);

/// Same construction with the amplitude chosen so that
/// sum_n sup_x |b_n(x)|^2 = 2 nu0, which implies
/// sum_n sup_x |b_n(x) . xi|^2 <= 2 nu0 |xi|^2.
TransportNoise calibrate_kraichnan_noise(const Grid& grid, std::size_t n_modes,
                                         double alpha, double nu0);

/// Wraps explicit fields; divergence_free is measured, not assumed.
TransportNoise noise_from_fields(const Grid& grid,
                                 std::vector<VectorField> fields);

/// max_n ||div b_n||_inf.
double max_divergence(const TransportNoise& noise);

/// sum_n sup_x |b_n(x)|^2 for the given component.
double sup_square_sum(const TransportNoise& noise, std::size_t component = 0);

/// min over grid points of 2 nu0 - lambda_max(sum_n b_n(x) b_n(x)^T).
double kraichnan_bound_margin(const TransportNoise& noise, double nu0,
                              std::size_t component = 0);

/// Constant-in-x diffusion matrices, one symmetric d x d matrix per component.
struct DiffusionTensor {
  std::vector<Eigen::MatrixXd> a;

  static DiffusionTensor isotropic(int dim, std::span<const double> nu);
  std::size_t ell() const { return a.size(); }
  void validate(int dim) const;
};

/// Pointwise tensor sum_n b_{n,i}(x) b_{n,i}(x)^T, returned per grid point.
std::vector<Eigen::MatrixXd> noise_covariance(const TransportNoise& noise,
                                              std::size_t component);

/// min_x lambda_min(a_i - 1/2 sum_n b_{n,i}(x) b_{n,i}(x)^T). A single matrix in `a`
/// is used for every component.
double ellipticity_margin(const DiffusionTensor& a, const TransportNoise& noise,
                          std::size_t component);

/// Row-major d x d tensor of fields.
struct TensorField {
  int dim = 1;
  std::vector<Field> entries;

  const Field& at(int j, int k) const { return entries[j * dim + k]; }
};

/// 1/2 sum_n b^j_{n,i} b^k_{n,i}. Requires divergence-free noise.
TensorField stratonovich_correction(const TransportNoise& noise,
                                    std::size_t component);

/// sum_n dW^n (b_{n,i} . grad u).
Field apply_transport(const TransportNoise& noise, const Field& u,
                      std::span<const double> increments,
                      std::size_t component = 0);

/// Same with a precomputed gradient of u; accumulates into `out`.
void accumulate_transport(const TransportNoise& noise, const VectorField& grad,
                          std::span<const double> increments,
                          std::size_t component, Field& out);

}  // namespace sprd
