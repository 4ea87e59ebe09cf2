#pragma once

// Reaction models: drift f, conservative flux F and noise coefficients g_n,
// with the growth exponent h and positivity metadata used by the checker.

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sprd/error.hpp"

namespace sprd {

/// f(u) = u - u^3, g_n(u) = theta_n u^2.
struct AllenCahnParams {
  std::vector<double> theta{1.0};
  bool operator==(const AllenCahnParams&) const = default;
};

/// Scalar f(u) = sum_k f_coeffs[k] u^k, g_n(u) = theta_n sgn(u)|u|^g_power.
/// h = 0 selects max(2, deg f).
struct PolynomialParams {
  std::vector<double> f_coeffs;
  std::vector<double> theta;
  double g_power = 1.0;
  double h = 0.0;
  bool operator==(const PolynomialParams&) const = default;
};

/// Predator-prey: f_1 = l_1 u_1 - chi_11 u_1^2 - chi_12 u_1 u_2,
///                f_2 = l_2 u_2 - chi_22 u_2^2 + chi_21 u_1 u_2.
/// Canonical g fills `g_fraction` of the cubic parts of the growth envelopes.
struct LotkaVolterraParams {
  std::array<double, 2> lambda{1.0, 1.0};
  std::array<std::array<double, 2>, 2> chi{{{1.0, 1.0}, {1.0, 1.0}}};
  double g_fraction = 0.5;
  bool operator==(const LotkaVolterraParams&) const = default;
};

/// f_i = -u_i^2 + chi_i u_1 u_2 + lambda_i u_i, g_{1,i} = sigma_i u_i.
struct SymbioticLVParams {
  std::array<double, 2> lambda{0.0, 0.0};
  std::array<double, 2> chi{1.0, 1.0};
  std::array<double, 2> sigma{0.0, 0.0};
  bool operator==(const SymbioticLVParams&) const = default;
};

/// f_1 = -u_1 u_2^2 + a_1 u_1 + a_2 u_2 + a_0,
/// f_2 =  u_1 u_2^2 + b_1 u_1 + b_2 u_2 + b_0 (alpha = {a_0,a_1,a_2}).
/// Canonical g: ||g_1||^2 = g1_coeff u_1^2 u_2^2,
///              ||g_2||^2 = g2_coeff u_2^2 (1 + u_1^2).
struct BrusselatorParams {
  std::array<double, 3> alpha{0.0, 0.0, 0.0};
  std::array<double, 3> beta{0.0, 0.0, 0.0};
  double g1_coeff = 0.2;
  double g2_coeff = 0.0;
  bool positivity = true;
  bool operator==(const BrusselatorParams&) const = default;
};

/// f_1 = -u_1 u_2^2 + gamma_1 u_1 + eta_1, f_2 = u_1 u_2^2 + gamma_2 u_2 + eta_2.
struct GrayScottParams {
  std::array<double, 2> gamma{0.0, 0.0};
  std::array<double, 2> eta{0.0, 0.0};
  double g1_coeff = 0.2;
  double g2_coeff = 0.0;
  bool operator==(const GrayScottParams&) const = default;
};

/// f_1 = -r_1 u_1 u_2, f_2 = r_2 u_1 u_2 + r_3 u_2 (Lotka-Volterra special case).
struct SIRParams {
  std::array<double, 3> r{1.0, 1.0, 0.0};
  double g_fraction = 0.5;
  bool operator==(const SIRParams&) const = default;
};

/// f_i = sum_{j<i} y_j y_{i-j} - 2 sum_j y_j y_i, g_{1,i} = sigma y_i.
struct CoagulationParams {
  int ell = 2;
  double sigma = 0.0;
  bool operator==(const CoagulationParams&) const = default;
};

using ModelParams =
    std::variant<AllenCahnParams, PolynomialParams, LotkaVolterraParams,
                 SymbioticLVParams, BrusselatorParams, GrayScottParams,
                 SIRParams, CoagulationParams>;

/// Config name of a parameter set ("allen_cahn", "lotka_volterra", ...).
std::string model_name(const ModelParams& params);

/// ||g_1||^2 coefficient of the canonical Brusselator g_1 that fills
/// `fraction` of the y_1^2 y_2^2 term of the growth envelope. `dim` selects
/// the envelope: 1/5 for d = 3, (1 - eps) for d <= 2.
double brusselator_g1_coeff(double fraction, int dim, double eps = 0.05);

class ReactionModel {
 public:
  using PointFn = std::function<void(std::span<const double>, std::span<double>)>;

  const ModelParams& params() const { return params_; }
  const std::string& name() const { return name_; }
  int ell() const { return ell_; }
  double growth_h() const { return h_; }
  bool positivity_compliant() const { return positivity_; }
  /// Number of explicit g modes (g_{n,i} for n < g_mode_count()).
  std::size_t g_mode_count() const { return g_modes_; }
  bool has_flux() const { return static_cast<bool>(flux_); }

  void eval_f(std::span<const double> y, std::span<double> out) const { f_(y, out); }
  /// out[n * ell + i] = g_{n,i}(y).
  void eval_g_modes(std::span<const double> y, std::span<double> out) const;
  /// out[i] = sum_n |g_{n,i}(y)|^2.
  void eval_g_sq(std::span<const double> y, std::span<double> out) const;
  /// out[i * d + j] = F_i^j(y); zero unless a flux was attached.
  void eval_flux(std::span<const double> y, int dim, std::span<double> out) const;

  std::vector<double> eval_f(double t, std::span<const double> x,
                             std::span<const double> y) const;
  std::vector<double> eval_g_sq(double t, std::span<const double> x,
                                std::span<const double> y) const;
  std::vector<double> g_modes(double t, std::span<const double> x,
                              std::span<const double> y) const;

  /// Attaches a user flux F(y) (ell x d, row-major). Built-ins have F = 0.
  void set_flux(PointFn flux) { flux_ = std::move(flux); }

 private:
  friend ReactionModel build_model(const ModelParams& params);

  ModelParams params_;
  std::string name_;
  int ell_ = 1;
  double h_ = 2.0;
  bool positivity_ = false;
  std::size_t g_modes_ = 0;
  PointFn f_;
  PointFn g_;
  PointFn flux_;
};

/// Validates parameters (chi >= 0, positivity-mode signs, ...) and builds
/// the evaluators.
ReactionModel build_model(const ModelParams& params);

/// Empirical sup over sampled pairs in the box of
/// |f(y) - f(y')| / ((1 + |y|^{h-1} + |y'|^{h-1}) |y - y'|).
double lipschitz_probe(const ReactionModel& model, std::span<const double> lo,
                       std::span<const double> hi, std::size_t samples,
                       std::uint64_t seed = 1);

/// JSON form of a parameter set, {"name": ..., params...}.
std::string model_to_json(const ModelParams& params);
ModelParams model_from_json(const std::string& text);

}  // namespace sprd
