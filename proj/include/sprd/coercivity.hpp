#pragma once

// Sampled checks of the pointwise coercivity / dissipativity conditions.
// "For all y" is approximated on a box: low-discrepancy samples plus the box
// corners, local refinement of the sup, and an edge-trend test comparing the
// sup of L/W on the outer 10% shell with the sup on the interior.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sprd/models.hpp"
#include "sprd/noise.hpp"

namespace sprd {

enum class ConditionId {
  ScalarPointwise,
  ScalarSmooth,
  System,
  Random,
  StrongDissipative,
  GrowthEnvelope
};

std::string condition_name(ConditionId id);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct CoercivitySpec {
  double zeta = 2.0;
  /// Defaults to nu / 2 (per component for systems).
  std::optional<double> epsilon;
  std::vector<Interval> box;
  std::size_t samples = 100000;
  /// System weights alpha_i; empty means all ones.
  std::vector<double> weights_alpha;
  std::uint64_t seed = 1;

  /// [-w, w]^ell, or [0, w]^ell when `nonnegative`.
  static CoercivitySpec symmetric(int ell, double halfwidth, bool nonnegative = false);
};

struct CoercivityReport {
  ConditionId condition = ConditionId::ScalarPointwise;
  bool pass = false;
  double fitted_M = 0.0;
  double fitted_C = 0.0;
  /// Strong dissipativity only.
  double N0 = 0.0;
  double N1 = 0.0;
  std::vector<double> worst_point;
  /// min over samples of M - L(y)/W(y); negative on failure.
  double worst_margin = 0.0;
  double inner_sup = 0.0;
  double outer_sup = 0.0;
  /// Growth envelope: one verdict / constant per component.
  std::vector<bool> component_pass;
  std::vector<double> component_M;
  std::string note;
};

CoercivityReport check_scalar_pointwise(const ReactionModel& model,
                                        const TransportNoise& noise,
                                        const DiffusionTensor& a,
                                        const CoercivitySpec& spec);

CoercivityReport check_scalar_smooth(const ReactionModel& model,
                                     const TransportNoise& noise,
                                     const DiffusionTensor& a,
                                     const CoercivitySpec& spec);

/// Fits y f(y) <= -N0 |y|^{h+1} + N1 (|y|^2 + 1).
CoercivityReport check_strong_dissipativity(const ReactionModel& model,
                                            const CoercivitySpec& spec);

CoercivityReport check_system(const ReactionModel& model,
                              const TransportNoise& noise,
                              const DiffusionTensor& a,
                              const CoercivitySpec& spec);

enum class EnvelopeId { LotkaVolterra, Brusselator, Brusselator3d };

/// "lotka_volterra", "brusselator", "brusselator_3d"; anything else throws.
EnvelopeId parse_envelope(const std::string& name);
std::string envelope_name(EnvelopeId id);

CoercivityReport check_growth_envelope(const ReactionModel& model, EnvelopeId envelope,
                                       const TransportNoise& noise,
                                       const DiffusionTensor& a,
                                       const CoercivitySpec& spec);

struct RandomShape {
  double phi1 = 1.0;
  double psi1 = 1.0;
  double phi2 = 1.0;
};

/// (1, zeta/2, 2 psi2 / (2 psi2 - d)); requires psi2 > max(d/2, 1).
RandomShape check_random_coercivity_shape(double zeta, int dim, double psi2);

/// Generic fit of the smallest M with L(y) <= M W(y) on the box (W > 0).
/// Used by the checks above; exposed for tests and diagnostics.
struct BoundFit {
  bool bounded = false;
  double M = 0.0;
  double inner_sup = 0.0;
  double outer_sup = 0.0;
  std::vector<double> worst_point;
  double worst_margin = 0.0;
};

using PointScalar = std::function<double(std::span<const double>)>;
BoundFit fit_bound(const std::vector<Interval>& box, std::size_t samples,
                   std::uint64_t seed, const PointScalar& L, const PointScalar& W);

std::string report_to_json(const CoercivityReport& report);

}  // namespace sprd
