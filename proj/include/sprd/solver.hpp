#pragma once

// Semi-implicit spectral Euler-Maruyama stepping for
//   du_i - div(a_i grad u_i) dt = [div F_i(u) + f_i(u)] dt
//                                 + sum_n [(b_{n,i} . grad) u_i + g_{n,i}(u)] dw^n.
// Diffusion is implicit (Fourier multiplier), everything else explicit.

#include <optional>
#include <vector>

#include "sprd/energy.hpp"
#include "sprd/models.hpp"
#include "sprd/noise.hpp"

namespace sprd {

enum class Scheme { SemiImplicitEM, StratonovichMidpoint };

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  Scheme scheme = Scheme::SemiImplicitEM;
  double blowup_threshold = 1e8;
  bool dealias = true;
  /// Diagnostics every `record_every` steps (plus t = 0 and the final step).
  int record_every = 10;
  /// Keep a state copy every `snapshot_every` records; 0 keeps none.
  int snapshot_every = 0;
  /// Exponent of the recorded L^zeta energies.
  double zeta = 2.0;
  /// SemiImplicitEM only: add the Stratonovich-to-Ito correction tensor to a_i,
  /// i.e. read the transport term in the Stratonovich sense.
  bool stratonovich_correction = false;
  /// Each step uses the sum of `substeps` consecutive driver increments of
  /// length dt / substeps, so runs at dt and dt / 2^k share one Brownian path.
  int substeps = 1;
  /// Relative threshold of the positivity bookkeeping, see positivity_report.
  double positivity_tol = 1e-3;

  void validate() const;
  bool operator==(const SolverConfig&) const = default;
};

struct Trajectory {
  /// Recorded instants, strictly increasing.
  std::vector<double> times;
  std::vector<EnergyRecord> diagnostics;
  std::vector<SystemState> snapshots;
  SystemState final_state;
  bool blown_up = false;
  std::optional<double> blowup_time;
  std::vector<double> min_value_per_component;
  /// Per component: recorded (cell, time) samples and those below the
  /// positivity tolerance.
  std::vector<std::size_t> positivity_samples;
  std::vector<std::size_t> positivity_violations;
  std::size_t steps = 0;
};

/// Precomputed operators for one (model, noise, a, cfg) combination.
class Stepper {
 public:
  Stepper(const ReactionModel& model, const TransportNoise& noise,
          const DiffusionTensor& a, const SolverConfig& cfg);

  /// Brownian increments consumed per step (one per noise or g mode).
  std::size_t increments_needed() const { return n_incr_; }

  /// Advances by cfg.dt using the given increments (size >= increments_needed()).
  SystemState step(const SystemState& state, std::span<const double> increments) const;

  /// Increments for step `m` from the driver (summed over substeps).
  void increments(const BrownianDriver& driver, std::uint64_t m,
                  std::span<double> out) const;

  const SolverConfig& config() const { return cfg_; }

 private:
  ReactionModel model_;
  TransportNoise noise_;
  SolverConfig cfg_;
  Grid grid_;
  std::size_t n_incr_ = 0;
  std::vector<std::vector<double>> inv_denominator_;
  /// Explicit part of the correction tensor, C(x) - mean C, row-major d x d;
  /// empty when C is constant.
  std::vector<std::vector<Field>> correction_fluct_;
};

/// One step with fresh increments from `driver` at step index `m`.
SystemState step(const SystemState& state, const ReactionModel& model,
                 const TransportNoise& noise, const DiffusionTensor& a,
                 const BrownianDriver& driver, const SolverConfig& cfg,
                 std::uint64_t m = 0);

/// Runs to cfg.t_end. Blow-up (max |u| > threshold or non-finite values) ends
/// the run and is reported, not thrown.
Trajectory simulate(const SystemState& u0, const ReactionModel& model,
                    const TransportNoise& noise, const DiffusionTensor& a,
                    const BrownianDriver& driver, const SolverConfig& cfg);

struct PositivityReport {
  std::vector<double> min_value;
  /// Fraction of recorded (cell, time) samples below
  /// -positivity_tol * max(1, ||u||_inf).
  std::vector<double> violation_fraction;
};

PositivityReport positivity_report(const Trajectory& traj);

}  // namespace sprd
