#pragma once

// Path ensembles of the solver: energy statistics, tail tables with Wilson
// intervals, energy-bound certificates and paired-run continuous dependence.

#include <optional>
#include <string>
#include <vector>

#include "sprd/energy.hpp"
#include "sprd/models.hpp"
#include "sprd/noise.hpp"
#include "sprd/solver.hpp"
#include "sprd/stats.hpp"

namespace sprd {

/// Everything needed to run one path except the Brownian stream.
struct Problem {
  ReactionModel model;
  TransportNoise noise;
  DiffusionTensor a;
  SystemState u0;

  const Grid& grid() const { return noise.grid; }
  /// Brownian increments needed per step.
  std::size_t increments_needed() const;
};

struct EnsembleConfig {
  std::size_t n_paths = 16;
  std::uint64_t base_seed = 1;
  int threads = 1;
  SolverConfig solver;
  /// Moment order for the tail-bound right-hand side; 0 selects
  /// q0 = max(d (h - 1) / 2, 2).
  double zeta0 = 0.0;
  /// Keep recorded states for the Brusselator functionals (ell = 2 only).
  bool brusselator = false;
  /// Keep every path's energy records (needed by energy_bound_certificate).
  bool keep_records = true;
};

/// max(d (h - 1) / 2, 2).
double q0_exponent(int dim, double h);

struct PathResult {
  std::uint64_t seed = 0;
  bool blown_up = false;
  std::optional<double> blowup_time;
  double initial_lzeta = 0.0;
  /// sum_i ||u_i(0)||_{L^zeta0}^zeta0.
  double initial_lzeta0 = 0.0;
  double sup_lzeta = 0.0;
  double terminal_lzeta = 0.0;
  double total_dissipation = 0.0;
  double N0 = 0.0;
  std::vector<double> min_value;
  std::vector<double> violation_fraction;
  std::vector<EnergyRecord> records;
  std::optional<BrusselatorEnergies> brusselator;
  SystemState final_state;
};

struct EnsembleStats {
  std::vector<PathResult> paths;
  std::size_t blowup_count = 0;
  double zeta = 2.0;
  double zeta0 = 2.0;
  /// Over paths that did not blow up.
  Summary sup_lzeta;
  Summary total_dissipation;
  Summary terminal_lzeta;
  Summary N0;
  double mean_initial_lzeta0 = 0.0;
};

/// Path j uses seed base_seed + j (stream 0).
EnsembleStats run_ensemble(const Problem& problem, const EnsembleConfig& cfg);

enum class TailFunctional { SupLzeta, Dissipation, TerminalLzeta, E11, E12, E21, E22 };

/// "sup_lzeta", "dissipation", "terminal_lzeta", "E11", "E12", "E21", "E22".
TailFunctional parse_tail_functional(const std::string& name);
std::string tail_functional_name(TailFunctional f);

/// Per-path values of a functional; blown-up paths give +infinity.
std::vector<double> functional_values(const EnsembleStats& stats, TailFunctional f);

struct TailRow {
  double gamma = 0.0;
  std::size_t exceed = 0;
  std::size_t n = 0;
  Proportion p;
};

/// Frequencies of {X > gamma} with Wilson 95% intervals, sorted by gamma.
std::vector<TailRow> tail_probability(const EnsembleStats& stats, TailFunctional f,
                                      std::vector<double> gamma_grid);

struct EnergyCertificate {
  double N0_hat = 0.0;
  /// Same estimator on the prefix [0, T/2] of the same runs.
  double N0_half = 0.0;
  bool pass = false;
  std::string note;
};

/// N0_hat = (sup_t mean lzeta + mean total dissipation) / (1 + mean initial
/// lzeta); pass iff no blow-ups, finite, and N0 at T within 25% of N0 at T/2.
EnergyCertificate energy_bound_certificate(const EnsembleStats& stats);

struct DependenceRow {
  double delta = 0.0;
  /// Mean over paths of sup_t ||u(t) - u^delta(t)||_{L^q}.
  double distance = 0.0;
  double stderr_distance = 0.0;
  std::size_t blowups = 0;
};

/// For each path, advances u0 and u0 + delta * phi for every delta in lockstep
/// with one shared Brownian stream. `phi` defaults to cos(2 pi x_1) in every
/// component; q = 0 selects q0.
std::vector<DependenceRow> continuous_dependence(const Problem& problem,
                                                 const EnsembleConfig& cfg,
                                                 const std::vector<double>& deltas,
                                                 double q = 0.0,
                                                 const std::vector<Field>* phi = nullptr);

}  // namespace sprd
