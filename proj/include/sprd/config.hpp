#pragma once

// Run configuration: YAML (JSON is accepted as a subset) with nested blocks
// grid / model / diffusion / noise / initial / solver / ensemble / check /
// gronwall. Every problem is reported with its file position.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sprd/coercivity.hpp"
#include "sprd/ensemble.hpp"
#include "sprd/models.hpp"
#include "sprd/solver.hpp"

namespace sprd {

struct GridSpec {
  int dim = 1;
  int n = 64;
  bool operator==(const GridSpec&) const = default;
};

struct DiffusionSpec {
  /// Isotropic nu_i (one value shared, or one per component).
  std::vector<double> nu{1.0};
  /// Optional full d x d matrices (one shared, or one per component);
  /// overrides nu when present.
  std::vector<std::vector<std::vector<double>>> matrices;
  bool operator==(const DiffusionSpec&) const = default;
};

struct NoiseSpec {
  std::size_t n_modes = 0;
  double alpha = 0.5;
  double amplitude = 0.0;
  /// When set, the amplitude is chosen so that sum_n sup|b_n|^2 = 2 nu0.
  std::optional<double> calibrate_nu0;
  bool divergence_free = true;
  std::vector<double> per_component_scale;
  bool operator==(const NoiseSpec&) const = default;
};

/// u_i(x) = offset + amplitude * s(2 pi k . x) with s = sin or cos;
/// "constant" ignores amplitude and k.
struct InitialComponent {
  std::string kind = "constant";
  double offset = 0.0;
  double amplitude = 1.0;
  std::vector<int> k{1};
  bool operator==(const InitialComponent&) const = default;
};

struct EnsembleSpec {
  std::size_t n_paths = 16;
  double zeta0 = 0.0;
  bool brusselator = false;
  std::string tail_functional = "sup_lzeta";
  std::vector<double> gamma;
  std::vector<double> deltas{0.0, 0.1, 0.01, 0.001};
  double q = 0.0;
  bool operator==(const EnsembleSpec&) const = default;
};

struct CheckSpec {
  /// scalar_pointwise, scalar_smooth, strong_dissipativity, system,
  /// growth_envelope.
  std::string condition = "scalar_pointwise";
  double zeta = 2.0;
  std::optional<double> epsilon;
  double box_halfwidth = 50.0;
  bool nonnegative = false;
  std::size_t samples = 100000;
  std::vector<double> weights_alpha;
  std::string envelope;
  bool operator==(const CheckSpec&) const = default;
};

struct GronwallSpec {
  std::size_t n_paths = 10000;
  double dt = 1e-3;
  double T = 1.0;
  double slack = 0.05;
  double p = 0.5;
  bool operator==(const GronwallSpec&) const = default;
};

struct RunConfig {
  std::uint64_t seed = 1;
  std::string output = "out";
  /// 0 means SPRD_THREADS or the core count.
  int threads = 0;
  GridSpec grid;
  ModelParams model = AllenCahnParams{};
  DiffusionSpec diffusion;
  NoiseSpec noise;
  std::vector<InitialComponent> initial{InitialComponent{}};
  SolverConfig solver;
  EnsembleSpec ensemble;
  CheckSpec check;
  GronwallSpec gronwall;
  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates; throws Error(Config) listing every problem as
/// "<source>:<line>:<col>: <path>: <message>".
RunConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
RunConfig parse_config(const std::filesystem::path& path);

/// Canonical JSON text (valid YAML); parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

/// FNV-1a 64 of the canonical serialization.
std::uint64_t config_hash(const RunConfig& cfg);
std::string config_hash_hex(const RunConfig& cfg);

/// Cross-block validation (ell, d, h); returns human-readable problems.
std::vector<std::string> validate_config(const RunConfig& cfg);

int effective_threads(const RunConfig& cfg);

SystemState make_initial(const Grid& grid, const std::vector<InitialComponent>& init, int ell);
TransportNoise make_noise(const Grid& grid, const NoiseSpec& spec);
DiffusionTensor make_diffusion(const DiffusionSpec& spec, int dim, int ell);
Problem build_problem(const RunConfig& cfg);
CoercivitySpec make_check_spec(const RunConfig& cfg, int ell);
EnsembleConfig make_ensemble_config(const RunConfig& cfg);

}  // namespace sprd
