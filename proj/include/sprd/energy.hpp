#pragma once

// Energy functionals along trajectories: L^zeta energies with cumulative
// dissipation integrals, and the four Brusselator functionals E11..E22.

#include <filesystem>
#include <string>
#include <vector>

#include "sprd/torus_field.hpp"

namespace sprd {

struct EnergyRecord {
  double time = 0.0;
  /// ||u_i(t)||_{L^zeta}^zeta.
  std::vector<double> lzeta_per_component;
  /// Current value of int |u_i|^{zeta-2} |grad u_i|^2.
  std::vector<double> dissipation_rate;
  /// Trapezoid accumulation of dissipation_rate from t = 0.
  std::vector<double> dissipation_cum;
  std::vector<double> mass;
  std::vector<double> min_per_component;
};

/// Instantaneous norms; dissipation_cum adds the trapezoid increment over
/// `dt` (time since `prev`) to prev's value. Requires zeta >= 2.
EnergyRecord record_energies(const SystemState& state, double zeta,
                             const EnergyRecord* prev = nullptr, double dt = 0.0);

struct BrusselatorEnergies {
  double E11 = 0.0;  // sup ||u1||_6^6 + int int |u1|^4 |grad u1|^2
  double E12 = 0.0;  // int int |grad u1|^2 + int int u1^2 u2^2
  double E21 = 0.0;  // int int u2^2 + |grad u2|^2
  double E22 = 0.0;  // sup ||u2||_3^3 + int int |u2| |grad u2|^2
};

/// Sup over the given instants and trapezoid rule in time. Needs ell = 2.
BrusselatorEnergies brusselator_energies(const std::vector<SystemState>& states);

/// Smallest N0 with sup_t sum_i lzeta_i + sum_i dissipation_cum_i(end)
/// <= N0 (1 + sum_i lzeta_i(0)). Non-finite records give +infinity.
double energy_bound_fit(const std::vector<EnergyRecord>& records,
                        const EnergyRecord& initial);

/// CSV with columns t, lzeta_i, diss_i, mass_i, min_i (i = 1..ell), preceded
/// by `header` (comment lines) verbatim.
void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<EnergyRecord>& records,
                           const std::string& header = {});

}  // namespace sprd
