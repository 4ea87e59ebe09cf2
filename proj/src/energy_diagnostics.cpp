#include "sprd/energy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "sprd/error.hpp"

namespace sprd {

EnergyRecord record_energies(const SystemState& state, double zeta,
                             const EnergyRecord* prev, double dt) {
  require(zeta >= 2.0, "record_energies: zeta must be >= 2");
  state.validate();
  const std::size_t ell = state.ell();
  EnergyRecord r;
  r.time = state.time;
  for (const auto& u : state.components) {
    r.lzeta_per_component.push_back(lzeta_power(u, zeta));
    r.dissipation_rate.push_back(u.all_finite() ? dissipation_integral(u, zeta)
                                                : std::numeric_limits<double>::infinity());
    r.mass.push_back(mean(u));
    r.min_per_component.push_back(u.min());
  }
  r.dissipation_cum.assign(ell, 0.0);
  if (prev) {
    require(prev->dissipation_cum.size() == ell, "record_energies: component count changed");
    require(dt >= 0.0, "record_energies: dt must be >= 0");
    for (std::size_t i = 0; i < ell; ++i)
      r.dissipation_cum[i] =
          prev->dissipation_cum[i] + 0.5 * dt * (prev->dissipation_rate[i] + r.dissipation_rate[i]);
  }
  return r;
}

BrusselatorEnergies brusselator_energies(const std::vector<SystemState>& states) {
  BrusselatorEnergies e;
  if (states.empty()) return e;
  struct Rates {
    double l6, d6, d2_1, cross, l2_2, d2_2, l3, d3;
  };
  std::vector<Rates> rates;
  for (const auto& s : states) {
    require(s.ell() == 2, "brusselator_energies needs a two-component trajectory");
    const Field& u1 = s.components[0];
    const Field& u2 = s.components[1];
    const auto g1 = gradient(u1);
    const auto g2 = gradient(u2);
    double cross = 0.0;
    for (std::size_t p = 0; p < u1.size(); ++p) cross += u1[p] * u1[p] * u2[p] * u2[p];
    cross /= static_cast<double>(u1.size());
    rates.push_back({lzeta_power(u1, 6.0), dissipation_integral(u1, g1, 6.0),
                     dissipation_integral(u1, g1, 2.0), cross, lzeta_power(u2, 2.0),
                     dissipation_integral(u2, g2, 2.0), lzeta_power(u2, 3.0),
                     dissipation_integral(u2, g2, 3.0)});
  }
  double sup6 = 0.0, sup3 = 0.0;
  for (const auto& r : rates) {
    sup6 = std::max(sup6, r.l6);
    sup3 = std::max(sup3, r.l3);
  }
  double i_d6 = 0.0, i_d2_1 = 0.0, i_cross = 0.0, i_22 = 0.0, i_d3 = 0.0;
  for (std::size_t k = 1; k < rates.size(); ++k) {
    const double h = 0.5 * (states[k].time - states[k - 1].time);
    const auto& a = rates[k - 1];
    const auto& b = rates[k];
    i_d6 += h * (a.d6 + b.d6);
    i_d2_1 += h * (a.d2_1 + b.d2_1);
    i_cross += h * (a.cross + b.cross);
    i_22 += h * (a.l2_2 + a.d2_2 + b.l2_2 + b.d2_2);
    i_d3 += h * (a.d3 + b.d3);
  }
  e.E11 = sup6 + i_d6;
  e.E12 = i_d2_1 + i_cross;
  e.E21 = i_22;
  e.E22 = sup3 + i_d3;
  return e;
}

double energy_bound_fit(const std::vector<EnergyRecord>& records,
                        const EnergyRecord& initial) {
  require(!records.empty(), "energy_bound_fit: no records");
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto total = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  };
  double sup = 0.0;
  for (const auto& r : records) {
    const double s = total(r.lzeta_per_component);
    if (!std::isfinite(s)) return inf;
    sup = std::max(sup, s);
  }
  const double diss = total(records.back().dissipation_cum);
  if (!std::isfinite(diss)) return inf;
  return (sup + diss) / (1.0 + total(initial.lzeta_per_component));
}

void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<EnergyRecord>& records,
                           const std::string& header) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  out << header;
  const std::size_t ell = records.empty() ? 0 : records.front().lzeta_per_component.size();
  out << "t";
  for (const char* col : {"lzeta", "diss", "mass", "min"})
    for (std::size_t i = 0; i < ell; ++i) out << ',' << col << '_' << i + 1;
  out << '\n';
  out.precision(17);
  for (const auto& r : records) {
    out << r.time;
    for (const auto* v : {&r.lzeta_per_component, &r.dissipation_cum, &r.mass, &r.min_per_component})
      for (double x : *v) out << ',' << x;
    out << '\n';
  }
}

}  // namespace sprd
