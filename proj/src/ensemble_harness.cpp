#include "sprd/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sprd {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double total(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

double state_lzeta(const SystemState& s, double zeta) {
  double t = 0.0;
  for (const auto& u : s.components) t += lzeta_power(u, zeta);
  return t;
}

// Mean over paths of the L^zeta energy at every record index, and the
// estimator evaluated over records with time <= t_cut.
double n0_estimate(const std::vector<const PathResult*>& paths, double t_cut) {
  const auto& ref = paths.front()->records;
  const double n = static_cast<double>(paths.size());
  double sup_mean = 0.0, diss = 0.0;
  std::size_t last = 0;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    if (ref[k].time > t_cut * (1.0 + 1e-12)) break;
    double m = 0.0;
    for (const auto* p : paths) m += total(p->records[k].lzeta_per_component);
    sup_mean = std::max(sup_mean, m / n);
    last = k;
  }
  double init = 0.0;
  for (const auto* p : paths) {
    diss += total(p->records[last].dissipation_cum);
    init += total(p->records.front().lzeta_per_component);
  }
  return (sup_mean + diss / n) / (1.0 + init / n);
}

}  // namespace

std::size_t Problem::increments_needed() const {
  return std::max(noise.n_modes(), model.g_mode_count());
}

double q0_exponent(int dim, double h) { return std::max(dim * (h - 1.0) / 2.0, 2.0); }

EnsembleStats run_ensemble(const Problem& problem, const EnsembleConfig& cfg) {
  require(cfg.n_paths >= 1, "ensemble needs at least one path");
  problem.u0.validate();
  require(problem.u0.grid() == problem.grid(), "initial data and noise use different grids",
          ErrorCode::GridMismatch);
  if (cfg.brusselator)
    require(problem.model.ell() == 2, "Brusselator functionals need two components");
  EnsembleStats st;
  st.zeta = cfg.solver.zeta;
  st.zeta0 = cfg.zeta0 > 0.0 ? cfg.zeta0 : q0_exponent(problem.grid().dim, problem.model.growth_h());
  st.paths.resize(cfg.n_paths);

  SolverConfig solver = cfg.solver;
  if (cfg.brusselator) solver.snapshot_every = 1;
  const Stepper probe(problem.model, problem.noise, problem.a, solver);
  const std::size_t n_incr = probe.increments_needed();
  const double init0 = state_lzeta(problem.u0, st.zeta0);

  parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t j) {
    PathResult& r = st.paths[j];
    r.seed = cfg.base_seed + j;
    const BrownianDriver driver(n_incr, r.seed, 0);
    Trajectory tr = simulate(problem.u0, problem.model, problem.noise, problem.a, driver, solver);
    r.blown_up = tr.blown_up;
    r.blowup_time = tr.blowup_time;
    r.initial_lzeta0 = init0;
    const auto& recs = tr.diagnostics;
    r.initial_lzeta = total(recs.front().lzeta_per_component);
    for (const auto& rec : recs) r.sup_lzeta = std::max(r.sup_lzeta, total(rec.lzeta_per_component));
    r.terminal_lzeta = total(recs.back().lzeta_per_component);
    r.total_dissipation = total(recs.back().dissipation_cum);
    r.N0 = tr.blown_up ? kInf : energy_bound_fit(recs, recs.front());
    const PositivityReport pos = positivity_report(tr);
    r.min_value = pos.min_value;
    r.violation_fraction = pos.violation_fraction;
    if (cfg.brusselator && !tr.blown_up) r.brusselator = brusselator_energies(tr.snapshots);
    if (tr.blown_up) {
      r.sup_lzeta = kInf;
      r.total_dissipation = kInf;
      r.terminal_lzeta = kInf;
    }
    if (cfg.keep_records) r.records = std::move(tr.diagnostics);
    r.final_state = std::move(tr.final_state);
  });

  std::vector<double> sup, diss, term, n0;
  double init_sum = 0.0;
  for (const auto& r : st.paths) {
    init_sum += r.initial_lzeta0;
    if (r.blown_up) {
      ++st.blowup_count;
      continue;
    }
    sup.push_back(r.sup_lzeta);
    diss.push_back(r.total_dissipation);
    term.push_back(r.terminal_lzeta);
    n0.push_back(r.N0);
  }
  st.sup_lzeta = summarize(sup);
  st.total_dissipation = summarize(diss);
  st.terminal_lzeta = summarize(term);
  st.N0 = summarize(n0);
  st.mean_initial_lzeta0 = init_sum / static_cast<double>(st.paths.size());
  return st;
}

TailFunctional parse_tail_functional(const std::string& name) {
  if (name == "sup_lzeta") return TailFunctional::SupLzeta;
  if (name == "dissipation") return TailFunctional::Dissipation;
  if (name == "terminal_lzeta") return TailFunctional::TerminalLzeta;
  if (name == "E11") return TailFunctional::E11;
  if (name == "E12") return TailFunctional::E12;
  if (name == "E21") return TailFunctional::E21;
  if (name == "E22") return TailFunctional::E22;
  fail(ErrorCode::InvalidArgument, "unknown tail functional '" + name + "'");
}

std::string tail_functional_name(TailFunctional f) {
  switch (f) {
    case TailFunctional::SupLzeta: return "sup_lzeta";
    case TailFunctional::Dissipation: return "dissipation";
    case TailFunctional::TerminalLzeta: return "terminal_lzeta";
    case TailFunctional::E11: return "E11";
    case TailFunctional::E12: return "E12";
    case TailFunctional::E21: return "E21";
    case TailFunctional::E22: return "E22";
  }
  return "?";
}

std::vector<double> functional_values(const EnsembleStats& stats, TailFunctional f) {
  std::vector<double> out;
  for (const auto& r : stats.paths) {
    if (r.blown_up) {
      out.push_back(kInf);
      continue;
    }
    switch (f) {
      case TailFunctional::SupLzeta: out.push_back(r.sup_lzeta); break;
      case TailFunctional::Dissipation: out.push_back(r.total_dissipation); break;
      case TailFunctional::TerminalLzeta: out.push_back(r.terminal_lzeta); break;
      default: {
        require(r.brusselator.has_value(), "Brusselator functionals were not recorded");
        const auto& e = *r.brusselator;
        out.push_back(f == TailFunctional::E11   ? e.E11
                      : f == TailFunctional::E12 ? e.E12
                      : f == TailFunctional::E21 ? e.E21
                                                 : e.E22);
      }
    }
  }
  return out;
}

std::vector<TailRow> tail_probability(const EnsembleStats& stats, TailFunctional f,
                                      std::vector<double> gamma_grid) {
  require(!gamma_grid.empty(), "tail_probability: empty gamma grid");
  require(!stats.paths.empty(), "tail_probability: empty ensemble");
  std::sort(gamma_grid.begin(), gamma_grid.end());
  const std::vector<double> values = functional_values(stats, f);
  std::vector<TailRow> rows;
  for (double g : gamma_grid) {
    TailRow row;
    row.gamma = g;
    row.n = values.size();
    for (double v : values)
      if (v > g) ++row.exceed;
    row.p = wilson_interval(row.exceed, row.n);
    rows.push_back(row);
  }
  return rows;
}

EnergyCertificate energy_bound_certificate(const EnsembleStats& stats) {
  EnergyCertificate c;
  require(!stats.paths.empty(), "energy_bound_certificate: empty ensemble");
  if (stats.blowup_count > 0) {
    c.N0_hat = kInf;
    c.N0_half = kInf;
    c.note = std::to_string(stats.blowup_count) + " path(s) blew up";
    return c;
  }
  std::vector<const PathResult*> paths;
  for (const auto& p : stats.paths) {
    require(!p.records.empty(), "energy_bound_certificate needs per-path records");
    paths.push_back(&p);
  }
  const double T = paths.front()->records.back().time;
  const double t0 = paths.front()->records.front().time;
  c.N0_hat = n0_estimate(paths, T);
  c.N0_half = n0_estimate(paths, t0 + 0.5 * (T - t0));
  if (!std::isfinite(c.N0_hat) || !std::isfinite(c.N0_half)) {
    c.note = "non-finite estimate";
    return c;
  }
  const double big = std::max(c.N0_hat, c.N0_half);
  c.pass = big == 0.0 || std::abs(c.N0_hat - c.N0_half) <= 0.25 * std::min(c.N0_hat, c.N0_half);
  if (!c.pass) c.note = "estimate not stable under doubling T";
  return c;
}

std::vector<DependenceRow> continuous_dependence(const Problem& problem,
                                                 const EnsembleConfig& cfg,
                                                 const std::vector<double>& deltas, double q,
                                                 const std::vector<Field>* phi) {
  require(!deltas.empty(), "continuous_dependence: no deltas");
  problem.u0.validate();
  const Grid& grid = problem.grid();
  const std::size_t ell = problem.u0.ell();
  if (q <= 0.0) q = q0_exponent(grid.dim, problem.model.growth_h());
  std::vector<Field> pert;
  if (phi) {
    require(phi->size() == ell, "perturbation needs one field per component");
    pert = *phi;
  } else {
    pert.assign(ell, sample_field(grid, [](std::span<const double> x) {
                  return std::cos(2.0 * std::numbers::pi * x[0]);
                }));
  }
  const Stepper stepper(problem.model, problem.noise, problem.a, cfg.solver);
  const std::size_t n_steps =
      static_cast<std::size_t>(std::llround(cfg.solver.t_end / cfg.solver.dt));
  const std::size_t nd = deltas.size();
  // dist[path][delta]
  std::vector<std::vector<double>> dist(cfg.n_paths, std::vector<double>(nd, 0.0));
  std::vector<std::vector<char>> blew(cfg.n_paths, std::vector<char>(nd, 0));

  auto distance = [&](const SystemState& a, const SystemState& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < ell; ++i) s += lzeta_power(a.components[i] - b.components[i], q);
    return std::pow(s, 1.0 / q);
  };
  auto exceeded = [&](const SystemState& s) {
    for (const auto& u : s.components)
      if (!(u.max_abs() <= cfg.solver.blowup_threshold)) return true;
    return false;
  };

  parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t j) {
    const BrownianDriver driver(stepper.increments_needed(), cfg.base_seed + j, 0);
    SystemState base = problem.u0;
    std::vector<SystemState> runs(nd, problem.u0);
    for (std::size_t k = 0; k < nd; ++k) {
      for (std::size_t i = 0; i < ell; ++i) runs[k].components[i] += deltas[k] * pert[i];
      dist[j][k] = distance(base, runs[k]);
    }
    std::vector<double> incr(stepper.increments_needed());
    bool base_blown = false;
    for (std::size_t m = 0; m < n_steps; ++m) {
      stepper.increments(driver, m, incr);
      base = stepper.step(base, incr);
      if (exceeded(base)) {
        base_blown = true;
        break;
      }
      for (std::size_t k = 0; k < nd; ++k) {
        if (blew[j][k]) continue;
        runs[k] = stepper.step(runs[k], incr);
        if (exceeded(runs[k])) {
          blew[j][k] = 1;
          continue;
        }
        dist[j][k] = std::max(dist[j][k], distance(base, runs[k]));
      }
    }
    if (base_blown)
      for (std::size_t k = 0; k < nd; ++k) blew[j][k] = 1;
  });

  std::vector<DependenceRow> rows;
  for (std::size_t k = 0; k < nd; ++k) {
    DependenceRow row;
    row.delta = deltas[k];
    std::vector<double> vals;
    for (std::size_t j = 0; j < cfg.n_paths; ++j) {
      if (blew[j][k]) {
        ++row.blowups;
        continue;
      }
      vals.push_back(dist[j][k]);
    }
    const Summary s = summarize(vals);
    row.distance = row.blowups > 0 ? kInf : s.mean;
    row.stderr_distance = s.stderr_mean;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace sprd
