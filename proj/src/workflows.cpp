#include "sprd/workflows.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "sprd/gronwall.hpp"
#include "sprd/plotdata.hpp"
#include "sprd/snapshot_io.hpp"

namespace sprd {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json meta(const RunConfig& cfg) {
  return {{"tool", "sprd"}, {"version", SPRD_VERSION}, {"seed", cfg.seed},
          {"config_hash", config_hash_hex(cfg)}};
}

fs::path prepare(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

void write_json(const fs::path& path, const json& j, WorkflowResult& res) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  res.files.push_back(path);
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json summary_json(const Summary& s) {
  return {{"mean", finite_or_null(s.mean)},
          {"variance", finite_or_null(s.variance)},
          {"stderr", finite_or_null(s.stderr_mean)}};
}

/// 20 geometric levels spanning the finite positive values.
std::vector<double> default_gamma_grid(const std::vector<double>& values) {
  double lo = INFINITY, hi = 0.0;
  for (double v : values)
    if (std::isfinite(v) && v > 0.0) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (!std::isfinite(lo)) return {1.0};
  lo *= 0.5;
  hi *= 2.0;
  std::vector<double> grid(20);
  for (int k = 0; k < 20; ++k) grid[k] = lo * std::pow(hi / lo, k / 19.0);
  return grid;
}

CoercivityReport run_check(const RunConfig& cfg) {
  const Problem p = build_problem(cfg);
  const CoercivitySpec spec = make_check_spec(cfg, p.model.ell());
  const std::string& c = cfg.check.condition;
  if (c == "scalar_pointwise") return check_scalar_pointwise(p.model, p.noise, p.a, spec);
  if (c == "scalar_smooth") return check_scalar_smooth(p.model, p.noise, p.a, spec);
  if (c == "strong_dissipativity") return check_strong_dissipativity(p.model, spec);
  if (c == "system") return check_system(p.model, p.noise, p.a, spec);
  if (c == "growth_envelope")
    return check_growth_envelope(p.model, parse_envelope(cfg.check.envelope), p.noise, p.a, spec);
  fail(ErrorCode::InvalidArgument,
       "unknown condition '" + c +
           "' (scalar_pointwise, scalar_smooth, strong_dissipativity, system, growth_envelope)");
}

Trajectory run_path(const RunConfig& cfg, const Problem& p) {
  const BrownianDriver driver(p.increments_needed(), cfg.seed, 0);
  return simulate(p.u0, p.model, p.noise, p.a, driver, cfg.solver);
}

/// Ensemble with snapshots switched off (they are only needed by run).
EnsembleStats ensemble(const RunConfig& cfg, const Problem& p) {
  EnsembleConfig e = make_ensemble_config(cfg);
  e.solver.snapshot_every = 0;
  return run_ensemble(p, e);
}

std::vector<TailRow> tails(const RunConfig& cfg, const EnsembleStats& stats) {
  const TailFunctional f = parse_tail_functional(cfg.ensemble.tail_functional);
  std::vector<double> grid = cfg.ensemble.gamma;
  if (grid.empty()) grid = default_gamma_grid(functional_values(stats, f));
  return tail_probability(stats, f, grid);
}

/// Mean over surviving paths of each record (all paths share record times).
std::vector<EnergyRecord> mean_records(const EnsembleStats& stats) {
  std::vector<EnergyRecord> out;
  std::size_t used = 0;
  for (const auto& path : stats.paths) {
    if (path.blown_up || path.records.empty()) continue;
    if (out.empty()) {
      out = path.records;
      used = 1;
      continue;
    }
    if (path.records.size() != out.size()) continue;
    for (std::size_t r = 0; r < out.size(); ++r)
      for (std::size_t i = 0; i < out[r].lzeta_per_component.size(); ++i) {
        out[r].lzeta_per_component[i] += path.records[r].lzeta_per_component[i];
        out[r].dissipation_cum[i] += path.records[r].dissipation_cum[i];
        out[r].dissipation_rate[i] += path.records[r].dissipation_rate[i];
        out[r].mass[i] += path.records[r].mass[i];
        out[r].min_per_component[i] = std::min(out[r].min_per_component[i],
                                               path.records[r].min_per_component[i]);
      }
    ++used;
  }
  for (auto& r : out)
    for (std::size_t i = 0; i < r.lzeta_per_component.size(); ++i) {
      r.lzeta_per_component[i] /= used;
      r.dissipation_cum[i] /= used;
      r.dissipation_rate[i] /= used;
      r.mass[i] /= used;
    }
  return out;
}

bool dependence_verdict(const std::vector<DependenceRow>& rows, std::string& note) {
  std::vector<const DependenceRow*> nonzero;
  for (const auto& r : rows) {
    if (r.blowups > 0) {
      note = "blow-up in a paired run";
      return false;
    }
    if (r.delta == 0.0) {
      if (r.distance != 0.0) {
        note = "nonzero distance at delta = 0";
        return false;
      }
    } else {
      nonzero.push_back(&r);
    }
  }
  std::sort(nonzero.begin(), nonzero.end(),
            [](auto* a, auto* b) { return std::abs(a->delta) > std::abs(b->delta); });
  if (nonzero.size() >= 2 && !(nonzero.back()->distance < nonzero.front()->distance)) {
    note = "distance does not shrink with delta";
    return false;
  }
  note = "distance shrinks with delta";
  return true;
}

}  // namespace

std::string metadata_header(const RunConfig& cfg) {
  return std::string("# sprd ") + SPRD_VERSION + "\n# seed: " + std::to_string(cfg.seed) +
         "\n# config_hash: " + config_hash_hex(cfg) + "\n";
}

WorkflowResult check_workflow(const RunConfig& cfg, const fs::path& out_dir) {
  const CoercivityReport rep = run_check(cfg);
  WorkflowResult res;
  res.passed = rep.pass;
  json j = json::parse(report_to_json(rep));
  j["meta"] = meta(cfg);
  j["zeta"] = cfg.check.zeta;
  j["box_halfwidth"] = cfg.check.box_halfwidth;
  j["samples"] = cfg.check.samples;
  write_json(prepare(out_dir) / "check.json", j, res);
  res.json = j.dump(2);
  return res;
}

WorkflowResult run_workflow(const RunConfig& cfg, const fs::path& out_dir) {
  const Problem p = build_problem(cfg);
  const Trajectory traj = run_path(cfg, p);
  const fs::path dir = prepare(out_dir);
  const std::string header = metadata_header(cfg);
  WorkflowResult res;
  write_diagnostics_csv(dir / "diagnostics.csv", traj.diagnostics, header);
  res.files.push_back(dir / "diagnostics.csv");
  if (!traj.snapshots.empty()) {
    const fs::path snaps = prepare(dir / "snapshots");
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s)
      write_state_snapshots(snaps, s, traj.snapshots[s]);
  }
  const PositivityReport pos = positivity_report(traj);
  json j = {{"meta", meta(cfg)},
            {"model", p.model.name()},
            {"steps", traj.steps},
            {"records", traj.diagnostics.size()},
            {"snapshots", traj.snapshots.size()},
            {"blown_up", traj.blown_up},
            {"blowup_time", traj.blowup_time ? json(*traj.blowup_time) : json(nullptr)},
            {"final_time", traj.final_state.time},
            {"min_value", pos.min_value},
            {"violation_fraction", pos.violation_fraction}};
  if (!traj.diagnostics.empty())
    j["energy_bound"] = finite_or_null(energy_bound_fit(traj.diagnostics, traj.diagnostics.front()));
  write_json(dir / "summary.json", j, res);
  res.json = j.dump(2);
  return res;
}

WorkflowResult ensemble_workflow(const RunConfig& cfg, const fs::path& out_dir) {
  const Problem p = build_problem(cfg);
  const EnsembleStats stats = ensemble(cfg, p);
  const fs::path dir = prepare(out_dir);
  const std::string header = metadata_header(cfg);
  WorkflowResult res;
  {
    std::ofstream out(dir / "stats.csv");
    if (!out) fail(ErrorCode::Io, "cannot write " + (dir / "stats.csv").string());
    out << header << "seed,blown_up,blowup_time,sup_lzeta,dissipation,terminal_lzeta,N0";
    const bool bru = !stats.paths.empty() && stats.paths.front().brusselator.has_value();
    if (bru) out << ",E11,E12,E21,E22";
    out << '\n';
    out.precision(17);
    for (const auto& path : stats.paths) {
      out << path.seed << ',' << path.blown_up << ',' << path.blowup_time.value_or(NAN) << ','
          << path.sup_lzeta << ',' << path.total_dissipation << ',' << path.terminal_lzeta << ','
          << path.N0;
      if (bru && path.brusselator) {
        const auto& e = *path.brusselator;
        out << ',' << e.E11 << ',' << e.E12 << ',' << e.E21 << ',' << e.E22;
      } else if (bru) {
        out << ",nan,nan,nan,nan";
      }
      out << '\n';
    }
    res.files.push_back(dir / "stats.csv");
  }
  const std::vector<TailRow> rows = tails(cfg, stats);
  write_tail_table(dir / "tails.csv", rows, header);
  res.files.push_back(dir / "tails.csv");
  write_energy_curve(dir / "energy_curve.csv", mean_records(stats), header);
  res.files.push_back(dir / "energy_curve.csv");

  const EnergyCertificate cert = energy_bound_certificate(stats);
  res.passed = cert.pass;
  json j = {{"meta", meta(cfg)},
            {"paths", stats.paths.size()},
            {"blowups", stats.blowup_count},
            {"zeta", stats.zeta},
            {"zeta0", stats.zeta0},
            {"sup_lzeta", summary_json(stats.sup_lzeta)},
            {"dissipation", summary_json(stats.total_dissipation)},
            {"terminal_lzeta", summary_json(stats.terminal_lzeta)},
            {"N0", summary_json(stats.N0)},
            {"tail_functional", cfg.ensemble.tail_functional},
            {"certificate",
             {{"N0_hat", finite_or_null(cert.N0_hat)},
              {"N0_half", finite_or_null(cert.N0_half)},
              {"pass", cert.pass},
              {"note", cert.note}}}};
  write_json(dir / "summary.json", j, res);
  res.json = j.dump(2);
  return res;
}

WorkflowResult depcheck_workflow(const RunConfig& cfg, const fs::path& out_dir) {
  const Problem p = build_problem(cfg);
  EnsembleConfig e = make_ensemble_config(cfg);
  e.solver.snapshot_every = 0;
  const auto rows = continuous_dependence(p, e, cfg.ensemble.deltas, cfg.ensemble.q);
  const fs::path dir = prepare(out_dir);
  WorkflowResult res;
  write_dependence_table(dir / "dependence.csv", rows, metadata_header(cfg));
  res.files.push_back(dir / "dependence.csv");
  std::string note;
  res.passed = dependence_verdict(rows, note);
  json table = json::array();
  for (const auto& r : rows)
    table.push_back({{"delta", r.delta},
                     {"distance", finite_or_null(r.distance)},
                     {"stderr", finite_or_null(r.stderr_distance)},
                     {"blowups", r.blowups}});
  json j = {{"meta", meta(cfg)}, {"rows", table}, {"pass", res.passed}, {"note", note}};
  write_json(dir / "dependence.json", j, res);
  res.json = j.dump(2);
  return res;
}

WorkflowResult gronwall_workflow(const RunConfig& cfg, const fs::path& out_dir) {
  const auto& g = cfg.gronwall;
  const GronwallMatrixResult m = run_gronwall_matrix(g.n_paths, g.dt, g.T, cfg.seed, g.slack,
                                                     g.p, effective_threads(cfg));
  const fs::path dir = prepare(out_dir);
  const std::string header = metadata_header(cfg);
  WorkflowResult res;
  {
    std::ofstream out(dir / "gronwall.csv");
    if (!out) fail(ErrorCode::Io, "cannot write gronwall.csv");
    out.precision(10);
    out << header << "config,gamma,lhs,lhs_upper,rhs,rhs_lower,pass\n";
    for (const auto& r : m.rows)
      out << r.label << ',' << r.gamma << ',' << r.tail.lhs << ',' << r.tail.lhs_upper << ','
          << r.tail.rhs << ',' << r.tail.rhs_lower << ',' << (r.tail.pass ? "pass" : "fail")
          << '\n';
    res.files.push_back(dir / "gronwall.csv");
  }
  bool lp_ok = true;
  {
    std::ofstream out(dir / "gronwall_lp.csv");
    if (!out) fail(ErrorCode::Io, "cannot write gronwall_lp.csv");
    out.precision(10);
    out << header
        << "config,ratio_h0.1,ratio_h1,ratio_h10,stderr_h0.1,stderr_h1,stderr_h10,invariant\n";
    for (std::size_t c = 0; c < m.labels.size(); ++c) {
      out << m.labels[c];
      for (double v : m.lp_ratios[c]) out << ',' << v;
      for (double v : m.lp_stderr[c]) out << ',' << v;
      out << ',' << (m.lp_invariant[c] ? "yes" : "no") << '\n';
      lp_ok = lp_ok && m.lp_invariant[c];
    }
    res.files.push_back(dir / "gronwall_lp.csv");
  }
  std::size_t failed = 0;
  for (const auto& r : m.rows) failed += r.tail.pass ? 0 : 1;
  res.passed = m.all_pass;
  json j = {{"meta", meta(cfg)},       {"rows", m.rows.size()}, {"failed_rows", failed},
            {"lp_invariant", lp_ok}, {"pass", m.all_pass}};
  res.json = j.dump(2);
  return res;
}

WorkflowResult plotdata_workflow(const RunConfig& cfg, const std::string& kind,
                                 const fs::path& out_dir) {
  if (kind != "energy" && kind != "raster" && kind != "tail" && kind != "dependence")
    fail(ErrorCode::InvalidArgument,
         "unknown plot kind '" + kind + "' (energy, tail, dependence, raster)");
  const fs::path dir = prepare(out_dir);
  const std::string header = metadata_header(cfg);
  WorkflowResult res;
  fs::path file;
  if (kind == "energy") {
    const Problem p = build_problem(cfg);
    const Trajectory traj = run_path(cfg, p);
    file = dir / "energy_curve.csv";
    write_energy_curve(file, traj.diagnostics, header);
  } else if (kind == "raster") {
    require(cfg.grid.dim == 1, "raster plot data needs grid.dim = 1");
    RunConfig c = cfg;
    if (c.solver.snapshot_every == 0) c.solver.snapshot_every = 1;
    const Problem p = build_problem(c);
    const Trajectory traj = run_path(c, p);
    file = dir / "raster.csv";
    write_raster_1d(file, traj.snapshots, 0, header);
  } else if (kind == "tail") {
    const Problem p = build_problem(cfg);
    file = dir / "tail_table.csv";
    write_tail_table(file, tails(cfg, ensemble(cfg, p)), header);
  } else {
    const Problem p = build_problem(cfg);
    EnsembleConfig e = make_ensemble_config(cfg);
    e.solver.snapshot_every = 0;
    file = dir / "dependence_table.csv";
    write_dependence_table(file, continuous_dependence(p, e, cfg.ensemble.deltas, cfg.ensemble.q),
                           header);
  }
  res.files.push_back(file);
  json j = {{"meta", meta(cfg)}, {"kind", kind}, {"file", file.string()},
            {"rows", csv_data_rows(file)}};
  res.json = j.dump(2);
  return res;
}

}  // namespace sprd
