#pragma once

// End-to-end workflows behind the command line: each reads a RunConfig,
// writes its artifacts under `out_dir` (created if needed) and returns a
// JSON summary. Every artifact starts with the metadata header.

#include <filesystem>
#include <string>
#include <vector>

#include "sprd/config.hpp"

namespace sprd {

struct WorkflowResult {
  /// Scientific verdict; false maps to exit status 1.
  bool passed = true;
  std::string json;
  std::vector<std::filesystem::path> files;
};

/// "# sprd <version>", "# seed: <seed>", "# config_hash: <hex>" lines.
std::string metadata_header(const RunConfig& cfg);

/// Coercivity certificate for cfg.check; writes check.json.
WorkflowResult check_workflow(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// One path (seed, stream 0); writes diagnostics.csv, summary.json and, with
/// solver.snapshot_every > 0, snapshots/. Blow-up is reported, not a verdict.
WorkflowResult run_workflow(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Path ensemble: stats.csv (per path), tails.csv, energy_curve.csv and
/// summary.json. Verdict: the energy-bound certificate.
WorkflowResult ensemble_workflow(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Paired runs over ensemble.deltas; writes dependence.csv. Verdict: zero
/// distance at delta = 0 and distances shrinking with delta.
WorkflowResult depcheck_workflow(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Gronwall test matrix; writes gronwall.csv and gronwall_lp.csv.
WorkflowResult gronwall_workflow(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// kind: "energy", "tail", "dependence" or "raster".
WorkflowResult plotdata_workflow(const RunConfig& cfg, const std::string& kind,
                                 const std::filesystem::path& out_dir);

}  // namespace sprd
