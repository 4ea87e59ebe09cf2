#pragma once

#include <filesystem>

#include "sprd/torus_field.hpp"

namespace sprd {

struct SnapshotMeta {
  int dim = 1;
  int n = 4;
  int ell = 1;
  double time = 0.0;
  int component = 0;
};

/// Writes `<stem>.bin` (little-endian float64, row-major) and `<stem>.json`
/// ({dim, n, ell, time, component}).
void write_snapshot(const std::filesystem::path& stem, const Field& field,
                    const SnapshotMeta& meta);

/// Reads a snapshot written by write_snapshot; the sidecar determines the grid.
Field read_snapshot(const std::filesystem::path& stem, SnapshotMeta* meta = nullptr);

/// Writes one snapshot per component, stems `<dir>/snap_<index>_c<i>`.
void write_state_snapshots(const std::filesystem::path& dir, std::size_t index,
                           const SystemState& state);

}  // namespace sprd
