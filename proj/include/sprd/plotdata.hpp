#pragma once

// Long-format CSV tables for plotting. Every writer prepends `header`
// (comment lines starting with '#') verbatim.

#include <filesystem>
#include <string>
#include <vector>

#include "sprd/energy.hpp"
#include "sprd/ensemble.hpp"

namespace sprd {

/// One row per record: t, energy (sum_i lzeta_i), dissipation (sum_i
/// cumulative), total.
void write_energy_curve(const std::filesystem::path& path,
                        const std::vector<EnergyRecord>& records,
                        const std::string& header = {});

/// One row per gamma: gamma, exceed, n, p, ci_lo, ci_hi.
void write_tail_table(const std::filesystem::path& path, const std::vector<TailRow>& rows,
                      const std::string& header = {});

/// One row per delta: delta, distance, stderr, blowups.
void write_dependence_table(const std::filesystem::path& path,
                            const std::vector<DependenceRow>& rows,
                            const std::string& header = {});

/// 1d space-time raster of one component: rows (t, x, value), snapshot-major.
void write_raster_1d(const std::filesystem::path& path, const std::vector<SystemState>& states,
                     std::size_t component = 0, const std::string& header = {});

/// Number of data rows (non-comment lines after the column line) of a CSV.
std::size_t csv_data_rows(const std::filesystem::path& path);

}  // namespace sprd
