#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "glyco/experiment.hpp"

namespace glyco {

struct ReportOptions {
    /// Label used in the bar-chart data file.
    std::string method = "hermite-kernel";
    /// Also write per-trial wall-clock timings (timing.json). Timings differ
    /// between runs, so they are kept out of the other files.
    bool include_timing = false;
};

/// Writes into `dir` (created if needed):
///   grid_h<h>.csv     averaged grid of each result
///   grid_table.csv    one row per horizon, 3 ranges x Accurate/Benign/Erroneous
///   grid_table.txt    the same table laid out for reading
///   bars.csv          (horizon, range, method, category, percentage) rows for plotting
///   trial_grids.csv   per-trial percentages, the data behind box plots
///   trials.json       per-trial split, counts, grid and warnings
/// Output depends only on the results, so re-emission produces the same bytes.
/// Throws DataError naming the path on I/O failure.
void emit_report(std::span<const ExperimentResult> results, const std::filesystem::path& dir,
                 const ReportOptions& options = {});

/// Ranked sweep table: rank, q, n per range and the nine averaged percentages.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

/// Writes cross_grid.csv and cross.json into `dir`.
void emit_cross_report(const CrossResult& result, const ExperimentConfig& config,
                       const std::filesystem::path& dir);

}  // namespace glyco
