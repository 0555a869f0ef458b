#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "glyco/stratify.hpp"
#include "glyco/zones.hpp"

namespace glyco {

/// How the rate of change at position j is normalized.
///   Doubled: (v[j+1] - v[j-1]) / (2 (t[j+1] - t[j-1]))
///   Central: (v[j+1] - v[j-1]) / (t[j+1] - t[j-1])
enum class RateDenominator { Doubled, Central };

/// Rates at interior positions; endpoints have no rate. Throws InvalidInput
/// on length mismatch and DataError when t[j+1] == t[j-1].
std::vector<std::optional<double>> central_rates(std::span<const double> values,
                                                 std::span<const double> timestamps,
                                                 RateDenominator denominator = RateDenominator::Doubled);

struct EvalPoint {
    double predicted = 0.0;
    double reference = 0.0;
    std::optional<double> predicted_rate;
    std::optional<double> reference_rate;
};

/// Tallies for one reference glycemic range.
struct RangeTally {
    std::size_t accurate = 0;
    std::size_t benign = 0;
    std::size_t erroneous = 0;
    std::size_t excluded = 0;  ///< points without both rates
    /// Accurate / benign / erroneous percentages; absent when nothing was classified.
    std::optional<std::array<double, 3>> percent;

    std::size_t classified() const noexcept { return accurate + benign + erroneous; }
};

/// 3x3 PRED-EGA grid: reference range x {Accurate, Benign, Erroneous}.
struct PredEgaGrid {
    std::array<RangeTally, 3> ranges;

    RangeTally& operator[](GlycemicRange r) { return ranges[range_index(r)]; }
    const RangeTally& operator[](GlycemicRange r) const { return ranges[range_index(r)]; }
};

Category classify_point(const EvalPoint& p, const ZoneTables& tables);

/// Classifies every point that has both rates and tallies it under the
/// range of its reference value.
PredEgaGrid build_grid(std::span<const EvalPoint> points,
                       const ZoneTables& tables = ZoneTables::builtin());

enum class Averaging {
    TrialMean,  ///< each trial's percentages weigh equally; empty ranges are skipped
    Pooled,     ///< counts are summed over trials, then converted to percentages
};

/// Combines per-trial grids. Counts are always summed. Throws InvalidInput
/// for an empty list.
PredEgaGrid average_grids(std::span<const PredEgaGrid> grids,
                          Averaging averaging = Averaging::TrialMean);

/// CSV with header `range,accurate_pct,benign_pct,erroneous_pct,n_points,n_excluded`.
/// Percentages use two decimals; absent percentages are empty fields.
void write_grid_csv(std::ostream& out, const PredEgaGrid& grid);

}  // namespace glyco
