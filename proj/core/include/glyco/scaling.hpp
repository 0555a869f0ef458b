#pragma once

#include <span>

#include "glyco/windows.hpp"

namespace glyco {

/// Affine map sending [min_val, max_val] onto [-1/2, 1/2].
struct ScalingParams {
    double max_val = 0.0;
    double min_val = 0.0;

    /// (2x - (M + m)) / (2(M - m)), written so that M, m and (M + m)/2 map
    /// to exactly 1/2, -1/2 and 0.
    double scale(double x) const {
        return ((x - min_val) - (max_val - x)) / (2.0 * (max_val - min_val));
    }
    double unscale(double z) const { return min_val + (z + 0.5) * (max_val - min_val); }
};

/// Extremes over every feature component of the training windows.
/// Throws InvalidInput for an empty list and DegenerateData if max == min.
ScalingParams fit_scaling(std::span<const SampleWindow> training_windows);

/// Scales features only; the target stays in mg/dL. Values outside
/// [min_val, max_val] map outside [-1/2, 1/2] and are kept as is.
SampleWindow apply_scaling(const ScalingParams& params, SampleWindow window);

}  // namespace glyco
