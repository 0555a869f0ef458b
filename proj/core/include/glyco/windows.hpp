#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "glyco/series.hpp"

namespace glyco {

/// A feature vector of d consecutive readings and the reading h steps after
/// the last one. `index` is the 1-based position j of the last feature.
struct SampleWindow {
    std::string patient_id;
    std::size_t index = 0;
    std::vector<double> features;
    double target = 0.0;
    double time = 0.0;         ///< t_j, time of the last feature
    double target_time = 0.0;  ///< t_{j+h}

    double last_feature() const { return features.back(); }
};

struct WindowOptions {
    /// Nominal sampling interval in minutes.
    double nominal_spacing = 5.0;
    /// Drop windows in which two consecutive readings between the first
    /// feature and the target are more than 2x the nominal interval apart.
    bool drop_gapped = true;
};

/// Builds windows for j = d .. N - h. Short series produce no windows.
/// Throws InvalidInput if d or h is zero.
std::vector<SampleWindow> make_windows(const GlucoseSeries& series, std::size_t d, std::size_t h,
                                       const WindowOptions& options = {});

/// Windows of every series, concatenated in input order.
std::vector<SampleWindow> make_windows(std::span<const GlucoseSeries> series, std::size_t d,
                                       std::size_t h, const WindowOptions& options = {});

}  // namespace glyco
