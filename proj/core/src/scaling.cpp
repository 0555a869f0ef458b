#include "glyco/scaling.hpp"

#include <algorithm>
#include <limits>

#include "glyco/csv.hpp"
#include "glyco/error.hpp"

namespace glyco {

ScalingParams fit_scaling(std::span<const SampleWindow> training_windows) {
    if (training_windows.empty()) {
        throw InvalidInput("fit_scaling: no training windows");
    }
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& w : training_windows) {
        for (double x : w.features) {
            hi = std::max(hi, x);
            lo = std::min(lo, x);
        }
    }
    if (!(hi > lo)) {
        throw DegenerateData("fit_scaling: all training features equal " + csv::format_double(hi));
    }
    return {hi, lo};
}

SampleWindow apply_scaling(const ScalingParams& params, SampleWindow window) {
    for (double& x : window.features) {
        x = params.scale(x);
    }
    return window;
}

}  // namespace glyco
