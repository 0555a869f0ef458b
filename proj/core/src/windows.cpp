#include "glyco/windows.hpp"

#include "glyco/error.hpp"

namespace glyco {

std::vector<SampleWindow> make_windows(const GlucoseSeries& series, std::size_t d, std::size_t h,
                                       const WindowOptions& options) {
    if (d == 0 || h == 0) {
        throw InvalidInput("make_windows: d and h must be positive");
    }
    std::vector<SampleWindow> out;
    const std::size_t n = series.size();
    if (n < d + h) {
        return out;
    }
    const double max_gap = 2.0 * options.nominal_spacing;
    out.reserve(n - d - h + 1);
    // 0-based position of the last feature runs d-1 .. n-h-1.
    for (std::size_t last = d - 1; last + h < n; ++last) {
        const std::size_t first = last + 1 - d;
        if (options.drop_gapped) {
            bool gapped = false;
            for (std::size_t i = first + 1; i <= last + h; ++i) {
                if (series.timestamps[i] - series.timestamps[i - 1] > max_gap) {
                    gapped = true;
                    break;
                }
            }
            if (gapped) {
                continue;
            }
        }
        SampleWindow w;
        w.patient_id = series.patient_id;
        w.index = last + 1;
        w.features.assign(series.values.begin() + static_cast<std::ptrdiff_t>(first),
                          series.values.begin() + static_cast<std::ptrdiff_t>(last + 1));
        w.target = series.values[last + h];
        w.time = series.timestamps[last];
        w.target_time = series.timestamps[last + h];
        out.push_back(std::move(w));
    }
    return out;
}

std::vector<SampleWindow> make_windows(std::span<const GlucoseSeries> series, std::size_t d,
                                       std::size_t h, const WindowOptions& options) {
    std::vector<SampleWindow> out;
    for (const auto& s : series) {
        auto w = make_windows(s, d, h, options);
        out.insert(out.end(), std::make_move_iterator(w.begin()), std::make_move_iterator(w.end()));
    }
    return out;
}

}  // namespace glyco
