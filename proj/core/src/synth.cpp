#include "glyco/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "glyco/error.hpp"
#include "glyco/rng.hpp"

namespace glyco {

namespace {

constexpr double kLow = 40.0;
constexpr double kHigh = 400.0;

double between(Engine& eng, double lo, double hi) { return lo + (hi - lo) * uniform01(eng); }

struct Event {
    double start;  // minutes
    double amplitude;
    double width;  // minutes
};

// Events recurring every [min_gap, max_gap] minutes, the first one inside [first_lo, first_hi].
std::vector<Event> schedule(Engine& eng, double horizon, double first_lo, double first_hi,
                            double min_gap, double max_gap, double amp_lo, double amp_hi,
                            double width_lo, double width_hi) {
    std::vector<Event> events;
    for (double t = between(eng, first_lo, first_hi); t < horizon;
         t += between(eng, min_gap, max_gap)) {
        events.push_back({t, between(eng, amp_lo, amp_hi), between(eng, width_lo, width_hi)});
    }
    return events;
}

// Meal response: s exp(1 - s) with s = dt / width peaks at 1 when dt == width.
double meal_shape(double dt, double width) {
    if (dt <= 0.0) {
        return 0.0;
    }
    const double s = dt / width;
    return s * std::exp(1.0 - s);
}

double dip_shape(double dt, double width) {
    const double s = dt / width;
    return std::exp(-0.5 * s * s);
}

}  // namespace

std::vector<GlucoseSeries> synth_series(std::uint64_t seed, std::size_t n_patients,
                                        std::size_t length, const SynthOptions& options) {
    if (n_patients == 0 || length == 0 || !(options.spacing_min > 0.0)) {
        throw InvalidInput("synth_series: patients, length and spacing must be positive");
    }
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double horizon = options.spacing_min * static_cast<double>(length);

    std::vector<GlucoseSeries> out;
    out.reserve(n_patients);
    for (std::size_t p = 0; p < n_patients; ++p) {
        Engine eng(mix_seed(seed, p));
        const double baseline = between(eng, 115.0, 150.0);
        const double slow_amp = between(eng, 20.0, 40.0);
        const double slow_period = between(eng, 480.0, 840.0);
        const double slow_phase = between(eng, 0.0, two_pi);
        const double fast_amp = between(eng, 8.0, 18.0);
        const double fast_period = between(eng, 120.0, 240.0);
        const double fast_phase = between(eng, 0.0, two_pi);
        auto meals = schedule(eng, horizon, 30.0, 150.0, 240.0, 360.0, 200.0, 290.0, 35.0, 60.0);
        auto dips = schedule(eng, horizon, 200.0, 320.0, 480.0, 720.0, 45.0, 62.0, 25.0, 45.0);

        auto drift = [&](double t) {
            return baseline + slow_amp * std::sin(two_pi * t / slow_period + slow_phase) +
                   fast_amp * std::sin(two_pi * t / fast_period + fast_phase);
        };
        auto with_meals = [&](double t) {
            double v = drift(t);
            for (const auto& m : meals) {
                v += m.amplitude * meal_shape(t - m.start, m.width);
            }
            return v;
        };
        // Amplitudes were drawn as target levels; turn them into offsets so
        // every meal peaks above 180 and every dip bottoms out below 70.
        for (auto& m : meals) {
            m.amplitude = std::max(0.0, m.amplitude - drift(m.start + m.width));
        }
        for (auto& d : dips) {
            d.amplitude = std::max(0.0, with_meals(d.start) - d.amplitude);
        }

        GlucoseSeries s;
        char id[32];
        std::snprintf(id, sizeof id, "%03zu", p + 1);
        s.patient_id = options.id_prefix + id;
        s.timestamps.reserve(length);
        s.values.reserve(length);
        for (std::size_t i = 0; i < length; ++i) {
            const double t = options.spacing_min * static_cast<double>(i);
            double v = with_meals(t);
            for (const auto& d : dips) {
                v -= d.amplitude * dip_shape(t - d.start, d.width);
            }
            v += between(eng, -4.0, 4.0);
            s.timestamps.push_back(t);
            s.values.push_back(std::clamp(v, kLow, kHigh));
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace glyco
