#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "glyco/series.hpp"

namespace glyco {

struct SynthOptions {
    /// Patient ids are `prefix` followed by a zero-padded 1-based index.
    std::string id_prefix = "P";
    double spacing_min = 5.0;
};

/// Deterministic CGM-like traces: a patient baseline, two slow sinusoids,
/// post-meal rises, recurring hypoglycemic dips and bounded uniform noise,
/// clipped to [40, 400] mg/dL. Every series of at least 100 readings visits
/// all three glycemic ranges.
std::vector<GlucoseSeries> synth_series(std::uint64_t seed, std::size_t n_patients,
                                        std::size_t length, const SynthOptions& options = {});

}  // namespace glyco
