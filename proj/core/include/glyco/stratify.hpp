#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "glyco/windows.hpp"

namespace glyco {

enum class GlycemicRange { Hypo = 0, Eu = 1, Hyper = 2 };

inline constexpr std::array<GlycemicRange, 3> kAllRanges{GlycemicRange::Hypo, GlycemicRange::Eu,
                                                        GlycemicRange::Hyper};

inline constexpr double kHypoUpper = 70.0;
inline constexpr double kEuUpper = 180.0;
inline constexpr double kHyperUpper = 450.0;

/// hypo: <= 70, eu: (70, 180], hyper: > 180 mg/dL.
constexpr GlycemicRange classify_glucose(double mgdl) noexcept {
    if (mgdl <= kHypoUpper) {
        return GlycemicRange::Hypo;
    }
    return mgdl <= kEuUpper ? GlycemicRange::Eu : GlycemicRange::Hyper;
}

constexpr std::size_t range_index(GlycemicRange r) noexcept { return static_cast<std::size_t>(r); }

std::string_view range_name(GlycemicRange r) noexcept;

/// Training windows split by target value. Targets above 450 mg/dL are not
/// assigned to any range; they are only counted.
struct RangedTrainingSets {
    std::array<std::vector<SampleWindow>, 3> sets;
    std::size_t excluded = 0;

    std::vector<SampleWindow>& operator[](GlycemicRange r) { return sets[range_index(r)]; }
    const std::vector<SampleWindow>& operator[](GlycemicRange r) const {
        return sets[range_index(r)];
    }
    std::size_t assigned() const { return sets[0].size() + sets[1].size() + sets[2].size(); }
};

RangedTrainingSets stratify_training(std::span<const SampleWindow> windows);

/// Test windows routed by their last feature (the reading at t_j). Values
/// above 450 mg/dL go to the hyper set.
using RangedTestSets = std::array<std::vector<SampleWindow>, 3>;

RangedTestSets stratify_test(std::span<const SampleWindow> windows);

}  // namespace glyco
