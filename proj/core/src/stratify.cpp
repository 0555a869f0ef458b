#include "glyco/stratify.hpp"

namespace glyco {

std::string_view range_name(GlycemicRange r) noexcept {
    switch (r) {
        case GlycemicRange::Hypo:
            return "hypo";
        case GlycemicRange::Eu:
            return "eu";
        case GlycemicRange::Hyper:
            return "hyper";
    }
    return "?";
}

RangedTrainingSets stratify_training(std::span<const SampleWindow> windows) {
    RangedTrainingSets out;
    for (const auto& w : windows) {
        if (w.target > kHyperUpper) {
            ++out.excluded;
            continue;
        }
        out[classify_glucose(w.target)].push_back(w);
    }
    return out;
}

RangedTestSets stratify_test(std::span<const SampleWindow> windows) {
    RangedTestSets out;
    for (const auto& w : windows) {
        out[range_index(classify_glucose(w.last_feature()))].push_back(w);
    }
    return out;
}

}  // namespace glyco
