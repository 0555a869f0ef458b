#include "glyco/model.hpp"

#include "glyco/error.hpp"

namespace glyco {

namespace {

std::array<GlycemicRange, 3> resolve_fallbacks(const std::array<SampleSet, 3>& samples) {
    using R = GlycemicRange;
    const auto has = [&](R r) { return !samples[range_index(r)].empty(); };
    const R eu_fallback =
        samples[range_index(R::Hyper)].size() > samples[range_index(R::Hypo)].size() ? R::Hyper : R::Hypo;
    const R eu = has(R::Eu) ? R::Eu : eu_fallback;
    std::array<R, 3> out{};
    out[range_index(R::Hypo)] = has(R::Hypo) ? R::Hypo : (has(eu) ? eu : R::Hyper);
    out[range_index(R::Eu)] = eu;
    out[range_index(R::Hyper)] = has(R::Hyper) ? R::Hyper : (has(eu) ? eu : R::Hypo);
    return out;
}

}  // namespace

RangedModel::RangedModel(ScalingParams scaling, std::array<SampleSet, 3> samples,
                         std::array<KernelParams, 3> params, std::size_t excluded_targets)
    : scaling_(scaling), samples_(std::move(samples)), params_(params), excluded_(excluded_targets) {
    if (training_size() == 0) {
        throw DataError("train: no training window falls in any glycemic range");
    }
    effective_ = resolve_fallbacks(samples_);
    for (const auto r : kAllRanges) {
        const auto i = range_index(r);
        if (samples_[i].empty()) {
            warnings_.push_back("range " + std::string(range_name(r)) +
                                " has no training windows; predictions fall back to " +
                                std::string(range_name(effective_[i])));
            continue;
        }
        estimators_[i].emplace(samples_[i], params_[i]);
    }
}

std::size_t RangedModel::training_size() const {
    return samples_[0].size() + samples_[1].size() + samples_[2].size();
}

double RangedModel::estimate_scaled(GlycemicRange routed, std::span<const double> scaled) const {
    return (*estimators_[range_index(effective_range(routed))])(scaled);
}

RangedModel RangedModel::with_params(const std::array<KernelParams, 3>& params) const {
    return RangedModel(scaling_, samples_, params, excluded_);
}

RangedModel train(const ExperimentConfig& config, std::span<const SampleWindow> training_windows) {
    if (training_windows.empty()) {
        throw DataError("train: no training windows");
    }
    const auto sets = stratify_training(training_windows);
    const auto scaling = fit_scaling(training_windows);
    std::array<SampleSet, 3> samples;
    std::array<KernelParams, 3> params;
    std::vector<double> scaled(config.d);
    for (const auto r : kAllRanges) {
        const auto i = range_index(r);
        samples[i] = SampleSet(config.d);
        for (const auto& w : sets[r]) {
            for (std::size_t k = 0; k < w.features.size(); ++k) {
                scaled[k] = scaling.scale(w.features[k]);
            }
            samples[i].add(std::span<const double>(scaled.data(), w.features.size()), w.target);
        }
        params[i] = config.kernel_params(r);
    }
    return RangedModel(scaling, std::move(samples), params, sets.excluded);
}

Predictions predict(const RangedModel& model, std::span<const SampleWindow> test_windows) {
    Predictions out;
    out.values.reserve(test_windows.size());
    out.routed.reserve(test_windows.size());
    std::vector<double> scaled;
    for (const auto& w : test_windows) {
        const auto routed = classify_glucose(w.last_feature());
        scaled.resize(w.features.size());
        for (std::size_t k = 0; k < w.features.size(); ++k) {
            scaled[k] = model.scaling().scale(w.features[k]);
        }
        out.values.push_back(model.estimate_scaled(routed, scaled));
        out.routed.push_back(routed);
        if (model.effective_range(routed) != routed) {
            ++out.fallbacks;
        }
    }
    return out;
}

}  // namespace glyco
