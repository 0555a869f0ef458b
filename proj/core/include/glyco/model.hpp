#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glyco/config.hpp"
#include "glyco/estimator.hpp"
#include "glyco/scaling.hpp"
#include "glyco/stratify.hpp"

namespace glyco {

/// Scaled per-range training data with one estimator per range.
///
/// A range whose training set is empty is disabled; windows routed to it
/// use the estimator of the nearest enabled range (hypo and hyper fall back
/// to eu; eu falls back to the larger of hypo and hyper).
class RangedModel {
public:
    RangedModel(ScalingParams scaling, std::array<SampleSet, 3> samples,
                std::array<KernelParams, 3> params, std::size_t excluded_targets = 0);

    const ScalingParams& scaling() const noexcept { return scaling_; }
    const SampleSet& samples(GlycemicRange r) const { return samples_[range_index(r)]; }
    const KernelParams& params(GlycemicRange r) const { return params_[range_index(r)]; }
    bool enabled(GlycemicRange r) const { return !samples(r).empty(); }
    /// Range whose estimator serves windows routed to `r`.
    GlycemicRange effective_range(GlycemicRange r) const { return effective_[range_index(r)]; }
    std::size_t excluded_targets() const noexcept { return excluded_; }
    std::size_t training_size() const;
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    /// Estimate for a feature vector already in scaled coordinates, using
    /// the estimator of `routed` (after fallback).
    double estimate_scaled(GlycemicRange routed, std::span<const double> scaled) const;

    /// Same model with other kernel parameters on the same training data.
    RangedModel with_params(const std::array<KernelParams, 3>& params) const;

private:
    ScalingParams scaling_;
    std::array<SampleSet, 3> samples_;
    std::array<KernelParams, 3> params_;
    std::array<GlycemicRange, 3> effective_{};
    std::array<std::optional<Estimator>, 3> estimators_;
    std::size_t excluded_ = 0;
    std::vector<std::string> warnings_;
};

/// Stratifies training windows by target, fits the scaling on their
/// features and stores scaled samples per range. Throws DataError when no
/// window falls in any range.
RangedModel train(const ExperimentConfig& config, std::span<const SampleWindow> training_windows);

struct Predictions {
    std::vector<double> values;             ///< mg/dL, aligned with the input windows
    std::vector<GlycemicRange> routed;      ///< range chosen from the last reading
    std::size_t fallbacks = 0;              ///< windows served by another range's estimator
};

/// Scales each raw test window with the model's constants, routes it by its
/// last (unscaled) reading and evaluates that range's estimator.
Predictions predict(const RangedModel& model, std::span<const SampleWindow> test_windows);

}  // namespace glyco
