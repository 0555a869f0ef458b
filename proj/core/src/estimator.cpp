#include "glyco/estimator.hpp"

#include <cmath>
#include <string>

#include "glyco/error.hpp"

namespace glyco {

SampleSet::SampleSet(std::span<const LabeledSample> samples) {
    if (!samples.empty()) {
        dim_ = samples.front().point.size();
    }
    points_.reserve(samples.size() * dim_);
    values_.reserve(samples.size());
    for (const auto& s : samples) {
        add(s.point, s.value);
    }
}

void SampleSet::add(std::span<const double> point, double value) {
    if (empty() && dim_ == 0) {
        dim_ = point.size();
    }
    if (point.size() != dim_ || dim_ == 0) {
        throw InvalidInput("sample dimension " + std::to_string(point.size()) +
                           " does not match " + std::to_string(dim_));
    }
    for (double v : point) {
        if (!std::isfinite(v)) {
            throw InvalidInput("sample point has a non-finite coordinate");
        }
    }
    if (!std::isfinite(value)) {
        throw InvalidInput("sample value is not finite");
    }
    points_.insert(points_.end(), point.begin(), point.end());
    values_.push_back(value);
}

Estimator::Estimator(SampleSet samples, const KernelParams& params)
    : samples_(std::move(samples)), table_(params) {
    if (samples_.empty()) {
        throw InvalidInput("estimate: sample set is empty");
    }
    if (static_cast<std::size_t>(params.q) > samples_.dim()) {
        throw InvalidInput("estimate: manifold dimension q exceeds ambient dimension d");
    }
    const double n = params.n;
    arg_scale_ = std::pow(n, 1.0 - params.alpha);
    out_scale_ = std::pow(n, params.q * (1.0 - params.alpha)) / static_cast<double>(samples_.size());
}

double Estimator::operator()(std::span<const double> x) const {
    const std::size_t dim = samples_.dim();
    if (x.size() != dim) {
        throw InvalidInput("estimate: query dimension " + std::to_string(x.size()) +
                           " does not match sample dimension " + std::to_string(dim));
    }
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw InvalidInput("estimate: query point has a non-finite coordinate");
        }
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < samples_.size(); ++j) {
        const auto y = samples_.point(j);
        double dist2 = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            const double diff = x[k] - y[k];
            dist2 += diff * diff;
        }
        sum += samples_.value(j) * table_(arg_scale_ * std::sqrt(dist2));
    }
    return out_scale_ * sum;
}

double estimate(std::span<const LabeledSample> samples, std::span<const double> x,
                const KernelParams& params) {
    if (samples.empty()) {
        throw InvalidInput("estimate: sample set is empty");
    }
    return Estimator(SampleSet(samples), params)(x);
}

}  // namespace glyco
