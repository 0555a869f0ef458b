#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "glyco/kernel.hpp"

namespace glyco {

/// One training observation: a point in R^d and its (noisy) value.
struct LabeledSample {
    std::vector<double> point;
    double value = 0.0;
};

/// Contiguous storage for samples of a fixed dimension. Points are stored
/// row-major so that the estimator can stream over them.
class SampleSet {
public:
    SampleSet() = default;
    explicit SampleSet(std::size_t dim) : dim_(dim) {}
    explicit SampleSet(std::span<const LabeledSample> samples);

    /// Appends a sample; throws InvalidInput on dimension mismatch or non-finite data.
    void add(std::span<const double> point, double value);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    std::span<const double> point(std::size_t i) const {
        return {points_.data() + i * dim_, dim_};
    }
    double value(std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    std::size_t dim_ = 0;
    std::vector<double> points_;
    std::vector<double> values_;
};

/// Localized kernel estimator
///
///   F(x) = n^{q(1-alpha)} / M * sum_j value_j * Phi_{n,q}(n^{1-alpha} |x - y_j|_2)
///
/// over M samples y_j in R^d. The kernel table is built once at construction.
class Estimator {
public:
    Estimator(SampleSet samples, const KernelParams& params);

    double operator()(std::span<const double> x) const;

    const SampleSet& samples() const noexcept { return samples_; }
    const KernelTable& table() const noexcept { return table_; }

private:
    SampleSet samples_;
    KernelTable table_;
    double arg_scale_;
    double out_scale_;
};

/// One-shot form of Estimator. Throws InvalidInput for an empty sample list,
/// dimension mismatch, q > d, or non-finite coordinates.
double estimate(std::span<const LabeledSample> samples, std::span<const double> x,
                const KernelParams& params);

}  // namespace glyco
