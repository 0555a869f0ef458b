#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace glyco {

/// Degree parameter n, localization exponent alpha and manifold dimension q
/// of the localized Hermite kernel estimator.
struct KernelParams {
    int n = 1;
    double alpha = 1.0;
    int q = 1;

    /// Throws InvalidInput unless n >= 1, 0 < alpha <= 1 and q >= 1.
    void validate() const;

    friend bool operator==(const KernelParams&, const KernelParams&) = default;
};

/// Smooth cutoff: 1 on [0, 1/2], 0 on [1, inf), C-infinity and non-increasing
/// in between. Uses the partition-of-unity bump built from exp(-1/s).
/// Throws InvalidInput for t < 0 or NaN.
double cutoff(double t);

struct ProjectionWeight {
    std::size_t index;  ///< l, the weight multiplies psi_{2l}
    double weight;
};

/// Expansion of the projection kernel P_{m,q} on even Hermite functions:
/// P_{m,q}(x) = sum of weight * psi_{2 index}(x). For q = 1 this is a single
/// term at index m; for q >= 2 indices 0..m all appear.
std::vector<ProjectionWeight> projection_weights(std::size_t m, int q);

/// Summability kernel stored as coefficients on even Hermite functions,
///
///   Phi_{n,q}(x) = sum_{l=0}^{L} a_l psi_{2l}(x),   L = floor(n^2 / 2).
///
/// Immutable after construction, safe to share between threads.
class KernelTable {
public:
    explicit KernelTable(const KernelParams& params);

    const KernelParams& params() const noexcept { return params_; }
    const std::vector<double>& coefficients() const noexcept { return coeffs_; }

    /// L, the largest psi_{2l} index with a (possibly zero) coefficient.
    std::size_t max_index() const noexcept { return coeffs_.size() - 1; }

    /// Phi_{n,q}(x). Even in x; evaluated at |x| so that the result is
    /// bitwise symmetric. Hermite evaluation is direct, which is accurate for
    /// the moderate arguments produced by scaled data (|x| well below 30).
    double operator()(double x) const;

private:
    KernelParams params_;
    std::vector<double> coeffs_;
    // Recurrence factors sqrt(2/k) and sqrt((k-1)/k) for k = 2..2L.
    std::vector<double> rec_a_;
    std::vector<double> rec_b_;
};

KernelTable build_kernel_table(const KernelParams& params);

inline double kernel_eval(const KernelTable& table, double x) { return table(x); }

}  // namespace glyco
