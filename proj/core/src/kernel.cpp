#include "glyco/kernel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "glyco/error.hpp"

namespace glyco {

namespace {

const double kPiQuarter = std::pow(std::numbers::pi, -0.25);

double bump(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

// c_l = sqrt((2l)!) / (2^l l!) for l = 0..count-1, via c_l / c_{l-1} = sqrt((2l-1)/(2l)).
std::vector<double> central_ratio_table(std::size_t count) {
    std::vector<double> c(count);
    if (count == 0) {
        return c;
    }
    c[0] = 1.0;
    for (std::size_t l = 1; l < count; ++l) {
        const double two_l = 2.0 * static_cast<double>(l);
        c[l] = c[l - 1] * std::sqrt((two_l - 1.0) / two_l);
    }
    return c;
}

// g_k = Gamma(beta + k) / (Gamma(beta) k!) for k = 0..count-1, via g_k = g_{k-1} (beta + k - 1) / k.
std::vector<double> gamma_ratio_table(double beta, std::size_t count) {
    std::vector<double> g(count);
    if (count == 0) {
        return g;
    }
    g[0] = 1.0;
    for (std::size_t k = 1; k < count; ++k) {
        const double kd = static_cast<double>(k);
        g[k] = g[k - 1] * (beta + kd - 1.0) / kd;
    }
    return g;
}

double alternating(std::size_t l) { return (l % 2 == 0) ? 1.0 : -1.0; }

// pi^{-(2q-1)/4} / Gamma((q-1)/2) with the Gamma factor folded into g_k.
double dimension_prefactor(int q) { return std::pow(std::numbers::pi, -(2.0 * q - 1.0) / 4.0); }

}  // namespace

void KernelParams::validate() const {
    if (n < 1) {
        throw InvalidInput("kernel: n must be >= 1, got " + std::to_string(n));
    }
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw InvalidInput("kernel: alpha must lie in (0, 1], got " + std::to_string(alpha));
    }
    if (q < 1) {
        throw InvalidInput("kernel: q must be >= 1, got " + std::to_string(q));
    }
}

double cutoff(double t) {
    if (!(t >= 0.0)) {
        throw InvalidInput("cutoff: argument must be non-negative");
    }
    if (t <= 0.5) {
        return 1.0;
    }
    if (t >= 1.0) {
        return 0.0;
    }
    const double up = bump(1.0 - t);
    const double down = bump(t - 0.5);
    return up / (up + down);
}

std::vector<ProjectionWeight> projection_weights(std::size_t m, int q) {
    if (q < 1) {
        throw InvalidInput("projection_weights: q must be >= 1");
    }
    const auto c = central_ratio_table(m + 1);
    if (q == 1) {
        return {{m, kPiQuarter * alternating(m) * c[m]}};
    }
    const auto g = gamma_ratio_table(0.5 * (q - 1), m + 1);
    const double pre = dimension_prefactor(q);
    std::vector<ProjectionWeight> out;
    out.reserve(m + 1);
    for (std::size_t l = 0; l <= m; ++l) {
        out.push_back({l, pre * alternating(l) * g[m - l] * c[l]});
    }
    return out;
}

KernelTable::KernelTable(const KernelParams& params) : params_(params) {
    params_.validate();
    const auto n = static_cast<std::size_t>(params_.n);
    const std::size_t top = n * n / 2;
    const double nd = static_cast<double>(params_.n);

    std::vector<double> weight(top + 1);
    for (std::size_t m = 0; m <= top; ++m) {
        weight[m] = cutoff(std::sqrt(2.0 * static_cast<double>(m)) / nd);
    }

    const auto c = central_ratio_table(top + 1);
    coeffs_.assign(top + 1, 0.0);
    if (params_.q == 1) {
        for (std::size_t l = 0; l <= top; ++l) {
            coeffs_[l] = weight[l] * kPiQuarter * alternating(l) * c[l];
        }
    } else {
        // a_l = pre (-1)^l c_l sum_{m=l}^{L} H_m g_{m-l}
        const auto g = gamma_ratio_table(0.5 * (params_.q - 1), top + 1);
        const double pre = dimension_prefactor(params_.q);
        for (std::size_t l = 0; l <= top; ++l) {
            double acc = 0.0;
            for (std::size_t m = l; m <= top; ++m) {
                acc += weight[m] * g[m - l];
            }
            coeffs_[l] = pre * alternating(l) * c[l] * acc;
        }
    }

    const std::size_t degree = 2 * top;
    rec_a_.assign(degree + 1, 0.0);
    rec_b_.assign(degree + 1, 0.0);
    for (std::size_t k = 2; k <= degree; ++k) {
        const double kd = static_cast<double>(k);
        rec_a_[k] = std::sqrt(2.0 / kd);
        rec_b_[k] = std::sqrt((kd - 1.0) / kd);
    }
}

double KernelTable::operator()(double x) const {
    if (!std::isfinite(x)) {
        throw InvalidInput("kernel_eval: argument must be finite");
    }
    x = std::abs(x);
    const std::size_t degree = 2 * max_index();
    double prev2 = kPiQuarter;  // h_0
    double sum = coeffs_[0] * prev2;
    if (degree > 0) {
        double prev1 = std::numbers::sqrt2 * kPiQuarter * x;  // h_1
        for (std::size_t k = 2; k <= degree; ++k) {
            const double cur = rec_a_[k] * x * prev1 - rec_b_[k] * prev2;
            if (k % 2 == 0) {
                sum += coeffs_[k / 2] * cur;
            }
            prev2 = prev1;
            prev1 = cur;
        }
    }
    return sum * std::exp(-0.5 * x * x);
}

KernelTable build_kernel_table(const KernelParams& params) { return KernelTable(params); }

}  // namespace glyco
