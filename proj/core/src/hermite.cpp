#include "glyco/hermite.hpp"

#include <cmath>
#include <numbers>

#include "glyco/error.hpp"

namespace glyco {

namespace {

const double kPiQuarter = std::pow(std::numbers::pi, -0.25);

void check_finite(double x) {
    if (!std::isfinite(x)) {
        throw InvalidInput("hermite: argument must be finite");
    }
}

}  // namespace

void hermite_sequence(double x, std::span<double> out) {
    check_finite(x);
    if (out.empty()) {
        return;
    }
    out[0] = kPiQuarter;
    if (out.size() == 1) {
        return;
    }
    out[1] = std::numbers::sqrt2 * kPiQuarter * x;
    for (std::size_t k = 2; k < out.size(); ++k) {
        const double kd = static_cast<double>(k);
        out[k] = std::sqrt(2.0 / kd) * x * out[k - 1] - std::sqrt((kd - 1.0) / kd) * out[k - 2];
    }
}

std::vector<double> hermite_sequence(double x, std::size_t k_max) {
    std::vector<double> h(k_max + 1);
    hermite_sequence(x, h);
    return h;
}

double weighted_hermite(double x, std::size_t k) {
    const auto h = hermite_sequence(x, k);
    return h[k] * std::exp(-0.5 * x * x);
}

}  // namespace glyco
