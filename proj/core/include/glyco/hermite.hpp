#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace glyco {

/// Orthonormalized Hermite polynomials h_0(x) .. h_{k_max}(x), computed with
/// the three-term recurrence
///
///   h_k = sqrt(2/k) x h_{k-1} - sqrt((k-1)/k) h_{k-2},
///   h_0 = pi^{-1/4},  h_1 = sqrt(2) pi^{-1/4} x.
///
/// The h_k are orthonormal with respect to the weight exp(-x^2).
/// Throws InvalidInput for non-finite x.
std::vector<double> hermite_sequence(double x, std::size_t k_max);

/// Same as hermite_sequence but writes into a caller-owned buffer of size k_max + 1.
void hermite_sequence(double x, std::span<double> out);

/// Hermite function psi_k(x) = h_k(x) exp(-x^2 / 2); orthonormal in L^2(R).
double weighted_hermite(double x, std::size_t k);

}  // namespace glyco
