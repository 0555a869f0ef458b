#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace glyco {

/// Patient-level partition into training (C) and test (Q) sets.
struct SplitSpec {
    std::vector<std::string> train_patients;
    std::vector<std::string> test_patients;
    double percent = 0.0;

    bool is_train(const std::string& id) const;
    bool is_test(const std::string& id) const;
};

/// Number of training patients: c * count / 100 rounded half-up.
std::size_t train_count(std::size_t patients, double percent);

/// Draws a uniformly random subset of round(c% of patients) as training set.
/// Deterministic in `seed`. Both output lists keep the input order.
/// Throws ConfigError if c is outside (0, 100), fewer than two patients are
/// given, or either side would be empty.
SplitSpec split_patients(std::span<const std::string> patient_ids, double percent,
                         std::uint64_t seed);

}  // namespace glyco
