#include "glyco/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "glyco/csv.hpp"
#include "glyco/error.hpp"
#include "glyco/rng.hpp"

namespace glyco {

bool SplitSpec::is_train(const std::string& id) const {
    return std::find(train_patients.begin(), train_patients.end(), id) != train_patients.end();
}

bool SplitSpec::is_test(const std::string& id) const {
    return std::find(test_patients.begin(), test_patients.end(), id) != test_patients.end();
}

std::size_t train_count(std::size_t patients, double percent) {
    return static_cast<std::size_t>(std::floor(percent * static_cast<double>(patients) / 100.0 + 0.5));
}

SplitSpec split_patients(std::span<const std::string> patient_ids, double percent,
                         std::uint64_t seed) {
    if (!(percent > 0.0 && percent < 100.0)) {
        throw ConfigError("training percent must lie in (0, 100), got " + csv::format_double(percent));
    }
    const std::size_t total = patient_ids.size();
    if (total < 2) {
        throw ConfigError("a patient split needs at least 2 patients, got " + std::to_string(total));
    }
    const std::size_t k = train_count(total, percent);
    if (k == 0 || k == total) {
        throw ConfigError("training percent " + csv::format_double(percent) + " of " +
                          std::to_string(total) + " patients leaves an empty side");
    }

    // Partial Fisher-Yates over positions; the first k become training patients.
    std::vector<std::size_t> pos(total);
    std::iota(pos.begin(), pos.end(), std::size_t{0});
    Engine eng(seed);
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(uniform_below(eng, total - i));
        std::swap(pos[i], pos[j]);
    }
    std::vector<bool> chosen(total, false);
    for (std::size_t i = 0; i < k; ++i) {
        chosen[pos[i]] = true;
    }

    SplitSpec spec;
    spec.percent = percent;
    for (std::size_t i = 0; i < total; ++i) {
        (chosen[i] ? spec.train_patients : spec.test_patients).push_back(patient_ids[i]);
    }
    return spec;
}

}  // namespace glyco
