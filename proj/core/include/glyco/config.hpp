#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "glyco/kernel.hpp"
#include "glyco/pred_ega.hpp"
#include "glyco/stratify.hpp"

namespace glyco {

/// Settings of one prediction experiment. Per-range arrays are indexed by
/// range_index(GlycemicRange).
struct ExperimentConfig {
    std::size_t d = 7;
    std::size_t h = 6;
    double c_percent = 50.0;
    std::size_t trials = 100;
    std::array<int, 3> n{5, 5, 5};
    std::array<double, 3> alpha{1.0, 1.0, 1.0};
    /// Manifold dimension. Has no default and must be set.
    std::optional<int> q;
    std::uint64_t seed = 0;
    RateDenominator rate_denominator = RateDenominator::Doubled;
    Averaging averaging = Averaging::TrialMean;
    double sample_spacing_min = 5.0;
    /// Worker threads for trials; 0 picks the hardware concurrency.
    std::size_t threads = 0;

    std::string input;
    std::string train_input;
    std::string test_input;
    std::string output_dir;
    std::string zone_table;

    /// Throws ConfigError on any violated constraint, including a missing q.
    void validate() const;

    KernelParams kernel_params(GlycemicRange r) const;
};

/// Keys accepted in config files and as CLI overrides.
const std::vector<std::string_view>& config_keys();

/// Sets one key from its textual value. Throws ConfigError for unknown keys
/// or unparsable values.
void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Parses a flat JSON object or flat TOML (`key = value` lines, `#` comments).
/// The format is picked by the first non-blank character. Unknown keys are
/// rejected. Missing keys keep the values already in `base`.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

std::string_view to_string(RateDenominator d) noexcept;
std::string_view to_string(Averaging a) noexcept;

}  // namespace glyco
