#include "glyco/config.hpp"

#include <charconv>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "glyco/csv.hpp"
#include "glyco/error.hpp"

namespace glyco {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view v) {
    Int out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError("config: '" + std::string(key) + "' expects an integer, got '" +
                          std::string(v) + "'");
    }
    return out;
}

double parse_real(std::string_view key, std::string_view v) {
    double out = 0.0;
    if (!csv::parse_double(v, out)) {
        throw ConfigError("config: '" + std::string(key) + "' expects a number, got '" +
                          std::string(v) + "'");
    }
    return out;
}

std::size_t parse_size(std::string_view key, std::string_view v) {
    if (v.starts_with('-')) {
        throw ConfigError("config: '" + std::string(key) + "' must be non-negative");
    }
    return parse_int<std::size_t>(key, v);
}

std::string unquote(std::string_view v) {
    if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') || (v.front() == '\'' && v.back() == '\''))) {
        v = v.substr(1, v.size() - 2);
    }
    return std::string(v);
}

}  // namespace

std::string_view to_string(RateDenominator d) noexcept {
    return d == RateDenominator::Doubled ? "paper" : "central";
}

std::string_view to_string(Averaging a) noexcept {
    return a == Averaging::TrialMean ? "trial" : "pooled";
}

const std::vector<std::string_view>& config_keys() {
    static const std::vector<std::string_view> keys{
        "d",          "h",         "c_percent",   "trials",      "n_hypo",
        "n_eu",       "n_hyper",   "alpha_hypo",  "alpha_eu",    "alpha_hyper",
        "q",          "seed",      "rate_denominator", "averaging", "sample_spacing_min",
        "threads",    "input",     "train_input", "test_input",  "output_dir",
        "zone_table"};
    return keys;
}

void set_config_value(ExperimentConfig& c, std::string_view key, std::string_view raw) {
    const std::string value = unquote(trim(raw));
    const std::string_view v = value;
    if (key == "d") c.d = parse_size(key, v);
    else if (key == "h") c.h = parse_size(key, v);
    else if (key == "c_percent") c.c_percent = parse_real(key, v);
    else if (key == "trials") c.trials = parse_size(key, v);
    else if (key == "n_hypo") c.n[0] = parse_int<int>(key, v);
    else if (key == "n_eu") c.n[1] = parse_int<int>(key, v);
    else if (key == "n_hyper") c.n[2] = parse_int<int>(key, v);
    else if (key == "alpha_hypo") c.alpha[0] = parse_real(key, v);
    else if (key == "alpha_eu") c.alpha[1] = parse_real(key, v);
    else if (key == "alpha_hyper") c.alpha[2] = parse_real(key, v);
    else if (key == "q") c.q = parse_int<int>(key, v);
    else if (key == "seed") c.seed = parse_int<std::uint64_t>(key, v);
    else if (key == "rate_denominator") {
        if (v == "paper") c.rate_denominator = RateDenominator::Doubled;
        else if (v == "central") c.rate_denominator = RateDenominator::Central;
        else throw ConfigError("config: rate_denominator must be 'paper' or 'central'");
    } else if (key == "averaging") {
        if (v == "trial") c.averaging = Averaging::TrialMean;
        else if (v == "pooled") c.averaging = Averaging::Pooled;
        else throw ConfigError("config: averaging must be 'trial' or 'pooled'");
    }
    else if (key == "sample_spacing_min") c.sample_spacing_min = parse_real(key, v);
    else if (key == "threads") c.threads = parse_size(key, v);
    else if (key == "input") c.input = value;
    else if (key == "train_input") c.train_input = value;
    else if (key == "test_input") c.test_input = value;
    else if (key == "output_dir") c.output_dir = value;
    else if (key == "zone_table") c.zone_table = value;
    else throw ConfigError("config: unknown key '" + std::string(key) + "'");
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
    const auto body = trim(text);
    if (body.starts_with('{')) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        for (const auto& [key, val] : doc.items()) {
            if (val.is_object() || val.is_array() || val.is_null()) {
                throw ConfigError("config: '" + key + "' must be a scalar");
            }
            set_config_value(base, key, val.is_string() ? val.get<std::string>() : val.dump());
        }
        return base;
    }
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view l = line;
        if (const auto hash = l.find('#'); hash != std::string_view::npos && l.find('"') > hash) {
            l = l.substr(0, hash);
        }
        l = trim(l);
        if (l.empty()) {
            continue;
        }
        const auto eq = l.find('=');
        if (eq == std::string_view::npos || l.starts_with('[')) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        set_config_value(base, trim(l.substr(0, eq)), l.substr(eq + 1));
    }
    return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), std::move(base));
}

void ExperimentConfig::validate() const {
    if (d < 2) throw ConfigError("config: d must be >= 2");
    if (h < 1) throw ConfigError("config: h must be >= 1");
    if (!(c_percent > 0.0 && c_percent < 100.0)) throw ConfigError("config: c_percent must lie in (0, 100)");
    if (trials < 1) throw ConfigError("config: trials must be >= 1");
    if (!q) throw ConfigError("config: q (manifold dimension) is required");
    if (*q < 1 || static_cast<std::size_t>(*q) > d) throw ConfigError("config: q must lie in [1, d]");
    if (!(sample_spacing_min > 0.0)) throw ConfigError("config: sample_spacing_min must be positive");
    for (const auto r : kAllRanges) {
        try {
            kernel_params(r).validate();
        } catch (const InvalidInput& e) {
            throw ConfigError(std::string("config (") + std::string(range_name(r)) + "): " + e.what());
        }
    }
}

KernelParams ExperimentConfig::kernel_params(GlycemicRange r) const {
    const auto i = range_index(r);
    return {n[i], alpha[i], q.value_or(0)};
}

}  // namespace glyco
