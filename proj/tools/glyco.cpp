// glyco: command-line driver for glucose prediction with the localized
// Hermite kernel estimator and PRED-EGA evaluation.
//
// Exit codes: 0 success, 1 data or runtime error, 2 usage or configuration error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "glyco/config.hpp"
#include "glyco/csv.hpp"
#include "glyco/error.hpp"
#include "glyco/experiment.hpp"
#include "glyco/report.hpp"
#include "glyco/series.hpp"
#include "glyco/synth.hpp"

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string flag_for(std::string_view key) {
    std::string flag = "--";
    for (char c : key) {
        flag.push_back(c == '_' ? '-' : c);
    }
    return flag;
}

/// Config-file path plus one optional flag per config key.
struct ConfigFlags {
    std::string config_path;
    std::map<std::string, std::string, std::less<>> values;

    void attach(CLI::App& app, const std::vector<std::string_view>& skip = {}) {
        app.add_option("-c,--config", config_path, "Config file (flat JSON or TOML)");
        for (auto key : glyco::config_keys()) {
            if (std::find(skip.begin(), skip.end(), key) != skip.end()) {
                continue;
            }
            auto* opt = app.add_option(flag_for(key))
                            ->description("Overrides config key '" + std::string(key) + "'");
            opt->each([this, k = std::string(key)](const std::string& v) { values[k] = v; });
        }
    }

    glyco::ExperimentConfig resolve() const {
        glyco::ExperimentConfig cfg;
        if (!config_path.empty()) {
            cfg = glyco::load_config(config_path);
        }
        for (const auto& [key, value] : values) {
            glyco::set_config_value(cfg, key, value);
        }
        return cfg;
    }
};

void print_warnings(const std::vector<std::string>& warnings) {
    std::map<std::string, std::size_t> counts;
    std::vector<std::string> order;
    for (const auto& w : warnings) {
        if (counts[w]++ == 0) {
            order.push_back(w);
        }
    }
    for (const auto& w : order) {
        std::cerr << "warning: " << w;
        if (counts[w] > 1) {
            std::cerr << " (x" << counts[w] << ")";
        }
        std::cerr << '\n';
    }
}

glyco::ZoneTables zone_tables(const glyco::ExperimentConfig& cfg) {
    return cfg.zone_table.empty() ? glyco::ZoneTables::builtin() : glyco::ZoneTables::load(cfg.zone_table);
}

std::string pct(const glyco::PredEgaGrid& g, glyco::GlycemicRange r, std::size_t k) {
    const auto& p = g[r].percent;
    return p ? glyco::csv::format_fixed((*p)[k], 2) : "-";
}

std::string grid_summary(const glyco::PredEgaGrid& g) {
    std::string s;
    for (const auto r : glyco::kAllRanges) {
        s += " " + std::string(glyco::range_name(r)) + "=" + pct(g, r, 0) + "/" + pct(g, r, 1) + "/" +
             pct(g, r, 2);
    }
    return s;
}

std::vector<int> parse_int_set(const std::string& spec, const char* what) {
    std::vector<int> out;
    const auto fail = [&] { throw UsageError(std::string("bad ") + what + " '" + spec + "'"); };
    if (spec.empty()) {
        fail();
    }
    if (const auto colon = spec.find(':'); colon != std::string::npos) {
        int lo = 0;
        int hi = 0;
        try {
            std::size_t a = 0;
            std::size_t b = 0;
            lo = std::stoi(spec.substr(0, colon), &a);
            hi = std::stoi(spec.substr(colon + 1), &b);
            if (a != colon || b != spec.size() - colon - 1) {
                fail();
            }
        } catch (const std::logic_error&) {
            fail();
        }
        if (lo > hi) {
            fail();
        }
        for (int v = lo; v <= hi; ++v) {
            out.push_back(v);
        }
        return out;
    }
    std::size_t start = 0;
    while (start <= spec.size()) {
        const auto comma = spec.find(',', start);
        const auto item = spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) {
                fail();
            }
        } catch (const std::logic_error&) {
            fail();
        }
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

int cmd_synth(std::size_t patients, std::size_t length, std::uint64_t seed, const std::string& output,
              const std::string& prefix, double spacing) {
    glyco::SynthOptions opts;
    opts.id_prefix = prefix;
    opts.spacing_min = spacing;
    const auto series = glyco::synth_series(seed, patients, length, opts);
    glyco::write_series(output, series);
    std::cout << "synth: wrote " << patients * length << " readings for " << patients << " patients to "
              << output << '\n';
    return 0;
}

int cmd_run(const ConfigFlags& flags, bool timing) {
    auto cfg = flags.resolve();
    cfg.validate();
    if (cfg.input.empty()) {
        throw glyco::ConfigError("run: no input file (--input or config key 'input')");
    }
    if (cfg.output_dir.empty()) {
        throw glyco::ConfigError("run: no output directory (--output-dir or config key 'output_dir')");
    }
    const auto tables = zone_tables(cfg);
    const auto series = glyco::load_series(std::filesystem::path(cfg.input));
    const auto result = glyco::run_experiment(cfg, series, tables);
    std::vector<std::string> warnings;
    for (const auto& t : result.trials) {
        warnings.insert(warnings.end(), t.warnings.begin(), t.warnings.end());
    }
    print_warnings(warnings);
    glyco::ReportOptions opts;
    opts.include_timing = timing;
    glyco::emit_report(std::span(&result, 1), cfg.output_dir, opts);
    std::cout << "run: " << cfg.trials << " trials, horizon "
              << glyco::csv::format_double(static_cast<double>(cfg.h) * cfg.sample_spacing_min)
              << " min, acc/benign/err%" << grid_summary(result.averaged) << " -> " << cfg.output_dir
              << '\n';
    return 0;
}

int cmd_cross(const ConfigFlags& flags) {
    auto cfg = flags.resolve();
    cfg.validate();
    if (cfg.train_input.empty() || cfg.test_input.empty()) {
        throw glyco::ConfigError("cross: both --train-input and --test-input are required");
    }
    if (cfg.output_dir.empty()) {
        throw glyco::ConfigError("cross: no output directory (--output-dir)");
    }
    const auto tables = zone_tables(cfg);
    const auto train = glyco::load_series(std::filesystem::path(cfg.train_input));
    const auto test = glyco::load_series(std::filesystem::path(cfg.test_input));
    if (std::filesystem::equivalent(cfg.train_input, cfg.test_input)) {
        std::cerr << "warning: training and test inputs are the same file\n";
    }
    const auto result = glyco::cross_dataset(cfg, train, test, tables);
    print_warnings(result.warnings);
    glyco::emit_cross_report(result, cfg, cfg.output_dir);
    std::cout << "cross: " << result.train_windows << " training / " << result.test_windows
              << " test windows" << (result.in_sample ? " (in-sample)" : "") << ", acc/benign/err%"
              << grid_summary(result.grid) << " -> " << cfg.output_dir << '\n';
    return 0;
}

int cmd_sweep(const ConfigFlags& flags, const std::optional<std::string>& n_range,
              const std::array<std::optional<std::string>, 3>& per_range,
              const std::optional<std::string>& q_range) {
    auto cfg = flags.resolve();
    glyco::SweepSpec spec;
    const auto all = parse_int_set(n_range.value_or("3:7"), "n range");
    static constexpr std::array<const char*, 3> what{"n-hypo range", "n-eu range", "n-hyper range"};
    for (std::size_t r = 0; r < 3; ++r) {
        spec.n_values[r] = per_range[r] ? parse_int_set(*per_range[r], what[r]) : all;
    }
    if (q_range) {
        spec.q_values = parse_int_set(*q_range, "q range");
    } else if (cfg.q) {
        spec.q_values = {*cfg.q};
    } else {
        throw glyco::ConfigError("sweep: q is required (--q N or --q A:B)");
    }
    cfg.q = spec.q_values.front();
    cfg.validate();
    if (cfg.input.empty() || cfg.output_dir.empty()) {
        throw glyco::ConfigError("sweep: --input and --output-dir are required");
    }
    const auto tables = zone_tables(cfg);
    const auto series = glyco::load_series(std::filesystem::path(cfg.input));
    const auto rows = glyco::sweep(cfg, series, spec, tables);
    std::filesystem::create_directories(cfg.output_dir);
    const auto path = std::filesystem::path(cfg.output_dir) / "sweep.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw glyco::DataError("cannot write " + path.string());
    }
    glyco::write_sweep_csv(out, rows);
    const auto& best = rows.front();
    std::cout << "sweep: " << rows.size() << " combinations, best q=" << best.q << " n=" << best.n[0]
              << "/" << best.n[1] << "/" << best.n[2] << " acc/benign/err%" << grid_summary(best.averaged)
              << " -> " << path.string() << '\n';
    return 0;
}

int cmd_evaluate(const std::string& predictions, const std::string& output,
                 const std::string& denominator, const std::string& zone_table) {
    glyco::ExperimentConfig cfg;
    glyco::set_config_value(cfg, "rate_denominator", denominator);
    cfg.zone_table = zone_table;
    const auto tables = zone_tables(cfg);
    std::ifstream in(predictions);
    if (!in) {
        throw glyco::DataError("cannot open " + predictions);
    }
    const auto points = glyco::load_prediction_points(in, cfg.rate_denominator);
    const auto grid = glyco::build_grid(points, tables);
    std::ofstream out(output, std::ios::binary);
    if (!out) {
        throw glyco::DataError("cannot write " + output);
    }
    glyco::write_grid_csv(out, grid);
    std::cout << "evaluate: " << points.size() << " predictions, acc/benign/err%" << grid_summary(grid)
              << " -> " << output << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Glucose prediction with localized Hermite kernels and PRED-EGA evaluation"};
    app.require_subcommand(1);
    // --h is the prediction horizon, so help is long-form only.
    app.set_help_flag("--help", "Print this help message and exit");

    auto* synth = app.add_subcommand("synth", "Write a synthetic CGM dataset as CSV");
    std::size_t patients = 25;
    std::size_t length = 240;
    std::uint64_t synth_seed = 0;
    std::string synth_out;
    std::string prefix = "P";
    double spacing = 5.0;
    synth->add_option("--patients", patients, "Number of patients")->check(CLI::PositiveNumber);
    synth->add_option("--length", length, "Readings per patient")->check(CLI::PositiveNumber);
    synth->add_option("--seed", synth_seed, "Generator seed");
    synth->add_option("-o,--output", synth_out, "Output CSV path")->required();
    synth->add_option("--prefix", prefix, "Patient id prefix");
    synth->add_option("--spacing", spacing, "Minutes between readings")->check(CLI::PositiveNumber);

    auto* run = app.add_subcommand("run", "Repeated random-split experiment");
    ConfigFlags run_flags;
    run_flags.attach(*run, {"train_input", "test_input"});
    bool timing = false;
    run->add_flag("--timing", timing, "Also write per-trial timings");

    auto* cross = app.add_subcommand("cross", "Train on one dataset, evaluate on another");
    ConfigFlags cross_flags;
    cross_flags.attach(*cross, {"input", "trials", "c_percent", "averaging", "threads"});

    auto* sweep = app.add_subcommand("sweep", "Rank kernel parameter combinations");
    ConfigFlags sweep_flags;
    sweep_flags.attach(*sweep, {"q"});
    std::optional<std::string> n_range;
    std::array<std::optional<std::string>, 3> per_range;
    std::optional<std::string> q_range;
    sweep->add_option("--n-range", n_range, "n candidates for every range, A:B or a,b,c (default 3:7)");
    sweep->add_option("--n-hypo-range", per_range[0], "n candidates for hypoglycemia");
    sweep->add_option("--n-eu-range", per_range[1], "n candidates for euglycemia");
    sweep->add_option("--n-hyper-range", per_range[2], "n candidates for hyperglycemia");
    sweep->add_option("--q", q_range, "Manifold dimension or range A:B");

    auto* evaluate = app.add_subcommand("evaluate", "PRED-EGA grid for an external prediction CSV");
    std::string eval_in;
    std::string eval_out;
    std::string eval_denominator = "paper";
    std::string eval_zones;
    evaluate->add_option("--predictions", eval_in, "CSV: patient_id,timestamp_min,predicted,reference")
        ->required();
    evaluate->add_option("-o,--output", eval_out, "Grid CSV path")->required();
    evaluate->add_option("--rate-denominator", eval_denominator, "paper or central");
    evaluate->add_option("--zone-table", eval_zones, "Zone table JSON (default: builtin)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (synth->parsed()) {
            return cmd_synth(patients, length, synth_seed, synth_out, prefix, spacing);
        }
        if (run->parsed()) {
            return cmd_run(run_flags, timing);
        }
        if (cross->parsed()) {
            return cmd_cross(cross_flags);
        }
        if (sweep->parsed()) {
            return cmd_sweep(sweep_flags, n_range, per_range, q_range);
        }
        if (evaluate->parsed()) {
            return cmd_evaluate(eval_in, eval_out, eval_denominator, eval_zones);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const glyco::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
