#include "glyco/report.hpp"

#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>

#include "glyco/csv.hpp"
#include "glyco/error.hpp"

namespace glyco {

namespace {

using json = nlohmann::ordered_json;

constexpr std::array<std::string_view, 3> kCategories{"accurate", "benign", "erroneous"};

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    out << content;
    out.flush();
    if (!out) {
        throw DataError("error writing " + path.string());
    }
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw DataError("cannot create directory " + dir.string() + ": " + ec.message());
    }
}

std::string horizon_label(const ExperimentConfig& c) {
    return csv::format_double(static_cast<double>(c.h) * c.sample_spacing_min);
}

std::string pct_field(const RangeTally& t, std::size_t k) {
    return t.percent ? csv::format_fixed((*t.percent)[k], 2) : std::string{};
}

json tally_json(const RangeTally& t) {
    json j;
    j["accurate"] = t.accurate;
    j["benign"] = t.benign;
    j["erroneous"] = t.erroneous;
    j["excluded"] = t.excluded;
    if (t.percent) {
        j["percent"] = {(*t.percent)[0], (*t.percent)[1], (*t.percent)[2]};
    } else {
        j["percent"] = nullptr;
    }
    return j;
}

json grid_json(const PredEgaGrid& g) {
    json j;
    for (const auto r : kAllRanges) {
        j[std::string(range_name(r))] = tally_json(g[r]);
    }
    return j;
}

json counts_json(const std::array<std::size_t, 3>& c) {
    json j;
    for (const auto r : kAllRanges) {
        j[std::string(range_name(r))] = c[range_index(r)];
    }
    return j;
}

std::string grid_csv(const PredEgaGrid& g) {
    std::ostringstream s;
    write_grid_csv(s, g);
    return s.str();
}

std::string nine_column_header() {
    std::string h;
    for (const auto r : kAllRanges) {
        for (auto c : kCategories) {
            h += "," + std::string(range_name(r)) + "_" + std::string(c);
        }
    }
    return h;
}

}  // namespace

void emit_report(std::span<const ExperimentResult> results, const std::filesystem::path& dir,
                 const ReportOptions& options) {
    ensure_dir(dir);

    std::ostringstream table_csv;
    table_csv << "horizon_min" << nine_column_header() << '\n';

    std::ostringstream table_txt;
    table_txt << std::left << std::setw(10) << "Horizon";
    for (const auto r : kAllRanges) {
        table_txt << " | " << std::setw(26) << range_name(r);
    }
    table_txt << '\n' << std::setw(10) << "(min)";
    for (std::size_t i = 0; i < 3; ++i) {
        table_txt << " | " << std::right << std::setw(8) << "Acc." << std::setw(9) << "Benign"
                  << std::setw(9) << "Error" << std::left;
    }
    table_txt << '\n';

    std::ostringstream bars;
    bars << "horizon_min,range,method,category,percentage\n";
    std::ostringstream trial_grids;
    trial_grids << "horizon_min,trial,range,accurate_pct,benign_pct,erroneous_pct,n_points,n_excluded\n";
    json trials = json::array();
    json timing = json::array();

    for (const auto& res : results) {
        const auto hz = horizon_label(res.config);
        write_file(dir / ("grid_h" + std::to_string(res.config.h) + ".csv"), grid_csv(res.averaged));

        table_csv << hz;
        table_txt << std::left << std::setw(10) << hz;
        for (const auto r : kAllRanges) {
            const auto& t = res.averaged[r];
            table_txt << " | " << std::right;
            for (std::size_t k = 0; k < 3; ++k) {
                const auto field = pct_field(t, k);
                table_csv << ',' << field;
                table_txt << std::setw(k == 0 ? 8 : 9) << (field.empty() ? "-" : field);
                bars << hz << ',' << range_name(r) << ',' << options.method << ',' << kCategories[k]
                     << ',' << field << '\n';
            }
            table_txt << std::left;
        }
        table_csv << '\n';
        table_txt << '\n';

        for (const auto& tr : res.trials) {
            for (const auto r : kAllRanges) {
                const auto& t = tr.grid[r];
                trial_grids << hz << ',' << tr.trial << ',' << range_name(r) << ',' << pct_field(t, 0)
                            << ',' << pct_field(t, 1) << ',' << pct_field(t, 2) << ','
                            << t.classified() << ',' << t.excluded << '\n';
            }
            const double hmin = static_cast<double>(res.config.h) * res.config.sample_spacing_min;
            json j;
            j["horizon_min"] = hmin;
            j["trial"] = tr.trial;
            j["seed"] = tr.seed;
            j["train_patients"] = tr.split.train_patients;
            j["test_patients"] = tr.split.test_patients;
            j["train_windows"] = tr.train_windows;
            j["test_windows"] = tr.test_windows;
            j["train_counts"] = counts_json(tr.train_counts);
            j["test_counts"] = counts_json(tr.test_counts);
            j["excluded_targets"] = tr.excluded_targets;
            j["fallbacks"] = tr.fallbacks;
            j["grid"] = grid_json(tr.grid);
            j["warnings"] = tr.warnings;
            trials.push_back(std::move(j));
            if (options.include_timing) {
                timing.push_back({{"horizon_min", hmin},
                                  {"trial", tr.trial},
                                  {"split_ms", tr.timing.split_ms},
                                  {"train_ms", tr.timing.train_ms},
                                  {"predict_ms", tr.timing.predict_ms},
                                  {"evaluate_ms", tr.timing.evaluate_ms}});
            }
        }
    }

    write_file(dir / "grid_table.csv", table_csv.str());
    write_file(dir / "grid_table.txt", table_txt.str());
    write_file(dir / "bars.csv", bars.str());
    write_file(dir / "trial_grids.csv", trial_grids.str());
    write_file(dir / "trials.json", trials.dump(1) + "\n");
    if (options.include_timing) {
        write_file(dir / "timing.json", timing.dump(1) + "\n");
    }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
    out << "rank,q,n_hypo,n_eu,n_hyper" << nine_column_header() << ",n_points\n";
    std::size_t rank = 1;
    for (const auto& row : rows) {
        out << rank++ << ',' << row.q << ',' << row.n[0] << ',' << row.n[1] << ',' << row.n[2];
        std::size_t points = 0;
        for (const auto r : kAllRanges) {
            const auto& t = row.averaged[r];
            points += t.classified();
            for (std::size_t k = 0; k < 3; ++k) {
                out << ',' << pct_field(t, k);
            }
        }
        out << ',' << points << '\n';
    }
}

void emit_cross_report(const CrossResult& result, const ExperimentConfig& config,
                       const std::filesystem::path& dir) {
    ensure_dir(dir);
    write_file(dir / "cross_grid.csv", grid_csv(result.grid));
    json j;
    j["horizon_min"] = static_cast<double>(config.h) * config.sample_spacing_min;
    j["in_sample"] = result.in_sample;
    j["shared_patients"] = result.shared_patients;
    j["scaling"] = {{"max_val", result.scaling.max_val}, {"min_val", result.scaling.min_val}};
    j["train_windows"] = result.train_windows;
    j["test_windows"] = result.test_windows;
    j["fallbacks"] = result.fallbacks;
    j["grid"] = grid_json(result.grid);
    j["warnings"] = result.warnings;
    write_file(dir / "cross.json", j.dump(1) + "\n");
}

}  // namespace glyco
