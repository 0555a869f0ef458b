#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "glyco/config.hpp"
#include "glyco/error.hpp"
#include "glyco/experiment.hpp"
#include "glyco/model.hpp"
#include "glyco/report.hpp"
#include "glyco/rng.hpp"
#include "glyco/synth.hpp"
#include "glyco/windows.hpp"

using namespace glyco;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config(std::size_t trials = 3) {
    ExperimentConfig c;
    c.q = 2;
    c.trials = trials;
    c.seed = 17;
    c.threads = 2;
    return c;
}

const std::vector<GlucoseSeries>& data10() {
    static const auto s = synth_series(3, 10, 200);
    return s;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("glyco_test_" + name);
    fs::remove_all(p);
    return p;
}

bool same_grid(const PredEgaGrid& a, const PredEgaGrid& b) {
    for (std::size_t r = 0; r < 3; ++r) {
        const auto& x = a.ranges[r];
        const auto& y = b.ranges[r];
        if (x.accurate != y.accurate || x.benign != y.benign || x.erroneous != y.erroneous ||
            x.excluded != y.excluded || x.percent != y.percent) {
            return false;
        }
    }
    return true;
}

SampleWindow flat_window(double level, double target, std::size_t d = 7) {
    SampleWindow w;
    w.patient_id = "T";
    w.features.assign(d, level);
    for (std::size_t k = 0; k < d; ++k) w.features[k] += static_cast<double>(k);
    w.target = target;
    return w;
}

}  // namespace

TEST_CASE("config parsing from TOML and JSON") {
    const auto t = parse_config(
        "# experiment\n"
        "d = 5\nh = 12\nc_percent = 40\ntrials = 7\n"
        "n_hypo = 3\nn_eu = 4\nn_hyper = 6\nalpha_eu = 0.5\n"
        "q = 3   # manifold\nseed = 99\nrate_denominator = \"central\"\naveraging = pooled\n"
        "input = \"data.csv\"\noutput_dir = 'out'\n");
    CHECK(t.d == 5);
    CHECK(t.h == 12);
    CHECK(t.c_percent == 40);
    CHECK(t.trials == 7);
    CHECK(t.n == std::array<int, 3>{3, 4, 6});
    CHECK(t.alpha[1] == 0.5);
    CHECK(t.q == 3);
    CHECK(t.seed == 99);
    CHECK(t.rate_denominator == RateDenominator::Central);
    CHECK(t.averaging == Averaging::Pooled);
    CHECK(t.input == "data.csv");
    CHECK(t.output_dir == "out");
    CHECK_NOTHROW(t.validate());

    const auto j = parse_config(R"({"d": 7, "h": 6, "q": 2, "n_hypo": 7, "seed": 5, "input": "x.csv"})");
    CHECK(j.q == 2);
    CHECK(j.n[0] == 7);
    CHECK(j.input == "x.csv");
    CHECK(j.kernel_params(GlycemicRange::Hypo) == KernelParams{7, 1.0, 2});
}

TEST_CASE("config rejects bad content") {
    CHECK_THROWS_AS(parse_config("bogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"bogus": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_config("d = seven\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("rate_denominator = sideways\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("{ not json"), ConfigError);
    CHECK_THROWS_AS(parse_config("just text\n"), ConfigError);

    ExperimentConfig c;
    CHECK_THROWS_AS(c.validate(), ConfigError);  // q missing
    c.q = 2;
    CHECK_NOTHROW(c.validate());
    c.q = 9;
    CHECK_THROWS_AS(c.validate(), ConfigError);  // q > d
    c.q = 2;
    c.c_percent = 100;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.c_percent = 50;
    c.alpha[2] = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.alpha[2] = 1;
    c.trials = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);

    const std::set<std::string_view> paths{"input", "train_input", "test_input", "output_dir", "zone_table"};
    for (auto key : config_keys()) {
        if (paths.count(key)) continue;
        ExperimentConfig base;
        CHECK_THROWS_AS(set_config_value(base, key, ""), ConfigError);
    }
}

TEST_CASE("train stratifies, scales and keeps counts") {
    const auto windows = make_windows(std::span(data10()), 7, 6);
    const auto model = train(small_config(), windows);
    std::size_t excluded = 0;
    for (const auto& w : windows) excluded += w.target > 450 ? 1 : 0;
    CHECK(model.training_size() + model.excluded_targets() == windows.size());
    CHECK(model.excluded_targets() == excluded);
    for (auto r : kAllRanges) {
        CHECK(model.enabled(r));
        const auto& s = model.samples(r);
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(classify_glucose(s.value(i)) == r);
            for (double z : s.point(i)) {
                CHECK(z >= -0.5);
                CHECK(z <= 0.5);
            }
        }
    }
    CHECK(model.warnings().empty());
}

TEST_CASE("all euglycemic training data disables the other ranges") {
    std::vector<SampleWindow> ws;
    for (int i = 0; i < 20; ++i) ws.push_back(flat_window(100 + i, 120 + i));
    const auto model = train(small_config(), ws);
    CHECK(model.enabled(GlycemicRange::Eu));
    CHECK_FALSE(model.enabled(GlycemicRange::Hypo));
    CHECK_FALSE(model.enabled(GlycemicRange::Hyper));
    CHECK(model.effective_range(GlycemicRange::Hypo) == GlycemicRange::Eu);
    CHECK(model.effective_range(GlycemicRange::Hyper) == GlycemicRange::Eu);
    CHECK(model.warnings().size() == 2);

    const std::vector<SampleWindow> test{flat_window(50, 0), flat_window(120, 0), flat_window(300, 0)};
    const auto p = predict(model, test);
    CHECK(p.fallbacks == 2);
    CHECK(p.routed[0] == GlycemicRange::Hypo);
    CHECK(p.routed[2] == GlycemicRange::Hyper);

    std::vector<SampleWindow> high;
    for (int i = 0; i < 5; ++i) high.push_back(flat_window(460, 470));
    CHECK_THROWS_AS(train(small_config(), high), DataError);
}

TEST_CASE("single-sample model predicts value times kernel") {
    const std::vector<SampleWindow> one{flat_window(60, 65, 2), flat_window(100, 400, 2)};
    auto cfg = small_config();
    cfg.d = 2;
    cfg.q = 1;
    cfg.n = {4, 4, 4};
    const auto model = train(cfg, one);
    const auto& scaling = model.scaling();
    const std::vector<SampleWindow> test{flat_window(62, 0, 2)};
    const auto p = predict(model, test);
    REQUIRE(p.routed[0] == GlycemicRange::Hypo);
    const double dx = scaling.scale(62) - scaling.scale(60);
    const double dy = scaling.scale(63) - scaling.scale(61);
    const double r = std::sqrt(dx * dx + dy * dy);
    CHECK(p.values[0] == doctest::Approx(65.0 * KernelTable({4, 1.0, 1})(r)).epsilon(1e-13));
}

TEST_CASE("prediction order follows window order") {
    const auto windows = make_windows(std::span(data10()), 7, 6);
    const auto model = train(small_config(), std::span(windows).first(800));
    std::vector<SampleWindow> test(windows.begin() + 800, windows.begin() + 900);
    const auto a = predict(model, test);
    std::reverse(test.begin(), test.end());
    const auto b = predict(model, test);
    for (std::size_t i = 0; i < test.size(); ++i) CHECK(a.values[i] == b.values[test.size() - 1 - i]);
}

TEST_CASE("eval points pair neighbouring windows of one patient") {
    std::vector<SampleWindow> ws;
    for (std::size_t j = 7; j <= 10; ++j) {
        SampleWindow w = flat_window(100, 100 + 10.0 * j);
        w.patient_id = "A";
        w.index = j;
        w.time = 5.0 * (j - 1);
        w.target_time = w.time + 30;
        ws.push_back(w);
    }
    SampleWindow other = ws.back();
    other.patient_id = "B";
    other.index = 11;
    ws.push_back(other);
    const std::vector<double> pred{100, 120, 140, 160, 999};
    const auto pts = make_eval_points(ws, pred, RateDenominator::Doubled);
    REQUIRE(pts.size() == 5);
    CHECK_FALSE(pts[0].reference_rate.has_value());
    CHECK(*pts[1].reference_rate == doctest::Approx(20.0 / 20.0));
    CHECK(*pts[1].predicted_rate == doctest::Approx(40.0 / 20.0));
    CHECK_FALSE(pts[3].predicted_rate.has_value());
    CHECK_FALSE(pts[4].predicted_rate.has_value());
}

TEST_CASE("run_trial is deterministic and leak free") {
    const auto cfg = small_config();
    const auto a = run_trial(cfg, data10(), 4);
    const auto b = run_trial(cfg, data10(), 4);
    CHECK(a.seed == mix_seed(cfg.seed, 4));
    CHECK(a.split.train_patients == b.split.train_patients);
    CHECK(same_grid(a.grid, b.grid));
    for (const auto& id : a.split.test_patients) CHECK_FALSE(a.split.is_train(id));
    CHECK(a.train_counts[0] + a.train_counts[1] + a.train_counts[2] + a.excluded_targets == a.train_windows);
    CHECK(a.test_counts[0] + a.test_counts[1] + a.test_counts[2] == a.test_windows);
    std::size_t graded = 0;
    for (const auto& t : a.grid.ranges) graded += t.classified() + t.excluded;
    CHECK(graded == a.test_windows);
}

TEST_CASE("oracle predictions give a fully accurate grid") {
    const auto cfg = small_config();
    const PredictionOverride oracle = [](std::span<const SampleWindow> ws) {
        std::vector<double> out;
        for (const auto& w : ws) out.push_back(w.target);
        return out;
    };
    for (std::size_t t = 0; t < 5; ++t) {
        const auto r = run_trial(cfg, data10(), t, ZoneTables::builtin(), oracle);
        for (const auto& tally : r.grid.ranges) {
            if (tally.classified() == 0) continue;
            CHECK((*tally.percent)[0] == 100.0);
        }
    }
}

TEST_CASE("run_experiment single trial and seed prefix") {
    auto cfg = small_config(1);
    const auto one = run_experiment(cfg, data10());
    REQUIRE(one.trials.size() == 1);
    CHECK(same_grid(one.averaged, one.trials[0].grid));

    cfg.trials = 3;
    const auto three = run_experiment(cfg, data10());
    cfg.trials = 6;
    const auto six = run_experiment(cfg, data10());
    for (std::size_t t = 0; t < 3; ++t) {
        CHECK(three.trials[t].seed == six.trials[t].seed);
        CHECK(three.trials[t].split.train_patients == six.trials[t].split.train_patients);
        CHECK(same_grid(three.trials[t].grid, six.trials[t].grid));
    }

    cfg.threads = 1;
    const auto serial = run_experiment(cfg, data10());
    CHECK(same_grid(serial.averaged, six.averaged));
}

TEST_CASE("cross dataset scaling uses training data only") {
    const auto train_set = synth_series(100, 4, 200, {"J"});
    auto test_set = synth_series(200, 3, 200, {"D"});
    test_set[0].values[50] = 480;  // outside every training window
    const auto cfg = small_config();
    const auto r = cross_dataset(cfg, train_set, test_set);
    const auto tw = make_windows(std::span(train_set), cfg.d, cfg.h);
    const auto expect = fit_scaling(tw);
    CHECK(r.scaling.max_val == expect.max_val);
    CHECK(r.scaling.min_val == expect.min_val);
    CHECK_FALSE(r.in_sample);
    CHECK(r.shared_patients == 0);
    CHECK(r.train_windows == tw.size());

    const auto same = cross_dataset(cfg, train_set, train_set);
    CHECK(same.in_sample);
    CHECK(same.shared_patients == 4);
    CHECK_FALSE(same.warnings.empty());
}

TEST_CASE("singleton sweep matches run_experiment") {
    auto cfg = small_config(3);
    cfg.n = {4, 5, 6};
    SweepSpec spec{{std::vector<int>{4}, std::vector<int>{5}, std::vector<int>{6}}, {2}};
    const auto rows = sweep(cfg, data10(), spec);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].n == std::array<int, 3>{4, 5, 6});
    CHECK(same_grid(rows[0].averaged, run_experiment(cfg, data10()).averaged));
}

TEST_CASE("full sweep has one row per combination, ranked") {
    auto cfg = small_config(2);
    const auto series = synth_series(4, 6, 160);
    const std::vector<int> n{3, 4, 5, 6, 7};
    const auto rows = sweep(cfg, series, {{n, n, n}, {1, 2}});
    CHECK(rows.size() == 250);
    std::set<std::tuple<int, int, int, int>> seen;
    double prev = 1e9;
    for (const auto& r : rows) {
        seen.insert({r.q, r.n[0], r.n[1], r.n[2]});
        const auto& p = r.averaged[GlycemicRange::Hypo].percent;
        const double acc = p ? (*p)[0] : -1.0;
        CHECK(acc <= prev);
        prev = acc;
    }
    CHECK(seen.size() == 250);
    CHECK_THROWS_AS(sweep(cfg, series, {{n, {}, n}, {2}}), ConfigError);
}

TEST_CASE("prediction csv loading") {
    std::istringstream in(
        "patient_id,timestamp_min,predicted,reference\n"
        "a,10,120,110\na,0,100,100\na,5,110,105\nb,0,60,60\n");
    const auto pts = load_prediction_points(in, RateDenominator::Doubled);
    REQUIRE(pts.size() == 4);
    CHECK(pts[1].reference == 105);
    CHECK(*pts[1].reference_rate == doctest::Approx(0.5));
    CHECK(*pts[1].predicted_rate == doctest::Approx(1.0));
    CHECK_FALSE(pts[3].reference_rate.has_value());
}

TEST_CASE("report rows, empty results and idempotence") {
    ExperimentResult res;
    res.config = small_config(1);
    auto& hypo = res.averaged[GlycemicRange::Hypo];
    hypo.accurate = 10;
    hypo.percent = std::array<double, 3>{85.05, 13.34, 1.61};
    const std::vector<ExperimentResult> results{res};

    const auto dir = scratch("report");
    emit_report(results, dir);
    const auto grid = slurp(dir / "grid_h6.csv");
    CHECK(grid.find("\nhypo,85.05,13.34,1.61,") != std::string::npos);
    CHECK(fs::exists(dir / "grid_table.csv"));
    CHECK(fs::exists(dir / "grid_table.txt"));
    CHECK(fs::exists(dir / "bars.csv"));
    CHECK(fs::exists(dir / "trials.json"));
    CHECK_FALSE(fs::exists(dir / "timing.json"));

    std::map<std::string, std::string> first;
    for (const auto& e : fs::directory_iterator(dir)) first[e.path().filename().string()] = slurp(e.path());
    emit_report(results, dir);
    for (const auto& [name, bytes] : first) CHECK(slurp(dir / name) == bytes);

    const auto empty_dir = scratch("report_empty");
    emit_report(std::vector<ExperimentResult>{}, empty_dir);
    for (const auto& e : fs::directory_iterator(empty_dir)) {
        const auto text = slurp(e.path());
        if (e.path().extension() == ".json") {
            CHECK(text.find("[]") != std::string::npos);
        } else if (e.path().extension() == ".csv") {
            CHECK(std::count(text.begin(), text.end(), '\n') == 1);
        }
    }

    const auto file = scratch("report_blocker");
    std::ofstream(file) << "x";
    CHECK_THROWS_AS(emit_report(results, file / "sub"), DataError);
}
