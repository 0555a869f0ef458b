#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "glyco/error.hpp"
#include "glyco/rng.hpp"
#include "glyco/scaling.hpp"
#include "glyco/series.hpp"
#include "glyco/split.hpp"
#include "glyco/stratify.hpp"
#include "glyco/synth.hpp"
#include "glyco/windows.hpp"

using namespace glyco;

namespace {

GlucoseSeries ramp(std::size_t n, std::string id = "X", double spacing = 5.0) {
    GlucoseSeries s{std::move(id), {}, {}};
    for (std::size_t i = 0; i < n; ++i) {
        s.timestamps.push_back(spacing * static_cast<double>(i));
        s.values.push_back(100.0 + static_cast<double>(i));
    }
    return s;
}

SampleWindow window_with(std::vector<double> features, double target) {
    SampleWindow w;
    w.patient_id = "W";
    w.features = std::move(features);
    w.target = target;
    return w;
}

std::vector<std::string> ids(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back("id" + std::to_string(i));
    return out;
}

}  // namespace

TEST_CASE("load_series groups, sorts and keeps first-appearance order") {
    std::istringstream in(
        "patient_id,timestamp_min,glucose_mgdl\n"
        "b,10,120\n"
        "a,0,90\n"
        "b,0,110\n"
        "b,5,115.5\n");
    const auto s = load_series(in);
    REQUIRE(s.size() == 2);
    CHECK(s[0].patient_id == "b");
    CHECK(s[0].timestamps == std::vector<double>{0, 5, 10});
    CHECK(s[0].values == std::vector<double>{110, 115.5, 120});
    CHECK(s[1].patient_id == "a");
}

TEST_CASE("load_series round-trips a 25-patient file with 5542 rows") {
    std::vector<GlucoseSeries> series;
    std::size_t total = 0;
    for (std::size_t p = 0; p < 25; ++p) {
        const std::size_t len = (p < 17) ? 222 : 221;
        auto s = synth_series(p + 1, 1, len, {"D" + std::to_string(p) + "_"}).front();
        total += s.size();
        series.push_back(std::move(s));
    }
    REQUIRE(total == 5542);
    std::stringstream buf;
    write_series(buf, series);
    const auto back = load_series(buf);
    REQUIRE(back.size() == 25);
    std::size_t sum = 0;
    for (std::size_t i = 0; i < back.size(); ++i) {
        sum += back[i].size();
        CHECK(back[i].values == series[i].values);
        CHECK(back[i].timestamps == series[i].timestamps);
    }
    CHECK(sum == 5542);
}

TEST_CASE("load_series edge cases") {
    std::istringstream empty("");
    CHECK(load_series(empty).empty());

    std::istringstream header_only("patient_id,timestamp_min,glucose_mgdl\n");
    CHECK(load_series(header_only).empty());

    std::istringstream high("patient_id,timestamp_min,glucose_mgdl\na,0,600\n");
    CHECK_THROWS_AS(load_series(high), DataError);

    std::istringstream zero("patient_id,timestamp_min,glucose_mgdl\na,0,0\n");
    CHECK_THROWS_AS(load_series(zero), DataError);

    std::istringstream dup("patient_id,timestamp_min,glucose_mgdl\na,0,100\na,0,101\n");
    CHECK_THROWS_AS(load_series(dup), DataError);

    std::istringstream bad_header("id,t,g\na,0,100\n");
    CHECK_THROWS_AS(load_series(bad_header), ParseError);

    std::istringstream bad_row("patient_id,timestamp_min,glucose_mgdl\na,0,100\na,5,abc\n");
    try {
        load_series(bad_row);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }

    std::istringstream short_row("patient_id,timestamp_min,glucose_mgdl\na,0\n");
    CHECK_THROWS_AS(load_series(short_row), ParseError);

    CHECK_THROWS_AS(load_series(std::filesystem::path("/nonexistent/file.csv")), DataError);
}

TEST_CASE("make_windows counts") {
    CHECK(make_windows(ramp(20), 7, 6).size() == 8);
    CHECK(make_windows(ramp(13), 7, 6).size() == 1);
    CHECK(make_windows(ramp(12), 7, 6).empty());
    CHECK(make_windows(ramp(0), 7, 6).empty());
    CHECK_THROWS_AS(make_windows(ramp(20), 0, 6), InvalidInput);
    CHECK_THROWS_AS(make_windows(ramp(20), 7, 0), InvalidInput);

    const auto w = make_windows(ramp(20), 7, 6);
    CHECK(w.front().index == 7);
    CHECK(w.back().index == 14);
}

TEST_CASE("window count formula on randomized lengths") {
    Engine eng(3);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = uniform_below(eng, 60);
        const std::size_t d = 1 + uniform_below(eng, 10);
        const std::size_t h = 1 + uniform_below(eng, 12);
        const std::size_t expect = (n + 1 > d + h) ? n + 1 - d - h : 0;
        CHECK(make_windows(ramp(n), d, h).size() == expect);
    }
}

TEST_CASE("windows are consistent with the series") {
    const auto s = synth_series(9, 1, 150).front();
    const auto ws = make_windows(s, 7, 6);
    for (const auto& w : ws) {
        const std::size_t j = w.index - 1;
        REQUIRE(w.features.size() == 7);
        CHECK(w.last_feature() == s.values[j]);
        CHECK(w.target == s.values[j + 6]);
        CHECK(w.time == s.timestamps[j]);
        CHECK(w.target_time == s.timestamps[j + 6]);
        for (std::size_t k = 0; k < 7; ++k) CHECK(w.features[k] == s.values[j - 6 + k]);
    }
}

TEST_CASE("gapped windows are dropped") {
    auto s = ramp(30);
    for (std::size_t i = 15; i < s.size(); ++i) s.timestamps[i] += 20.0;  // 25-minute gap after index 14
    const auto kept = make_windows(s, 7, 6);
    const auto all = make_windows(s, 7, 6, {5.0, false});
    CHECK(all.size() == 18);
    for (const auto& w : kept) {
        const std::size_t first = w.index - 7;
        const std::size_t target = w.index - 1 + 6;
        CHECK((target <= 14 || first >= 15));
    }
    CHECK(kept.size() == 18 - 12);

    auto ok = ramp(30);
    ok.timestamps[10] += 4.0;  // gaps of 9 and 1 minute, within 2x spacing
    CHECK(make_windows(ok, 7, 6).size() == 18);
}

TEST_CASE("split sizes and determinism") {
    const auto p = ids(25);
    CHECK(train_count(25, 50) == 13);
    CHECK(train_count(25, 30) == 8);
    const auto a = split_patients(p, 50, 42);
    CHECK(a.train_patients.size() == 13);
    CHECK(a.test_patients.size() == 12);
    CHECK(split_patients(p, 30, 1).train_patients.size() == 8);

    const auto b = split_patients(p, 50, 42);
    CHECK(a.train_patients == b.train_patients);
    CHECK(a.test_patients == b.test_patients);

    std::set<std::string> all(a.train_patients.begin(), a.train_patients.end());
    for (const auto& id : a.test_patients) {
        CHECK(all.insert(id).second);
        CHECK(a.is_test(id));
        CHECK_FALSE(a.is_train(id));
    }
    CHECK(all.size() == 25);

    bool differs = false;
    for (std::uint64_t seed = 0; seed < 10 && !differs; ++seed) {
        differs = split_patients(p, 50, seed).train_patients != a.train_patients;
    }
    CHECK(differs);
}

TEST_CASE("split is roughly uniform over patients") {
    const auto p = ids(10);
    std::vector<int> hits(10, 0);
    for (std::uint64_t seed = 0; seed < 4000; ++seed) {
        for (const auto& id : split_patients(p, 30, seed).train_patients) ++hits[std::stoi(id.substr(2))];
    }
    for (int h : hits) CHECK(std::abs(h - 1200) < 150);
}

TEST_CASE("split errors") {
    const auto p = ids(25);
    CHECK_THROWS_AS(split_patients(p, 0, 1), ConfigError);
    CHECK_THROWS_AS(split_patients(p, 100, 1), ConfigError);
    CHECK_THROWS_AS(split_patients(ids(1), 50, 1), ConfigError);
    CHECK_THROWS_AS(split_patients(ids(2), 10, 1), ConfigError);
    CHECK_THROWS_AS(split_patients(ids(2), 90, 1), ConfigError);
}

TEST_CASE("training stratification thresholds") {
    const std::vector<SampleWindow> ws{window_with({1}, 70),  window_with({1}, 70.0001), window_with({1}, 180),
                                       window_with({1}, 181), window_with({1}, 451),     window_with({1}, 450)};
    const auto r = stratify_training(ws);
    CHECK(r[GlycemicRange::Hypo].size() == 1);
    CHECK(r[GlycemicRange::Eu].size() == 2);
    CHECK(r[GlycemicRange::Hyper].size() == 2);
    CHECK(r.excluded == 1);
    CHECK(r.assigned() + r.excluded == ws.size());
}

TEST_CASE("test stratification routes by last feature") {
    const std::vector<SampleWindow> ws{window_with({300, 65}, 0), window_with({10, 100}, 0),
                                       window_with({10, 200}, 0), window_with({10, 470}, 0)};
    const auto r = stratify_test(ws);
    CHECK(r[0].size() == 1);
    CHECK(r[1].size() == 1);
    CHECK(r[2].size() == 2);
    CHECK(r[0][0].last_feature() == 65);
}

TEST_CASE("stratification partitions synthetic windows") {
    const auto series = synth_series(5, 6, 300);
    const auto ws = make_windows(series, 7, 6);
    const auto r = stratify_training(ws);
    CHECK(r.assigned() + r.excluded == ws.size());
    for (auto range : kAllRanges) {
        for (const auto& w : r[range]) CHECK(classify_glucose(w.target) == range);
    }
}

TEST_CASE("scaling fit and apply") {
    const std::vector<SampleWindow> a{window_with({80, 120}, 0), window_with({100, 90}, 0)};
    const auto p = fit_scaling(a);
    CHECK(p.max_val == 120);
    CHECK(p.min_val == 80);

    const std::vector<SampleWindow> d{window_with({40, 200}, 0), window_with({356, 100}, 0)};
    const auto pd = fit_scaling(d);
    CHECK(pd.max_val == 356);
    CHECK(pd.min_val == 40);
    CHECK(pd.scale(356) == 0.5);
    CHECK(pd.scale(40) == -0.5);
    CHECK(pd.scale(198) == 0.0);
    CHECK(pd.scale(400) == doctest::Approx(404.0 / 632.0).epsilon(1e-14));

    const auto scaled = apply_scaling(pd, window_with({40, 356, 198}, 77));
    CHECK(scaled.features == std::vector<double>{-0.5, 0.5, 0.0});
    CHECK(scaled.target == 77);

    CHECK_THROWS_AS(fit_scaling(std::vector<SampleWindow>{}), InvalidInput);
    CHECK_THROWS_AS(fit_scaling(std::vector<SampleWindow>{window_with({90, 90, 90}, 1)}), DegenerateData);
}

TEST_CASE("scaling round trip") {
    Engine eng(8);
    for (int i = 0; i < 1000; ++i) {
        const double m = 20 + 100 * uniform01(eng);
        const double big = m + 1 + 400 * uniform01(eng);
        const ScalingParams p{big, m};
        const double x = 500 * uniform01(eng);
        CHECK(std::abs(p.unscale(p.scale(x)) - x) <= 1e-12 * std::max(1.0, std::abs(x)));
        CHECK(p.scale(big) == 0.5);
        CHECK(p.scale(m) == -0.5);
    }
}

TEST_CASE("synth series contract") {
    const auto a = synth_series(7, 10, 240);
    const auto b = synth_series(7, 10, 240);
    REQUIRE(a.size() == 10);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].size() == 240);
        CHECK(a[i].values == b[i].values);
        CHECK(a[i].timestamps == b[i].timestamps);
        CHECK_NOTHROW(a[i].validate());
        for (double v : a[i].values) {
            CHECK(v >= 40.0);
            CHECK(v <= 400.0);
        }
    }
    CHECK(a[0].patient_id == "P001");
    CHECK(synth_series(8, 10, 240)[0].values != a[0].values);
}

TEST_CASE("synth series visit all three ranges") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        for (const auto& s : synth_series(seed, 5, 240)) {
            std::set<GlycemicRange> seen;
            for (double v : s.values) seen.insert(classify_glucose(v));
            CAPTURE(seed);
            CHECK(seen.size() == 3);
        }
    }
}
