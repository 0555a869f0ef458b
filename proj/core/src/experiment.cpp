#include "glyco/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_set>

#include "glyco/csv.hpp"
#include "glyco/error.hpp"
#include "glyco/rng.hpp"

namespace glyco {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::vector<std::string> patient_ids(std::span<const GlucoseSeries> series) {
    std::vector<std::string> ids;
    std::unordered_set<std::string> seen;
    for (const auto& s : series) {
        if (!seen.insert(s.patient_id).second) {
            throw DataError("patient id " + s.patient_id + " appears in more than one series");
        }
        ids.push_back(s.patient_id);
    }
    return ids;
}

WindowOptions window_options(const ExperimentConfig& config) {
    return {config.sample_spacing_min, true};
}

// Windows of the selected patients, in series order; short series are reported.
std::vector<SampleWindow> windows_for(std::span<const GlucoseSeries> series,
                                      const std::unordered_set<std::string>& keep,
                                      const ExperimentConfig& config,
                                      std::vector<std::string>& warnings) {
    std::vector<SampleWindow> out;
    for (const auto& s : series) {
        if (!keep.contains(s.patient_id)) {
            continue;
        }
        auto w = make_windows(s, config.d, config.h, window_options(config));
        if (w.empty()) {
            warnings.push_back("patient " + s.patient_id + " yields no windows (" +
                               std::to_string(s.size()) + " readings)");
        }
        out.insert(out.end(), std::make_move_iterator(w.begin()), std::make_move_iterator(w.end()));
    }
    return out;
}

void check_no_leakage(std::span<const SampleWindow> train_w, std::span<const SampleWindow> test_w) {
    std::unordered_set<std::string> train_ids;
    for (const auto& w : train_w) {
        train_ids.insert(w.patient_id);
    }
    for (const auto& w : test_w) {
        if (train_ids.contains(w.patient_id)) {
            throw Error("patient " + w.patient_id + " leaked into both training and test windows");
        }
    }
}

template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

// Split, windows, stratification and scaled test features of one trial;
// shared by every parameter combination evaluated on that trial.
struct PreparedTrial {
    TrialReport report;
    std::vector<SampleWindow> test_windows;
    std::vector<double> scaled;  // row-major, d per test window
    std::vector<GlycemicRange> routed;
    std::optional<RangedModel> model;
};

PreparedTrial prepare_trial(const ExperimentConfig& config, std::span<const GlucoseSeries> all_series,
                            std::size_t trial) {
    PreparedTrial p;
    auto& rep = p.report;
    rep.trial = trial;
    rep.seed = mix_seed(config.seed, trial);

    auto t0 = Clock::now();
    const auto ids = patient_ids(all_series);
    rep.split = split_patients(ids, config.c_percent, rep.seed);
    const std::unordered_set<std::string> train_ids(rep.split.train_patients.begin(),
                                                    rep.split.train_patients.end());
    const std::unordered_set<std::string> test_ids(rep.split.test_patients.begin(),
                                                   rep.split.test_patients.end());
    auto train_w = windows_for(all_series, train_ids, config, rep.warnings);
    p.test_windows = windows_for(all_series, test_ids, config, rep.warnings);
    check_no_leakage(train_w, p.test_windows);
    rep.timing.split_ms = elapsed_ms(t0);

    t0 = Clock::now();
    if (train_w.empty()) {
        throw DataError("trial " + std::to_string(trial) + ": training patients yield no windows");
    }
    p.model.emplace(train(config, train_w));
    const auto& model = *p.model;
    rep.train_windows = train_w.size();
    rep.test_windows = p.test_windows.size();
    rep.excluded_targets = model.excluded_targets();
    for (const auto r : kAllRanges) {
        rep.train_counts[range_index(r)] = model.samples(r).size();
    }
    rep.warnings.insert(rep.warnings.end(), model.warnings().begin(), model.warnings().end());

    p.scaled.reserve(p.test_windows.size() * config.d);
    for (const auto& w : p.test_windows) {
        const auto r = classify_glucose(w.last_feature());
        p.routed.push_back(r);
        ++rep.test_counts[range_index(r)];
        if (model.effective_range(r) != r) {
            ++rep.fallbacks;
        }
        for (double x : w.features) {
            p.scaled.push_back(model.scaling().scale(x));
        }
    }
    rep.timing.train_ms = elapsed_ms(t0);
    return p;
}

// Predictions for the windows routed to `routed`, evaluated by the estimator of
// its effective range with the given n and q.
std::vector<double> predict_range(const PreparedTrial& p, const ExperimentConfig& config,
                                  GlycemicRange routed, int n, int q) {
    const auto& model = *p.model;
    const auto eff = model.effective_range(routed);
    const Estimator est(model.samples(eff), KernelParams{n, config.alpha[range_index(eff)], q});
    std::vector<double> out;
    const std::size_t d = config.d;
    for (std::size_t i = 0; i < p.routed.size(); ++i) {
        if (p.routed[i] == routed) {
            out.push_back(est(std::span<const double>(p.scaled.data() + i * d, d)));
        }
    }
    return out;
}

PredEgaGrid evaluate(const PreparedTrial& p, std::span<const double> predicted,
                     const ExperimentConfig& config, const ZoneTables& tables) {
    const auto points = make_eval_points(p.test_windows, predicted, config.rate_denominator);
    return build_grid(points, tables);
}

std::size_t position_of(const std::vector<int>& values, int v) {
    return static_cast<std::size_t>(std::find(values.begin(), values.end(), v) - values.begin());
}

}  // namespace

std::vector<EvalPoint> make_eval_points(std::span<const SampleWindow> windows,
                                        std::span<const double> predicted,
                                        RateDenominator denominator) {
    if (windows.size() != predicted.size()) {
        throw InvalidInput("make_eval_points: windows and predictions differ in length");
    }
    std::vector<EvalPoint> points(windows.size());
    std::size_t begin = 0;
    while (begin < windows.size()) {
        // maximal run of consecutive indices of one patient
        std::size_t end = begin + 1;
        while (end < windows.size() && windows[end].patient_id == windows[begin].patient_id &&
               windows[end].index == windows[end - 1].index + 1) {
            ++end;
        }
        const std::size_t len = end - begin;
        std::vector<double> times(len);
        std::vector<double> refs(len);
        for (std::size_t i = 0; i < len; ++i) {
            times[i] = windows[begin + i].time;
            refs[i] = windows[begin + i].target;
        }
        const auto pred = predicted.subspan(begin, len);
        const auto pred_rates = central_rates(pred, times, denominator);
        const auto ref_rates = central_rates(refs, times, denominator);
        for (std::size_t i = 0; i < len; ++i) {
            points[begin + i] = {pred[i], refs[i], pred_rates[i], ref_rates[i]};
        }
        begin = end;
    }
    return points;
}

TrialReport run_trial(const ExperimentConfig& config, std::span<const GlucoseSeries> all_series,
                      std::size_t trial, const ZoneTables& tables,
                      const PredictionOverride& override_predictions) {
    config.validate();
    auto p = prepare_trial(config, all_series, trial);
    auto t0 = Clock::now();
    std::vector<double> predicted;
    if (override_predictions) {
        predicted = override_predictions(p.test_windows);
        if (predicted.size() != p.test_windows.size()) {
            throw InvalidInput("prediction override returned the wrong number of values");
        }
    } else {
        predicted = predict(*p.model, p.test_windows).values;
    }
    p.report.timing.predict_ms = elapsed_ms(t0);
    t0 = Clock::now();
    p.report.grid = evaluate(p, predicted, config, tables);
    p.report.timing.evaluate_ms = elapsed_ms(t0);
    return std::move(p.report);
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                std::span<const GlucoseSeries> all_series, const ZoneTables& tables) {
    config.validate();
    ExperimentResult result;
    result.config = config;
    result.trials.resize(config.trials);
    parallel_for(config.trials, config.threads, [&](std::size_t t) {
        result.trials[t] = run_trial(config, all_series, t, tables);
    });
    std::vector<PredEgaGrid> grids;
    grids.reserve(result.trials.size());
    for (const auto& t : result.trials) {
        grids.push_back(t.grid);
    }
    result.averaged = average_grids(grids, config.averaging);
    return result;
}

CrossResult cross_dataset(const ExperimentConfig& config, std::span<const GlucoseSeries> train_series,
                          std::span<const GlucoseSeries> test_series, const ZoneTables& tables) {
    config.validate();
    CrossResult out;
    const auto train_ids = patient_ids(train_series);
    const auto test_ids = patient_ids(test_series);
    const std::unordered_set<std::string> train_set(train_ids.begin(), train_ids.end());
    const std::unordered_set<std::string> test_set(test_ids.begin(), test_ids.end());
    for (const auto& id : test_ids) {
        if (train_set.contains(id)) {
            ++out.shared_patients;
        }
    }
    out.in_sample = out.shared_patients > 0;
    if (out.in_sample) {
        out.warnings.push_back(std::to_string(out.shared_patients) +
                               " patient id(s) occur in both datasets; evaluation is in-sample");
    }
    const auto train_w = windows_for(train_series, train_set, config, out.warnings);
    const auto test_w = windows_for(test_series, test_set, config, out.warnings);
    if (!out.in_sample) {
        check_no_leakage(train_w, test_w);
    }
    const auto model = train(config, train_w);
    out.warnings.insert(out.warnings.end(), model.warnings().begin(), model.warnings().end());
    out.scaling = model.scaling();
    out.train_windows = train_w.size();
    out.test_windows = test_w.size();
    const auto pred = predict(model, test_w);
    out.fallbacks = pred.fallbacks;
    const auto points = make_eval_points(test_w, pred.values, config.rate_denominator);
    out.grid = build_grid(points, tables);
    return out;
}

std::vector<SweepRow> sweep(const ExperimentConfig& config, std::span<const GlucoseSeries> all_series,
                            const SweepSpec& spec, const ZoneTables& tables) {
    for (const auto& list : spec.n_values) {
        if (list.empty()) {
            throw ConfigError("sweep: empty n candidate list");
        }
    }
    if (spec.q_values.empty()) {
        throw ConfigError("sweep: empty q candidate list");
    }
    // Validate every candidate up front.
    for (int q : spec.q_values) {
        for (std::size_t r = 0; r < 3; ++r) {
            for (int n : spec.n_values[r]) {
                ExperimentConfig c = config;
                c.q = q;
                c.n[r] = n;
                c.validate();
            }
        }
    }

    // Split, stratification and scaling do not depend on (q, n); any valid
    // candidate serves for preparing the trials.
    ExperimentConfig base = config;
    base.q = spec.q_values.front();
    base.n = {spec.n_values[0].front(), spec.n_values[1].front(), spec.n_values[2].front()};
    base.validate();

    const auto& nv = spec.n_values;
    const std::size_t combos_per_q = nv[0].size() * nv[1].size() * nv[2].size();
    const std::size_t combos = spec.q_values.size() * combos_per_q;
    // grids[combo][trial]
    std::vector<std::vector<PredEgaGrid>> grids(combos, std::vector<PredEgaGrid>(config.trials));

    parallel_for(config.trials, config.threads, [&](std::size_t t) {
        const auto p = prepare_trial(base, all_series, t);
        for (std::size_t qi = 0; qi < spec.q_values.size(); ++qi) {
            const int q = spec.q_values[qi];
            // cache[r][k]: predictions for windows routed to r when the serving
            // range uses its k-th candidate n
            std::array<std::vector<std::vector<double>>, 3> cache;
            for (const auto r : kAllRanges) {
                const auto eff = range_index(p.model->effective_range(r));
                for (int n : nv[eff]) {
                    cache[range_index(r)].push_back(predict_range(p, config, r, n, q));
                }
            }
            std::vector<double> predicted(p.routed.size());
            std::size_t combo = qi * combos_per_q;
            for (int n0 : nv[0]) {
                for (int n1 : nv[1]) {
                    for (int n2 : nv[2]) {
                        const std::array<int, 3> chosen{n0, n1, n2};
                        std::array<std::size_t, 3> cursor{};
                        for (std::size_t i = 0; i < p.routed.size(); ++i) {
                            const auto r = range_index(p.routed[i]);
                            const auto eff = range_index(p.model->effective_range(p.routed[i]));
                            const auto k = position_of(nv[eff], chosen[eff]);
                            predicted[i] = cache[r][k][cursor[r]++];
                        }
                        grids[combo++][t] = evaluate(p, predicted, config, tables);
                    }
                }
            }
        }
    });

    std::vector<SweepRow> rows;
    rows.reserve(combos);
    std::size_t combo = 0;
    for (int q : spec.q_values) {
        for (int n0 : nv[0]) {
            for (int n1 : nv[1]) {
                for (int n2 : nv[2]) {
                    rows.push_back({q, {n0, n1, n2}, average_grids(grids[combo++], config.averaging)});
                }
            }
        }
    }
    const auto key = [](const SweepRow& row) {
        const auto& pct = row.averaged[GlycemicRange::Hypo].percent;
        return pct ? (*pct)[0] : -1.0;
    };
    std::stable_sort(rows.begin(), rows.end(),
                     [&](const SweepRow& a, const SweepRow& b) { return key(a) > key(b); });
    return rows;
}

std::vector<EvalPoint> load_prediction_points(std::istream& in, RateDenominator denominator) {
    struct Row {
        double t, pred, ref;
        std::size_t line;
    };
    constexpr std::string_view header = "patient_id,timestamp_min,predicted,reference";
    std::vector<std::string> order;
    std::map<std::string, std::vector<Row>, std::less<>> rows;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto f = csv::split(line);
        if (f.size() == 1 && f[0].empty()) {
            continue;
        }
        if (!have_header) {
            std::string joined;
            for (std::size_t i = 0; i < f.size(); ++i) {
                joined += (i ? "," : "") + std::string(f[i]);
            }
            if (joined != header) {
                throw ParseError(line_no, "expected header '" + std::string(header) + "'");
            }
            have_header = true;
            continue;
        }
        if (f.size() != 4 || f[0].empty()) {
            throw ParseError(line_no, "expected 4 fields");
        }
        Row r{0, 0, 0, line_no};
        if (!csv::parse_double(f[1], r.t) || !csv::parse_double(f[2], r.pred) ||
            !csv::parse_double(f[3], r.ref)) {
            throw ParseError(line_no, "non-numeric field");
        }
        auto it = rows.find(f[0]);
        if (it == rows.end()) {
            order.emplace_back(f[0]);
            it = rows.emplace(std::string(f[0]), std::vector<Row>{}).first;
        }
        it->second.push_back(r);
    }

    std::vector<EvalPoint> points;
    for (const auto& id : order) {
        auto& r = rows.find(id)->second;
        std::stable_sort(r.begin(), r.end(), [](const Row& a, const Row& b) { return a.t < b.t; });
        std::vector<double> t(r.size()), pred(r.size()), ref(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i > 0 && r[i].t == r[i - 1].t) {
                throw DataError("line " + std::to_string(r[i].line) + ": duplicate timestamp for " + id);
            }
            t[i] = r[i].t;
            pred[i] = r[i].pred;
            ref[i] = r[i].ref;
        }
        const auto pr = central_rates(pred, t, denominator);
        const auto rr = central_rates(ref, t, denominator);
        for (std::size_t i = 0; i < r.size(); ++i) {
            points.push_back({pred[i], ref[i], pr[i], rr[i]});
        }
    }
    return points;
}

}  // namespace glyco
