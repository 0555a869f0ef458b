#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "glyco/config.hpp"
#include "glyco/model.hpp"
#include "glyco/pred_ega.hpp"
#include "glyco/series.hpp"
#include "glyco/split.hpp"
#include "glyco/windows.hpp"

namespace glyco {

struct PhaseTiming {
    double split_ms = 0.0;
    double train_ms = 0.0;
    double predict_ms = 0.0;
    double evaluate_ms = 0.0;
};

struct TrialReport {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    SplitSpec split;
    PredEgaGrid grid;
    std::array<std::size_t, 3> train_counts{};  ///< training windows per range (by target)
    std::array<std::size_t, 3> test_counts{};   ///< test windows per range (by last reading)
    std::size_t train_windows = 0;
    std::size_t test_windows = 0;
    std::size_t excluded_targets = 0;  ///< training targets above 450 mg/dL
    std::size_t fallbacks = 0;
    std::vector<std::string> warnings;
    PhaseTiming timing;
};

struct ExperimentResult {
    ExperimentConfig config;
    PredEgaGrid averaged;
    std::vector<TrialReport> trials;
};

/// Replaces the estimator output inside a trial, e.g. with the references
/// themselves to check the evaluation path.
using PredictionOverride =
    std::function<std::vector<double>(std::span<const SampleWindow> test_windows)>;

/// Pairs predictions with the true series. Windows must be ordered by
/// (patient, index); rates are formed only between windows j-1 and j+1 of
/// the same patient, for both the reference targets and the predictions.
std::vector<EvalPoint> make_eval_points(std::span<const SampleWindow> windows,
                                        std::span<const double> predicted,
                                        RateDenominator denominator);

/// One random split plus train, predict and PRED-EGA on the test patients.
/// The split seed is mix_seed(config.seed, trial).
TrialReport run_trial(const ExperimentConfig& config, std::span<const GlucoseSeries> all_series,
                      std::size_t trial, const ZoneTables& tables = ZoneTables::builtin(),
                      const PredictionOverride& override_predictions = {});

/// config.trials independent trials and their averaged grid.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                std::span<const GlucoseSeries> all_series,
                                const ZoneTables& tables = ZoneTables::builtin());

struct CrossResult {
    PredEgaGrid grid;
    ScalingParams scaling;
    bool in_sample = false;          ///< some patient id occurs in both datasets
    std::size_t shared_patients = 0;
    std::size_t train_windows = 0;
    std::size_t test_windows = 0;
    std::size_t fallbacks = 0;
    std::vector<std::string> warnings;
};

/// Trains on every patient of `train_series` and evaluates on every patient
/// of `test_series`.
CrossResult cross_dataset(const ExperimentConfig& config, std::span<const GlucoseSeries> train_series,
                          std::span<const GlucoseSeries> test_series,
                          const ZoneTables& tables = ZoneTables::builtin());

struct SweepSpec {
    std::array<std::vector<int>, 3> n_values;  ///< candidates for n per range
    std::vector<int> q_values;
};

struct SweepRow {
    int q = 0;
    std::array<int, 3> n{};
    PredEgaGrid averaged;
};

/// Runs the experiment for every (q, n_hypo, n_eu, n_hyper) combination on
/// the same per-trial splits and returns rows ranked by hypoglycemia
/// Accurate percentage (descending, ties keep enumeration order).
/// Throws ConfigError if any candidate list is empty.
std::vector<SweepRow> sweep(const ExperimentConfig& config, std::span<const GlucoseSeries> all_series,
                            const SweepSpec& spec, const ZoneTables& tables = ZoneTables::builtin());

/// Reads `patient_id,timestamp_min,predicted,reference` CSV and pairs rows of
/// each patient in time order, rates taken between neighbouring rows.
std::vector<EvalPoint> load_prediction_points(std::istream& in, RateDenominator denominator);

}  // namespace glyco
