#pragma once

#include <cpd/common.hpp>
#include <cpd/glr.hpp>
#include <cpd/nn.hpp>
#include <cpd/simgen.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cpd {

using Classifier = std::function<int(const Example&)>;
using StatisticFn = std::function<double(const Example&)>;

struct ClassCounts {
    std::size_t total{0};
    std::size_t correct{0};
    double rate() const noexcept {
        return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
    }
};

struct EvalReport {
    double mer{0.0};
    double accuracy{1.0};
    std::size_t count{0};
    std::size_t errors{0};
    /// True-positive rate per true label.
    std::map<int, ClassCounts> per_class;
    std::optional<double> threshold;
    std::uint64_t seed{0};
    std::string fingerprint;
};

/// 64-bit FNV-1a over labels, change locations and raw value bytes, as hex.
std::string dataset_fingerprint(const LabeledDataset& data);

EvalReport mer(const Classifier& classifier, const LabeledDataset& data, std::uint64_t seed = 0);

/// Convenience wrappers.
Classifier threshold_classifier(StatisticFn statistic, double threshold);
Classifier network_classifier(const Network& net);

struct ThresholdGrid {
    std::size_t points{200};
    /// Defaults to the min and max of the training statistics.
    std::optional<double> lower;
    std::optional<double> upper;
};

struct ThresholdFit {
    double threshold{0.0};
    double training_mer{0.0};
};

/// Grid point minimising training MER of 1{statistic > t}; smallest on ties.
ThresholdFit tune_threshold(const StatisticFn& statistic, const LabeledDataset& train,
                            const ThresholdGrid& grid = {});
/// Same, on precomputed statistics and 0/1 labels.
ThresholdFit tune_threshold(const std::vector<double>& statistics, const std::vector<int>& labels,
                            const ThresholdGrid& grid = {});

enum class CheckKind { lemma3a, lemma3b, corollary1, theorem_localisation };

struct BoundCheckParams {
    std::size_t n{100};
    double eps{0.05};
    double B{0.8};
    /// SNR multiplier over the lemma3b signal condition.
    double snr_factor{1.05};
    /// Overrides the default threshold of the check when set.
    std::optional<double> lambda;

    // theorem_localisation
    std::size_t total_length{2400};
    std::size_t changes{3};
    double jump_lower{10.0};
    double jump_upper{14.0};
    double gamma{0.5};
    /// Location tolerance per change: tolerance_scale * B^2 / jump^2.
    double tolerance_scale{2.0};
};

struct BoundCheck {
    double empirical{0.0};
    double bound{0.0};
    double slack{0.0};
    bool pass{false};
    std::size_t reps{0};
};

/// lemma3a: false-positive rate of the null-level CUSUM test under N(0, I).
/// lemma3b: miss rate at SNR = snr_factor * sqrt(8 log(n/eps)/n), tau uniform.
/// corollary1: misclassification at lambda = B sqrt(n)/2 under a prior with
///   half no-change draws and half changes at SNR 1.001 B.
/// theorem_localisation: failure rate (wrong count or a location outside the
///   tolerance) of sliding-window CUSUM* localisation on piecewise-constant
///   Gaussian series; the bound is 0.05.
/// pass iff empirical <= bound + 3 sqrt(bound (1 - bound) / reps).
BoundCheck monte_carlo_bound_check(CheckKind kind, const BoundCheckParams& params, std::size_t reps,
                                   std::uint64_t seed);

/// Random piecewise-constant series for the localisation check: segment
/// lengths at least 2 * window, jumps of random sign with magnitude in
/// [jump_lower, jump_upper], unit noise.
PiecewiseSeries random_piecewise(const BoundCheckParams& params, std::uint64_t seed);

struct RmseReport {
    double rmse{0.0};
    std::size_t used{0};
    /// Cases with other than exactly one estimate.
    std::size_t failures{0};
};

RmseReport localisation_rmse(const std::vector<std::vector<std::size_t>>& estimates,
                             const std::vector<std::size_t>& truths);

/// Evaluates a binary classifier on a freshly generated test set of the
/// given scenario.
EvalReport cross_scenario(const Classifier& classifier, const ScenarioSpec& test, std::uint64_t seed);

/// Per-family thresholds of the change-type-aware likelihood-ratio classifier
/// on the five-class mixture.
struct OracleThresholds {
    double mean{0.0};
    double variance{0.0};
    double slope{0.0};
};

OracleThresholds tune_oracle(const LabeledDataset& train);
/// Applies the test matching meta.family: mean -> class 1 or 2, variance ->
/// class 1 or 3, slope -> class 4 or 5.
int oracle_multiclass(const Example& ex, const OracleThresholds& thresholds);

} // namespace cpd
