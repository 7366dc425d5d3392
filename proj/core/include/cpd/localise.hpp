#pragma once

// Sliding-window localisation: classify every length-n window, average the
// labels of the n windows covering each position, and report the argmax of
// every maximal run where that average reaches gamma.

#include <cpd/common.hpp>
#include <cpd/nn.hpp>

#include <functional>
#include <utility>
#include <vector>

namespace cpd {

struct WindowDecision {
    int label{0};
    double probability{0.0};
};

struct WindowClassifier {
    std::size_t window{0};
    std::function<WindowDecision(SeriesView)> decide;
};

/// 1{max |v_i'w| > lambda}; probability is 1 for a change and 0 otherwise.
WindowClassifier cusum_window(std::size_t n, double lambda);
/// Grid-restricted version of cusum_window.
WindowClassifier cusum_star_window(std::size_t n, double lambda);
/// Binary network applied through its own preprocessing.
WindowClassifier network_window(const Network& net, std::size_t n);

struct SlidingLabels {
    /// L_i for windows starting at i = 1..n*-n+1 (entry i-1).
    std::vector<int> labels;
    std::vector<double> probabilities;
};

SlidingLabels sliding_labels(SeriesView series, const WindowClassifier& psi);

struct LocalisationResult {
    std::size_t window{0};
    /// 1-based estimates, strictly increasing.
    std::vector<std::size_t> change_points;
    /// Maximal runs [s, e] (1-based, inclusive) with running mean >= gamma.
    std::vector<std::pair<std::size_t, std::size_t>> segments;
    /// Running mean at positions i = n..n*-n+1 (entry i-n).
    std::vector<double> running_mean;
    SlidingLabels sliding;
};

/// Throws InvalidLength when the series is shorter than twice the window and
/// ParameterError unless 0 < gamma <= 1.
LocalisationResult localise(SeriesView series, const WindowClassifier& psi, double gamma = 0.5);

} // namespace cpd
