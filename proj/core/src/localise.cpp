#include <cpd/localise.hpp>

#include <cpd/cusum.hpp>

#include <memory>

namespace cpd {

WindowClassifier cusum_window(std::size_t n, double lambda) {
    if (!(lambda > 0.0)) {
        throw InvalidThreshold("window threshold must be positive");
    }
    if (n < 2) {
        throw InvalidLength("window length must be at least 2");
    }
    return {n, [lambda](SeriesView w) {
                int label = cusum_statistic(w).statistic > lambda ? 1 : 0;
                return WindowDecision{label, static_cast<double>(label)};
            }};
}

WindowClassifier cusum_star_window(std::size_t n, double lambda) {
    if (!(lambda > 0.0)) {
        throw InvalidThreshold("window threshold must be positive");
    }
    auto grid = std::make_shared<const DyadicGrid>(dyadic_grid(n));
    return {n, [lambda, grid](SeriesView w) {
                int label = cusum_star_statistic(w, *grid).statistic > lambda ? 1 : 0;
                return WindowDecision{label, static_cast<double>(label)};
            }};
}

WindowClassifier network_window(const Network& net, std::size_t n) {
    if (!net.binary()) {
        throw ShapeError("window classifiers need a binary network");
    }
    if (net.preprocess.input_dim(n) != net.arch.input_dim) {
        throw ShapeError("network input does not match window length " + std::to_string(n));
    }
    auto shared = std::make_shared<const Network>(net);
    return {n, [shared](SeriesView w) {
                auto r = classify_series(*shared, w);
                return WindowDecision{r.label, r.probability[0]};
            }};
}

SlidingLabels sliding_labels(SeriesView series, const WindowClassifier& psi) {
    std::size_t n = psi.window;
    if (n == 0 || !psi.decide) {
        throw ParameterError("window classifier is not set");
    }
    if (series.size() < n) {
        throw InvalidLength("series is shorter than the window");
    }
    std::size_t count = series.size() - n + 1;
    SlidingLabels out;
    out.labels.resize(count);
    out.probabilities.resize(count);
    parallel_for(count, [&](std::size_t i) {
        auto d = psi.decide(series.subspan(i, n));
        out.labels[i] = d.label;
        out.probabilities[i] = d.probability;
    });
    return out;
}

LocalisationResult localise(SeriesView series, const WindowClassifier& psi, double gamma) {
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        throw ParameterError("gamma must lie in (0, 1]");
    }
    std::size_t n = psi.window;
    if (n == 0 || series.size() < 2 * n) {
        throw InvalidLength("series length " + std::to_string(series.size()) +
                            " is below twice the window length " + std::to_string(n));
    }
    require_series(series);

    LocalisationResult result;
    result.window = n;
    result.sliding = sliding_labels(series, psi);
    const auto& labels = result.sliding.labels;
    std::size_t last = series.size() - n + 1;

    // Integer window counts keep the running mean exact.
    std::vector<long long> counts;
    counts.reserve(last - n + 1);
    long long sum = 0;
    for (std::size_t j = 1; j <= n; ++j) {
        sum += labels[j - 1];
    }
    counts.push_back(sum);
    for (std::size_t i = n + 1; i <= last; ++i) {
        sum += labels[i - 1] - labels[i - n - 1];
        counts.push_back(sum);
    }
    double dn = static_cast<double>(n);
    result.running_mean.reserve(counts.size());
    for (long long c : counts) {
        result.running_mean.push_back(static_cast<double>(c) / dn);
    }

    std::size_t k = 0;
    while (k < counts.size()) {
        if (result.running_mean[k] < gamma) {
            ++k;
            continue;
        }
        std::size_t start = k;
        std::size_t best = k;
        while (k < counts.size() && result.running_mean[k] >= gamma) {
            if (counts[k] > counts[best]) {
                best = k;
            }
            ++k;
        }
        result.segments.emplace_back(start + n, k - 1 + n);
        result.change_points.push_back(best + n);
    }
    return result;
}

} // namespace cpd
