#include <cpd/robust.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace cpd {
namespace {

// 2 sqrt(k(n-k))/n * n^{-3/2} * |half_sum| where half_sum = sum (1{.} - 1/2).
double wilcoxon_scale(std::size_t n, std::size_t k, double pair_sum) {
    double dn = static_cast<double>(n);
    double dk = static_cast<double>(k);
    return std::abs(2.0 * std::sqrt(dk * (dn - dk)) / dn / std::pow(dn, 1.5) * pair_sum);
}

class Fenwick {
public:
    explicit Fenwick(std::size_t size) : tree_(size + 1, 0) {}

    void add(std::size_t index) {
        for (std::size_t i = index + 1; i < tree_.size(); i += i & (~i + 1)) {
            ++tree_[i];
        }
    }

    /// Number of inserted ranks strictly below `index`.
    std::int64_t count_below(std::size_t index) const {
        std::int64_t total = 0;
        for (std::size_t i = index; i > 0; i -= i & (~i + 1)) {
            total += tree_[i];
        }
        return total;
    }

private:
    std::vector<std::int64_t> tree_;
};

} // namespace

ScanResult wilcoxon_statistic(SeriesView x) {
    require_series(x);
    std::size_t n = x.size();

    // Dense ranks: equal values share a rank, so "strictly below" excludes ties.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<std::size_t> rank(n);
    std::size_t distinct = 0;
    for (std::size_t r = 0; r < n; ++r) {
        if (r > 0 && x[order[r]] != x[order[r - 1]]) {
            ++distinct;
        }
        rank[order[r]] = distinct;
    }
    std::size_t levels = distinct + 1;

    // greater_total[i] = #{j : x_j > x_i}
    std::vector<std::int64_t> level_count(levels, 0);
    for (std::size_t i = 0; i < n; ++i) {
        ++level_count[rank[i]];
    }
    std::vector<std::int64_t> above(levels, 0);
    for (std::size_t r = levels - 1; r > 0; --r) {
        above[r - 1] = above[r] + level_count[r];
    }

    // wins = #{(i, j) : i <= k < j, x_i < x_j}, updated as k moves right:
    // wins_k = wins_{k-1} - #{i < k : x_i < x_k} + #{j > k : x_j > x_k}.
    Fenwick seen(levels);
    std::int64_t wins = 0;
    ScanResult best{-1.0, 0};
    for (std::size_t k = 1; k < n; ++k) {
        std::size_t idx = k - 1;
        std::int64_t below_before = seen.count_below(rank[idx]);
        std::int64_t seen_count = static_cast<std::int64_t>(idx);
        std::int64_t not_above_before = seen.count_below(rank[idx] + 1);
        std::int64_t above_before = seen_count - not_above_before;
        std::int64_t above_after = above[rank[idx]] - above_before;
        wins += above_after - below_before;
        seen.add(rank[idx]);

        auto pairs = static_cast<std::int64_t>(k) * static_cast<std::int64_t>(n - k);
        double pair_sum = static_cast<double>(2 * wins - pairs) / 2.0;
        double value = wilcoxon_scale(n, k, pair_sum);
        if (value > best.statistic) {
            best = {value, k};
        }
    }
    return best;
}

ScanResult wilcoxon_statistic_direct(SeriesView x) {
    require_series(x);
    std::size_t n = x.size();
    ScanResult best{-1.0, 0};
    for (std::size_t k = 1; k < n; ++k) {
        double pair_sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = k; j < n; ++j) {
                pair_sum += (x[i] < x[j] ? 1.0 : 0.0) - 0.5;
            }
        }
        double value = wilcoxon_scale(n, k, pair_sum);
        if (value > best.statistic) {
            best = {value, k};
        }
    }
    return best;
}

int wilcoxon_classify(SeriesView x, double threshold) {
    if (!(threshold > 0.0)) {
        throw InvalidThreshold("Wilcoxon threshold must be positive");
    }
    return wilcoxon_statistic(x).statistic > threshold ? 1 : 0;
}

std::vector<double> zscore_truncate(SeriesView x, const TruncationSpec& spec) {
    if (!(spec.z > 0.0)) {
        throw ParameterError("truncation level z must be positive");
    }
    require_series(x, 1);
    double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) {
        mean += v;
    }
    mean /= n;
    double var = 0.0;
    for (double v : x) {
        var += (v - mean) * (v - mean);
    }
    double sd = std::sqrt(var / n);

    std::vector<double> out(x.begin(), x.end());
    if (sd == 0.0) {
        return out;
    }
    double limit = spec.z * sd;
    for (double& v : out) {
        if (std::abs(v - mean) > limit) {
            v = v > mean ? mean + limit : mean - limit;
        }
    }
    return out;
}

} // namespace cpd
