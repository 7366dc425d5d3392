#include <cpd/cusum.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>

namespace cpd {
namespace {

void require_length(std::size_t n, std::size_t min_n) {
    if (n < min_n) {
        throw InvalidLength("length " + std::to_string(n) + " is below the minimum " +
                            std::to_string(min_n));
    }
}

// Prefix sums of x - x_1, so constant input gives exactly zero contrasts.
std::vector<double> shifted_prefix_sums(SeriesView x) {
    std::vector<double> sums(x.size() + 1, 0.0);
    double origin = x[0];
    for (std::size_t i = 0; i < x.size(); ++i) {
        sums[i + 1] = sums[i] + (x[i] - origin);
    }
    return sums;
}

double contrast(const std::vector<double>& sums, std::size_t n, std::size_t i) {
    double left = sums[i];
    double right = sums[n] - sums[i];
    double dn = static_cast<double>(n);
    double di = static_cast<double>(i);
    double scale = std::sqrt(di * (dn - di) / dn);
    return scale * (left / di - right / (dn - di));
}

} // namespace

CusumBasis::CusumBasis(std::size_t n) : n_(n) {
    require_length(n, 2);
    vectors_.resize(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n));
    double dn = static_cast<double>(n);
    for (std::size_t i = 1; i < n; ++i) {
        double di = static_cast<double>(i);
        double left = std::sqrt((dn - di) / (di * dn));
        double right = -std::sqrt(di / ((dn - di) * dn));
        auto row = static_cast<Eigen::Index>(i - 1);
        for (std::size_t j = 0; j < n; ++j) {
            vectors_(row, static_cast<Eigen::Index>(j)) = j < i ? left : right;
        }
    }
}

SeriesView CusumBasis::vector(std::size_t i) const {
    if (i < 1 || i >= n_) {
        throw ParameterError("contrast index " + std::to_string(i) + " outside [1, n-1]");
    }
    return {vectors_.data() + (i - 1) * n_, n_};
}

std::shared_ptr<const CusumBasis> cusum_basis(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const CusumBasis>> cache;
    std::lock_guard lock(mutex);
    auto found = cache.find(n);
    if (found != cache.end()) {
        return found->second;
    }
    auto basis = std::make_shared<const CusumBasis>(n);
    cache.emplace(n, basis);
    return basis;
}

std::vector<double> cusum_transform(SeriesView x) {
    require_series(x);
    std::size_t n = x.size();
    auto sums = shifted_prefix_sums(x);
    std::vector<double> out(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
        out[i - 1] = contrast(sums, n, i);
    }
    return out;
}

ScanResult cusum_statistic(SeriesView x) {
    require_series(x);
    std::size_t n = x.size();
    auto sums = shifted_prefix_sums(x);
    ScanResult best{-1.0, 0};
    for (std::size_t i = 1; i < n; ++i) {
        double value = std::abs(contrast(sums, n, i));
        if (value > best.statistic) {
            best = {value, i};
        }
    }
    return best;
}

int cusum_classify(SeriesView x, double lambda) {
    if (!(lambda > 0.0)) {
        throw InvalidThreshold("CUSUM threshold must be positive");
    }
    return cusum_statistic(x).statistic > lambda ? 1 : 0;
}

DyadicGrid dyadic_grid(std::size_t n) {
    require_length(n, 4);
    std::size_t q_max = 0;
    while ((std::size_t{1} << (q_max + 1)) <= n / 2) {
        ++q_max;
    }
    DyadicGrid grid{n, {}};
    for (std::size_t q = 0; q <= q_max; ++q) {
        std::size_t p = std::size_t{1} << q;
        grid.indices.push_back(p);
        grid.indices.push_back(n - p);
    }
    std::sort(grid.indices.begin(), grid.indices.end());
    grid.indices.erase(std::unique(grid.indices.begin(), grid.indices.end()), grid.indices.end());
    return grid;
}

ScanResult cusum_star_statistic(SeriesView x, const DyadicGrid& grid) {
    require_series(x, 4);
    if (grid.n != x.size()) {
        throw InvalidLength("grid built for length " + std::to_string(grid.n) +
                            " applied to series of length " + std::to_string(x.size()));
    }
    auto sums = shifted_prefix_sums(x);
    ScanResult best{-1.0, 0};
    for (std::size_t t : grid.indices) {
        double value = std::abs(contrast(sums, grid.n, t));
        if (value > best.statistic) {
            best = {value, t};
        }
    }
    return best;
}

ScanResult cusum_star_statistic(SeriesView x) {
    return cusum_star_statistic(x, dyadic_grid(x.size()));
}

int cusum_star_classify(SeriesView x, const DyadicGrid& grid, double lambda_star) {
    if (!(lambda_star > 0.0)) {
        throw InvalidThreshold("CUSUM* threshold must be positive");
    }
    return cusum_star_statistic(x, grid).statistic > lambda_star ? 1 : 0;
}

int cusum_star_classify(SeriesView x, double lambda_star) {
    return cusum_star_classify(x, dyadic_grid(x.size()), lambda_star);
}

double null_threshold(std::size_t n, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw ParameterError("eps must lie in (0, 1)");
    }
    require_length(n, 2);
    return std::sqrt(2.0 * std::log(static_cast<double>(n) / eps));
}

double corollary_threshold(std::size_t n, double B) {
    if (!(B > 0.0)) {
        throw ParameterError("B must be positive");
    }
    require_length(n, 2);
    return B * std::sqrt(static_cast<double>(n)) / 2.0;
}

double star_threshold(std::size_t n, double B) {
    if (!(B > 0.0)) {
        throw ParameterError("B must be positive");
    }
    require_length(n, 2);
    return B * std::sqrt(3.0 * static_cast<double>(n)) / 6.0;
}

double star_null_threshold(std::size_t n, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw ParameterError("eps must lie in (0, 1)");
    }
    auto size = static_cast<double>(dyadic_grid(n).indices.size());
    return std::sqrt(2.0 * std::log(size / eps));
}

double threshold(ThresholdKind kind, std::size_t n, double param) {
    switch (kind) {
    case ThresholdKind::null_level:
        return null_threshold(n, param);
    case ThresholdKind::corollary:
        return corollary_threshold(n, param);
    case ThresholdKind::star:
        return star_threshold(n, param);
    }
    throw ParameterError("unknown threshold kind");
}

double error_bound(BoundKind kind, std::size_t n, double B) {
    if (!(B > 0.0)) {
        throw ParameterError("B must be positive");
    }
    double dn = static_cast<double>(n);
    switch (kind) {
    case BoundKind::cusum:
        require_length(n, 2);
        return dn * std::exp(-dn * B * B / 8.0);
    case BoundKind::star: {
        require_length(n, 4);
        auto log2n = static_cast<double>(std::bit_width(n) - 1);
        return 2.0 * log2n * std::exp(-dn * B * B / 24.0);
    }
    }
    throw ParameterError("unknown bound kind");
}

double snr(const SnrSpec& spec) {
    if (spec.n < 2 || spec.tau < 1 || spec.tau >= spec.n) {
        throw ParameterError("SNR requires 1 <= tau <= n-1");
    }
    double dn = static_cast<double>(spec.n);
    double dt = static_cast<double>(spec.tau);
    return std::abs(spec.mu_left - spec.mu_right) * std::sqrt(dt * (dn - dt)) / dn;
}

std::vector<double> step_cusum_profile(std::size_t n, std::size_t tau, double delta) {
    if (n < 2 || tau < 1 || tau >= n) {
        throw ParameterError("step profile requires 1 <= tau <= n-1");
    }
    double dn = static_cast<double>(n);
    double eta = static_cast<double>(tau) / dn;
    double d = std::abs(delta);
    std::vector<double> a(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
        double di = static_cast<double>(i);
        a[i - 1] = i <= tau ? d * (1.0 - eta) * std::sqrt(dn * di / (dn - di))
                            : d * eta * std::sqrt(dn * (dn - di) / di);
    }
    return a;
}

} // namespace cpd
