#include <cpd/glr.hpp>

#include <cpd/cusum.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace cpd {
namespace {

constexpr double kVarianceFloor = 1e-12;
constexpr double kDegenerateTolerance = 1e-10;

Eigen::Map<const Eigen::VectorXd> as_vector(SeriesView x) {
    return {x.data(), static_cast<Eigen::Index>(x.size())};
}

std::shared_ptr<const GlrDirections> cached_slope_directions(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const GlrDirections>> cache;
    std::lock_guard lock(mutex);
    auto found = cache.find(n);
    if (found != cache.end()) {
        return found->second;
    }
    auto dirs = std::make_shared<const GlrDirections>(glr_directions(ChangeDesign::slope_change(n)));
    cache.emplace(n, dirs);
    return dirs;
}

double gaussian_loglik(double n, double variance) {
    return -0.5 * n * (std::log(2.0 * std::numbers::pi * variance) + 1.0);
}

// Residual sum of squares of the least-squares line through (i, x_i).
double linear_rss(SeriesView x) {
    double n = static_cast<double>(x.size());
    double mean_t = (n + 1.0) / 2.0;
    double mean_x = 0.0;
    for (double v : x) {
        mean_x += v;
    }
    mean_x /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dt = static_cast<double>(i + 1) - mean_t;
        double dx = x[i] - mean_x;
        sxx += dt * dt;
        sxy += dt * dx;
        syy += dx * dx;
    }
    return std::max(0.0, syy - sxy * sxy / sxx);
}

} // namespace

ChangeDesign ChangeDesign::mean_change(std::size_t n) {
    if (n < 2) {
        throw InvalidLength("mean-change design needs n >= 2");
    }
    ChangeDesign design;
    design.n = n;
    design.base = Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(n), 1);
    for (std::size_t tau = 1; tau < n; ++tau) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
        c.tail(static_cast<Eigen::Index>(n - tau)).setOnes();
        design.locations.push_back(tau);
        design.change_covariates.push_back(std::move(c));
    }
    return design;
}

ChangeDesign ChangeDesign::slope_change(std::size_t n) {
    if (n < 3) {
        throw InvalidLength("slope-change design needs n >= 3");
    }
    ChangeDesign design;
    design.n = n;
    auto rows = static_cast<Eigen::Index>(n);
    design.base.resize(rows, 2);
    for (Eigen::Index i = 0; i < rows; ++i) {
        design.base(i, 0) = 1.0;
        design.base(i, 1) = static_cast<double>(i + 1);
    }
    for (std::size_t tau = 1; tau < n; ++tau) {
        Eigen::VectorXd c(rows);
        for (Eigen::Index i = 0; i < rows; ++i) {
            c(i) = std::max(0.0, static_cast<double>(i + 1) - static_cast<double>(tau));
        }
        design.locations.push_back(tau);
        design.change_covariates.push_back(std::move(c));
    }
    return design;
}

GlrDirections glr_directions(const ChangeDesign& design) {
    auto n = static_cast<Eigen::Index>(design.n);
    if (design.n < 2 || design.base.rows() != n || design.base.cols() < 1) {
        throw DesignError("base covariates must be an n x p matrix with p >= 1");
    }
    if (design.locations.size() != design.change_covariates.size()) {
        throw DesignError("one change covariate is required per location");
    }

    std::optional<Eigen::FullPivLU<Eigen::MatrixXd>> whitening;
    std::optional<Eigen::FullPivLU<Eigen::MatrixXd>> whitening_t;
    if (design.noise) {
        const auto& gamma = *design.noise;
        if (gamma.rows() != n || gamma.cols() != n) {
            throw DesignError("noise matrix must be n x n");
        }
        whitening.emplace(gamma);
        if (!whitening->isInvertible()) {
            throw DesignError("noise matrix is singular");
        }
        whitening_t.emplace(gamma.transpose());
    }

    Eigen::MatrixXd z_white = whitening ? Eigen::MatrixXd(whitening->solve(design.base)) : design.base;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(z_white);
    if (qr.rank() < design.base.cols()) {
        throw DesignError("base covariates are rank deficient");
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> thin(z_white);
    Eigen::MatrixXd q = thin.householderQ() * Eigen::MatrixXd::Identity(n, design.base.cols());

    GlrDirections dirs;
    dirs.n = design.n;
    dirs.locations = design.locations;
    dirs.rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(design.locations.size()), n);
    dirs.degenerate.assign(design.locations.size(), false);

    for (std::size_t k = 0; k < design.locations.size(); ++k) {
        const auto& c = design.change_covariates[k];
        if (c.size() != n) {
            throw DesignError("change covariate for tau=" + std::to_string(design.locations[k]) +
                              " has the wrong length");
        }
        Eigen::VectorXd c_white = whitening ? Eigen::VectorXd(whitening->solve(c)) : c;
        Eigen::VectorXd residual = c_white - q * (q.transpose() * c_white);
        double norm = residual.norm();
        if (norm < kDegenerateTolerance * c_white.norm() || norm == 0.0) {
            dirs.degenerate[k] = true;
            continue;
        }
        Eigen::VectorXd unit = residual / norm;
        // v' x = unit' Gamma^{-1} x, so v = Gamma^{-T} unit.
        Eigen::VectorXd v = whitening_t ? Eigen::VectorXd(whitening_t->solve(unit)) : unit;
        dirs.rows.row(static_cast<Eigen::Index>(k)) = v.transpose();
    }
    return dirs;
}

ScanResult glr_statistic(SeriesView x, const GlrDirections& dirs) {
    require_series(x);
    if (x.size() != dirs.n) {
        throw InvalidLength("series length does not match the design");
    }
    Eigen::VectorXd projections = dirs.rows * as_vector(x);
    ScanResult best{-1.0, 0};
    for (std::size_t k = 0; k < dirs.locations.size(); ++k) {
        if (dirs.degenerate[k]) {
            continue;
        }
        double value = std::abs(projections(static_cast<Eigen::Index>(k)));
        if (value > best.statistic ||
            (value == best.statistic && dirs.locations[k] < best.location)) {
            best = {value, dirs.locations[k]};
        }
    }
    if (best.location == 0) {
        throw EmptyScan("every change direction is degenerate");
    }
    return best;
}

ScanResult lr_variance_scan(SeriesView x) {
    require_series(x, 4);
    std::size_t n = x.size();
    double mean = 0.0;
    for (double v : x) {
        mean += v;
    }
    mean /= static_cast<double>(n);

    std::vector<double> sums(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double d = x[i] - mean;
        sums[i + 1] = sums[i] + d * d;
    }
    double dn = static_cast<double>(n);
    double total = std::max(sums[n] / dn, kVarianceFloor);

    ScanResult best{-1.0, 0};
    for (std::size_t tau = 2; tau + 2 <= n; ++tau) {
        double dt = static_cast<double>(tau);
        double left = std::max(sums[tau] / dt, kVarianceFloor);
        double right = std::max((sums[n] - sums[tau]) / (dn - dt), kVarianceFloor);
        double value = dn * std::log(total) - dt * std::log(left) - (dn - dt) * std::log(right);
        value = std::max(0.0, value);
        if (value > best.statistic) {
            best = {value, tau};
        }
    }
    return best;
}

ScanResult slope_change_scan(SeriesView x) {
    require_series(x, 3);
    return glr_statistic(x, *cached_slope_directions(x.size()));
}

double oracle_statistic(SeriesView x, ChangeType type) {
    switch (type) {
    case ChangeType::mean:
        return cusum_statistic(x).statistic;
    case ChangeType::variance:
        return lr_variance_scan(x).statistic;
    case ChangeType::slope:
        return slope_change_scan(x).statistic;
    }
    throw ParameterError("unknown change type");
}

int oracle_classify(SeriesView x, ChangeType type, double threshold) {
    return oracle_statistic(x, type) > threshold ? 1 : 0;
}

AdaptiveFit adaptive_fit(SeriesView x) {
    require_series(x, 4);
    double n = static_cast<double>(x.size());

    double mean = 0.0;
    for (double v : x) {
        mean += v;
    }
    mean /= n;
    double rss_constant = 0.0;
    for (double v : x) {
        rss_constant += (v - mean) * (v - mean);
    }

    AdaptiveFit fit;

    // Each two-segment or kinked fit reduces the RSS of its no-change model
    // by the squared maximal contrast.
    auto mean_scan = cusum_statistic(x);
    double rss_mean = std::max(0.0, rss_constant - mean_scan.statistic * mean_scan.statistic);

    auto variance_scan = lr_variance_scan(x);
    double total = std::max(rss_constant / n, kVarianceFloor);

    double rss_linear = linear_rss(x);
    auto slope_scan = slope_change_scan(x);
    double rss_slope = std::max(0.0, rss_linear - slope_scan.statistic * slope_scan.statistic);

    fit.log_likelihood[0] = gaussian_loglik(n, total);
    fit.log_likelihood[1] = gaussian_loglik(n, std::max(rss_mean / n, kVarianceFloor));
    // n log s0 - stat = tau log s1 + (n - tau) log s2 at the maximiser.
    fit.log_likelihood[2] = -0.5 * n * (std::log(2.0 * std::numbers::pi) + 1.0) -
                            0.5 * (n * std::log(total) - variance_scan.statistic);
    fit.log_likelihood[3] = gaussian_loglik(n, std::max(rss_linear / n, kVarianceFloor));
    fit.log_likelihood[4] = gaussian_loglik(n, std::max(rss_slope / n, kVarianceFloor));

    fit.location = {0, mean_scan.location, variance_scan.location, 0, slope_scan.location};

    double log_n = std::log(n);
    for (std::size_t k = 0; k < 5; ++k) {
        fit.bic[k] = -2.0 * fit.log_likelihood[k] + kAdaptiveParameterCounts[k] * log_n;
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < 5; ++k) {
        if (fit.bic[k] < fit.bic[best]) {
            best = k;
        }
    }
    fit.label = static_cast<int>(best) + 1;
    return fit;
}

int adaptive_classify(SeriesView x) {
    return adaptive_fit(x).label;
}

} // namespace cpd
