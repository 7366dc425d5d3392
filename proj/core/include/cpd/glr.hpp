#pragma once

// Likelihood-ratio scans for change-in-regression designs
//
//     X = Z beta + c_tau phi + Gamma xi,   xi ~ N(0, I),
//
// reduced to max_tau |v_tau' X| with one unit direction per candidate tau,
// plus the Gaussian single-change scans (variance, slope) and the
// BIC-based change-type selector built on them.

#include <cpd/common.hpp>

#include <Eigen/Dense>

#include <array>
#include <memory>
#include <optional>
#include <vector>

namespace cpd {

struct ChangeDesign {
    std::size_t n{0};
    /// Z, n x p, full column rank.
    Eigen::MatrixXd base;
    /// Candidate change locations and their covariate vectors c_tau (length n).
    std::vector<std::size_t> locations;
    std::vector<Eigen::VectorXd> change_covariates;
    /// Gamma; identity when empty.
    std::optional<Eigen::MatrixXd> noise;

    /// Z = 1, c_tau = 1{i > tau}, tau in [1, n-1].
    static ChangeDesign mean_change(std::size_t n);
    /// Z = [1, i], c_tau = max(0, i - tau), tau in [1, n-1]: a continuous
    /// piecewise-linear mean with a kink at tau.
    static ChangeDesign slope_change(std::size_t n);
};

struct GlrDirections {
    std::size_t n{0};
    std::vector<std::size_t> locations;
    /// Row k holds v_tau for locations[k]; zero when degenerate[k].
    Eigen::MatrixXd rows;
    std::vector<bool> degenerate;
};

/// Whitens by Gamma (linear solves), projects each c_tau onto the orthogonal
/// complement of col(Gamma^{-1} Z) and normalises. Throws DesignError for a
/// singular Gamma or rank-deficient Z.
GlrDirections glr_directions(const ChangeDesign& design);

/// max over non-degenerate tau of |v_tau' x|, smallest tau on ties.
/// Throws EmptyScan when every direction is degenerate.
ScanResult glr_statistic(SeriesView x, const GlrDirections& dirs);

/// Twice the Gaussian log-likelihood ratio for one change in variance around
/// a single global mean, maximised over tau in [2, n-2]. Segment variances are
/// floored at 1e-12.
ScanResult lr_variance_scan(SeriesView x);

/// GLR scan for a change in slope (cached slope design per length).
ScanResult slope_change_scan(SeriesView x);

enum class ChangeType { mean, variance, slope };

double oracle_statistic(SeriesView x, ChangeType type);
/// 1 iff oracle_statistic(x, type) > threshold.
int oracle_classify(SeriesView x, ChangeType type, double threshold);

/// Candidate models, in class order: 1 constant mean, 2 one mean change,
/// 3 one variance change, 4 linear trend, 5 one slope change.
struct AdaptiveFit {
    std::array<double, 5> log_likelihood{};
    std::array<double, 5> bic{};
    std::array<std::size_t, 5> location{};
    int label{1};
};

/// Free parameters per candidate model (sigma counted once per model).
inline constexpr std::array<int, 5> kAdaptiveParameterCounts{2, 4, 4, 3, 5};

AdaptiveFit adaptive_fit(SeriesView x);
int adaptive_classify(SeriesView x);

} // namespace cpd
