#pragma once

// CUSUM contrasts for a single change in mean, the dyadic-grid restriction
// used by the CUSUM* classifier, and the closed-form thresholds and
// classifier-error bounds that go with them.
//
// Locations are 1-based throughout: a change at tau splits x into
// x_1..x_tau and x_{tau+1}..x_n.

#include <cpd/common.hpp>

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace cpd {

/// Unit contrast vectors v_1..v_{n-1}. Row i-1 of matrix() holds v_i.
class CusumBasis {
public:
    using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    explicit CusumBasis(std::size_t n);

    std::size_t length() const noexcept { return n_; }
    const Matrix& matrix() const noexcept { return vectors_; }
    /// v_i for i in [1, n-1].
    SeriesView vector(std::size_t i) const;

private:
    std::size_t n_;
    Matrix vectors_;
};

/// Shared read-only basis for length n; built once per n and cached.
std::shared_ptr<const CusumBasis> cusum_basis(std::size_t n);

/// (v_1'x, ..., v_{n-1}'x), evaluated from prefix sums in O(n).
std::vector<double> cusum_transform(SeriesView x);

/// max_i |v_i'x| and the smallest maximising i.
ScanResult cusum_statistic(SeriesView x);

/// 1 iff ||C(x)||_inf > lambda (strict).
int cusum_classify(SeriesView x, double lambda);

/// T0 = {2^q} u {n - 2^q}, 0 <= q <= floor(log2(n/2)), sorted and deduplicated.
struct DyadicGrid {
    std::size_t n{0};
    std::vector<std::size_t> indices;
};

DyadicGrid dyadic_grid(std::size_t n);

/// max over t in grid of |v_t'x|; location is the smallest maximising t.
ScanResult cusum_star_statistic(SeriesView x, const DyadicGrid& grid);
ScanResult cusum_star_statistic(SeriesView x);

int cusum_star_classify(SeriesView x, double lambda_star);
int cusum_star_classify(SeriesView x, const DyadicGrid& grid, double lambda_star);

enum class ThresholdKind {
    null_level, ///< sqrt(2 log(n / eps))
    corollary,  ///< B sqrt(n) / 2
    star,       ///< B sqrt(3n) / 6
};

/// `param` is eps in (0,1) for null_level and B > 0 otherwise.
double threshold(ThresholdKind kind, std::size_t n, double param);

double null_threshold(std::size_t n, double eps);
double corollary_threshold(std::size_t n, double B);
double star_threshold(std::size_t n, double B);
/// sqrt(2 log(|T0| / eps)); the null-level threshold for the grid scan.
double star_null_threshold(std::size_t n, double eps);

enum class BoundKind { cusum, star };

/// First term of the misclassification bound: n e^{-nB^2/8} for the full
/// scan and 2 floor(log2 n) e^{-nB^2/24} for the grid scan.
double error_bound(BoundKind kind, std::size_t n, double B);

struct SnrSpec {
    std::size_t n{0};
    std::size_t tau{0};
    double mu_left{0.0};
    double mu_right{0.0};

    double eta() const noexcept { return static_cast<double>(tau) / static_cast<double>(n); }
};

/// |mu_L - mu_R| sqrt(tau (n - tau)) / n.
double snr(const SnrSpec& spec);

/// a_i = |v_i' mu| for a noiseless step of height delta at tau, i in [1, n-1],
/// from the closed form (1-eta) sqrt(n i/(n-i)) / eta sqrt(n (n-i)/i).
std::vector<double> step_cusum_profile(std::size_t n, std::size_t tau, double delta);

} // namespace cpd
