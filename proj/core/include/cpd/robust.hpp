#pragma once

#include <cpd/common.hpp>

#include <vector>

namespace cpd {

/// Wilcoxon-type cumulative-sum statistic
///
///   T_n = max_{1<=k<n} | 2 sqrt(k(n-k))/n * n^{-3/2} * sum_{i<=k} sum_{j>k} (1{x_i < x_j} - 1/2) |
///
/// evaluated in O(n log n) with a rank-indexed Fenwick tree. Ties x_i = x_j
/// contribute -1/2 (strict indicator), so constant input is not zero.
ScanResult wilcoxon_statistic(SeriesView x);

/// Direct O(n^2) evaluation of the same double sum.
ScanResult wilcoxon_statistic_direct(SeriesView x);

/// 1 iff T_n > threshold.
int wilcoxon_classify(SeriesView x, double threshold);

struct TruncationSpec {
    double z{3.0};
};

/// Clips entries further than z population standard deviations from the mean
/// back to mean +/- z sigma. Constant input is returned unchanged.
std::vector<double> zscore_truncate(SeriesView x, const TruncationSpec& spec);

} // namespace cpd
