#pragma once

#include <cpd/common.hpp>

#include <string>
#include <vector>

namespace cpd {

/// (x_j - min) / (max - min); all zeros for constant input.
std::vector<double> unit_scale(SeriesView x);

/// x_t x_{t+1} for t = 1..n-1, zero-padded to length n.
std::vector<double> lag_product(SeriesView x);

struct PreprocessStep {
    enum class Kind { unit_scale, square, lag_product, zscore_truncate };
    Kind kind{Kind::unit_scale};
    /// Truncation level for zscore_truncate.
    double z{3.0};

    friend bool operator==(const PreprocessStep&, const PreprocessStep&) = default;
};

/// Input channels, each produced by applying its steps in order to the raw
/// series. Channels are concatenated, so the network input has
/// channels * n entries. No channels means the raw series is passed through.
struct Preprocess {
    std::vector<std::vector<PreprocessStep>> channels;

    std::size_t channel_count() const noexcept { return channels.empty() ? 1 : channels.size(); }
    std::size_t input_dim(std::size_t n) const noexcept { return channel_count() * n; }

    /// Text form: channels separated by '|', steps by '+', e.g.
    /// "unit_scale|unit_scale+square" or "zscore_truncate:3+unit_scale".
    /// "identity" or "" is the raw series.
    std::string to_string() const;
    static Preprocess parse(const std::string& text);

    /// The standard single-channel [0, 1] rescaling.
    static Preprocess unit();

    friend bool operator==(const Preprocess&, const Preprocess&) = default;
};

std::vector<double> preprocess(SeriesView x, const Preprocess& spec);

} // namespace cpd
