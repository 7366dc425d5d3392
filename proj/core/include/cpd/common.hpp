#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpd {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidLength : public Error {
public:
    using Error::Error;
};

class InvalidThreshold : public Error {
public:
    using Error::Error;
};

/// Out-of-range or inconsistent numeric parameter.
class ParameterError : public Error {
public:
    using Error::Error;
};

class DesignError : public Error {
public:
    using Error::Error;
};

class EmptyScan : public Error {
public:
    using Error::Error;
};

class GenerationError : public Error {
public:
    using Error::Error;
};

class TrainingError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

using SeriesView = std::span<const double>;

/// Throws InvalidLength if x is shorter than min_length and ParameterError
/// if any entry is not finite.
void require_series(SeriesView x, std::size_t min_length = 2);

/// A validated observation sequence x_1..x_n (n >= 2, all finite).
class Series {
public:
    Series() = default;
    explicit Series(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    SeriesView view() const noexcept { return values_; }
    operator SeriesView() const noexcept { return values_; }
    const std::vector<double>& values() const noexcept { return values_; }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    friend bool operator==(const Series&, const Series&) = default;

private:
    std::vector<double> values_;
};

/// Scan statistic together with the (1-based) location achieving it.
struct ScanResult {
    double statistic{0.0};
    std::size_t location{0};
};

using Rng = std::mt19937_64;

/// SplitMix64 mixing of (base, stream); used to derive independent
/// per-example and per-replication seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

/// Worker cap used by parallel_for. Defaults to hardware concurrency.
void set_max_threads(std::size_t threads);
std::size_t max_threads() noexcept;

/// Runs body(i) for i in [0, count). Each index must write only to its own
/// output slot, so results do not depend on the worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace cpd
