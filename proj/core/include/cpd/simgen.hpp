#pragma once

// Seeded synthetic data: single-change scenarios with AR(1) noise,
// change-type series, the five-class mixture, and piecewise-constant
// signals with several changes.

#include <cpd/common.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cpd {

enum class Scenario { S1, S1prime, S2, S3 };
enum class Role { train, test };

std::string to_string(Scenario s);
/// Accepts "S1", "S1'", "S1prime", "S2", "S3" (case-insensitive).
Scenario parse_scenario(const std::string& name);

struct ScenarioSpec {
    Scenario scenario{Scenario::S1};
    std::size_t n{100};
    /// Dataset size N; must be even.
    std::size_t count{700};
    Role role{Role::train};
};

struct ExampleMeta {
    /// Change location (last index of the first segment); empty without change.
    std::optional<std::size_t> tau;
    /// Generating parameters by name (mu_left, mu_right, sigma_left, ...).
    std::map<std::string, double> params;
    /// AR(1) autocorrelations rho_t and innovations xi_t (scenario data only).
    std::vector<double> rho;
    std::vector<double> innovation;
    /// Change family the example was drawn from: mean, variance, slope,
    /// simultaneous or ar_coeff.
    std::string family;
    std::uint64_t seed{0};
};

struct Example {
    Series x;
    int label{0};
    ExampleMeta meta;
};

struct LabeledDataset {
    std::vector<Example> examples;

    std::size_t size() const noexcept { return examples.size(); }
    bool empty() const noexcept { return examples.empty(); }
    /// Common series length; 0 when empty. Throws ShapeError if lengths differ.
    std::size_t length() const;
    std::vector<int> labels() const;
};

/// b = sqrt(8 n log(20 n) / (tau (n - tau))).
double snr_base(std::size_t n, std::size_t tau);

/// eps_1 = xi_1, eps_t = rho_t eps_{t-1} + xi_t.
std::vector<double> ar1_noise(const std::vector<double>& rho, const std::vector<double>& innovation);

/// N/2 single mean changes (tau ~ U{2..n-2}, mu_L = 0, |mu_R| ~ U[0.5b, 1.5b]
/// for training or U[0.25b, 1.75b] for testing, random sign) and N/2 series
/// without change, plus scenario noise; shuffled.
LabeledDataset gen_scenario(const ScenarioSpec& spec, std::uint64_t seed);

enum class ChangeKind { mean, slope, variance, simultaneous, ar_coeff };

std::string to_string(ChangeKind kind);

struct ChangeTypeParams {
    std::size_t n{400};
    std::size_t tau{200};
    double mu_left{0.0};
    double mu_right{0.0};
    double sigma_left{0.5};
    double sigma_right{0.5};
    double slope_left{0.0};
    double slope_right{0.0};
    double ar_left{0.2};
    double ar_right{0.8};
};

/// One series of the given kind. Noise: N(0, 0.7^2) for mean, N(0, 0.5^2)
/// for slope, N(0, sigma^2) per segment for variance and simultaneous,
/// N(0, 0.25^2) innovations for ar_coeff. Label 1 iff the two segments differ.
Example gen_changetype(ChangeKind kind, const ChangeTypeParams& params, std::uint64_t seed);

enum class SnrRegime { weak, strong };

struct ParameterRange {
    double lower{0.0};
    double upper{0.0};
    /// Bounds on |first - second|.
    double diff_lower{0.0};
    double diff_upper{0.0};
};

struct MulticlassSpec {
    SnrRegime regime{SnrRegime::strong};
    std::size_t n{400};
    std::size_t per_class{100};
    /// tau ~ U{margin+1, ..., n-margin}
    std::size_t margin{40};
    ParameterRange mean;
    ParameterRange sigma;
    ParameterRange slope;

    static MulticlassSpec table(SnrRegime regime, std::size_t per_class);
};

inline constexpr std::size_t kMaxRejections = 1'000'000;

/// Classes 1 no change (alternating mean-model and variance-model draws),
/// 2 mean change, 3 variance change, 4 non-zero slope without change,
/// 5 slope change. per_class examples each, shuffled.
LabeledDataset gen_multiclass(const MulticlassSpec& spec, std::uint64_t seed);

struct PiecewiseSeries {
    Series x;
    /// Change locations tau_1 < ... < tau_nu; segment r covers (tau_{r-1}, tau_r].
    std::vector<std::size_t> taus;
    std::vector<double> means;
    std::uint64_t seed{0};
};

/// Piecewise-constant mean plus i.i.d. N(0, noise_sd^2). Requires
/// means.size() == taus.size() + 1 and every segment (including the first
/// and last) to be at least min_spacing long.
PiecewiseSeries gen_piecewise(std::size_t total_length, const std::vector<std::size_t>& taus,
                              const std::vector<double>& means, double noise_sd,
                              std::size_t min_spacing, std::uint64_t seed);

} // namespace cpd
