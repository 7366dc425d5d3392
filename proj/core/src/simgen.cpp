#include <cpd/simgen.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <utility>

namespace cpd {
namespace {

double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double normal(Rng& rng, double sd) {
    return std::normal_distribution<double>(0.0, sd)(rng);
}

// Draws (a, b) ~ U(lower, upper)^2 until diff_lower <= |a - b| <= diff_upper.
std::pair<double, double> draw_pair(Rng& rng, const ParameterRange& range) {
    for (std::size_t attempt = 0; attempt < kMaxRejections; ++attempt) {
        double a = uniform(rng, range.lower, range.upper);
        double b = uniform(rng, range.lower, range.upper);
        double d = std::abs(a - b);
        if (d >= range.diff_lower && d <= range.diff_upper) {
            return {a, b};
        }
    }
    throw GenerationError("difference constraint not met after " +
                          std::to_string(kMaxRejections) + " attempts");
}

double draw_nonzero_slope(Rng& rng, const ParameterRange& range) {
    for (std::size_t attempt = 0; attempt < kMaxRejections; ++attempt) {
        double s = uniform(rng, range.lower, range.upper);
        if (std::abs(s) >= range.diff_lower) {
            return s;
        }
    }
    throw GenerationError("no slope with |slope| >= " + std::to_string(range.diff_lower) +
                          " after " + std::to_string(kMaxRejections) + " attempts");
}

void check_range(const ParameterRange& r, const char* name) {
    if (!(r.lower < r.upper) || !(r.diff_lower < r.diff_upper) || r.diff_lower < 0.0) {
        throw ParameterError(std::string("invalid ") + name + " range");
    }
}

void shuffle_examples(std::vector<Example>& examples, std::uint64_t seed) {
    Rng rng(seed);
    std::shuffle(examples.begin(), examples.end(), rng);
}

Example scenario_example(const ScenarioSpec& spec, bool change, std::uint64_t seed) {
    Rng rng(seed);
    std::size_t n = spec.n;
    Example ex;
    ex.meta.seed = seed;
    ex.meta.family = "mean";

    double mu_left = 0.0;
    double mu_right = 0.0;
    std::size_t tau = n;
    if (change) {
        tau = uniform_index(rng, 2, n - 2);
        double b = snr_base(n, tau);
        double lo = spec.role == Role::train ? 0.5 : 0.25;
        double hi = spec.role == Role::train ? 1.5 : 1.75;
        double magnitude = uniform(rng, lo * b, hi * b);
        double sign = std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
        mu_right = sign * magnitude;
        ex.meta.tau = tau;
        ex.label = 1;
    }

    std::vector<double> rho(n, 0.0);
    std::vector<double> xi(n);
    switch (spec.scenario) {
    case Scenario::S1:
        for (auto& v : xi) v = normal(rng, 1.0);
        break;
    case Scenario::S1prime:
        std::fill(rho.begin() + 1, rho.end(), 0.7);
        for (auto& v : xi) v = normal(rng, 1.0);
        break;
    case Scenario::S2:
        for (std::size_t t = 1; t < n; ++t) rho[t] = uniform(rng, 0.0, 1.0);
        for (auto& v : xi) v = normal(rng, std::sqrt(2.0));
        break;
    case Scenario::S3: {
        std::cauchy_distribution<double> cauchy(0.0, 0.3);
        for (auto& v : xi) v = cauchy(rng);
        break;
    }
    }

    auto eps = ar1_noise(rho, xi);
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) {
        x[t] = (t < tau ? mu_left : mu_right) + eps[t];
    }
    ex.x = Series(std::move(x));
    ex.meta.params = {{"mu_left", mu_left}, {"mu_right", mu_right}};
    ex.meta.rho = std::move(rho);
    ex.meta.innovation = std::move(xi);
    return ex;
}

} // namespace

std::string to_string(Scenario s) {
    switch (s) {
    case Scenario::S1: return "S1";
    case Scenario::S1prime: return "S1'";
    case Scenario::S2: return "S2";
    case Scenario::S3: return "S3";
    }
    return "?";
}

Scenario parse_scenario(const std::string& name) {
    std::string key;
    for (char c : name) key.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (key == "S1") return Scenario::S1;
    if (key == "S1'" || key == "S1PRIME" || key == "S1P") return Scenario::S1prime;
    if (key == "S2") return Scenario::S2;
    if (key == "S3") return Scenario::S3;
    throw ParameterError("unknown scenario '" + name + "'");
}

std::string to_string(ChangeKind kind) {
    switch (kind) {
    case ChangeKind::mean: return "mean";
    case ChangeKind::slope: return "slope";
    case ChangeKind::variance: return "variance";
    case ChangeKind::simultaneous: return "simultaneous";
    case ChangeKind::ar_coeff: return "ar_coeff";
    }
    return "?";
}

std::size_t LabeledDataset::length() const {
    if (examples.empty()) {
        return 0;
    }
    std::size_t n = examples.front().x.size();
    for (const auto& ex : examples) {
        if (ex.x.size() != n) {
            throw ShapeError("dataset mixes series of different lengths");
        }
    }
    return n;
}

std::vector<int> LabeledDataset::labels() const {
    std::vector<int> out;
    out.reserve(examples.size());
    for (const auto& ex : examples) out.push_back(ex.label);
    return out;
}

double snr_base(std::size_t n, std::size_t tau) {
    if (n < 2 || tau < 1 || tau >= n) {
        throw ParameterError("snr_base requires 1 <= tau <= n-1");
    }
    double dn = static_cast<double>(n);
    double dt = static_cast<double>(tau);
    return std::sqrt(8.0 * dn * std::log(20.0 * dn) / (dt * (dn - dt)));
}

std::vector<double> ar1_noise(const std::vector<double>& rho, const std::vector<double>& innovation) {
    if (rho.size() != innovation.size()) {
        throw ShapeError("rho and innovation lengths differ");
    }
    std::vector<double> eps(innovation.size());
    for (std::size_t t = 0; t < eps.size(); ++t) {
        eps[t] = t == 0 ? innovation[0] : rho[t] * eps[t - 1] + innovation[t];
    }
    return eps;
}

LabeledDataset gen_scenario(const ScenarioSpec& spec, std::uint64_t seed) {
    if (spec.n < 4) {
        throw InvalidLength("scenario series need n >= 4");
    }
    if (spec.count == 0 || spec.count % 2 != 0) {
        throw ParameterError("dataset size must be even and positive");
    }
    LabeledDataset data;
    data.examples.resize(spec.count);
    std::size_t half = spec.count / 2;
    parallel_for(spec.count, [&](std::size_t k) {
        data.examples[k] = scenario_example(spec, k < half, derive_seed(seed, k));
    });
    shuffle_examples(data.examples, derive_seed(seed, spec.count));
    return data;
}

Example gen_changetype(ChangeKind kind, const ChangeTypeParams& p, std::uint64_t seed) {
    if (p.n < 4) {
        throw InvalidLength("change-type series need n >= 4");
    }
    if (p.tau < 1 || p.tau >= p.n) {
        throw ParameterError("tau must lie in [1, n-1]");
    }
    if (!(p.sigma_left > 0.0) || !(p.sigma_right > 0.0)) {
        throw ParameterError("segment standard deviations must be positive");
    }
    if (std::abs(p.ar_left) >= 1.0 || std::abs(p.ar_right) >= 1.0) {
        throw ParameterError("autoregressive coefficients must lie in (-1, 1)");
    }

    Rng rng(seed);
    std::size_t n = p.n;
    std::vector<double> x(n);
    Example ex;
    ex.meta.seed = seed;
    ex.meta.family = to_string(kind);
    bool change = false;

    switch (kind) {
    case ChangeKind::mean:
        for (std::size_t t = 0; t < n; ++t) {
            x[t] = (t < p.tau ? p.mu_left : p.mu_right) + normal(rng, 0.7);
        }
        change = p.mu_left != p.mu_right;
        ex.meta.params = {{"mu_left", p.mu_left}, {"mu_right", p.mu_right}};
        break;
    case ChangeKind::slope: {
        double tau = static_cast<double>(p.tau);
        for (std::size_t t = 0; t < n; ++t) {
            double time = static_cast<double>(t + 1);
            double trend = t < p.tau ? p.slope_left * time
                                     : (p.slope_left - p.slope_right) * tau + p.slope_right * time;
            x[t] = trend + normal(rng, 0.5);
        }
        change = p.slope_left != p.slope_right;
        ex.meta.params = {{"slope_left", p.slope_left}, {"slope_right", p.slope_right}};
        break;
    }
    case ChangeKind::variance:
        for (std::size_t t = 0; t < n; ++t) {
            x[t] = normal(rng, t < p.tau ? p.sigma_left : p.sigma_right);
        }
        change = p.sigma_left != p.sigma_right;
        ex.meta.params = {{"sigma_left", p.sigma_left}, {"sigma_right", p.sigma_right}};
        break;
    case ChangeKind::simultaneous:
        for (std::size_t t = 0; t < n; ++t) {
            bool left = t < p.tau;
            x[t] = (left ? p.mu_left : p.mu_right) + normal(rng, left ? p.sigma_left : p.sigma_right);
        }
        change = p.mu_left != p.mu_right || p.sigma_left != p.sigma_right;
        ex.meta.params = {{"mu_left", p.mu_left},
                          {"mu_right", p.mu_right},
                          {"sigma_left", p.sigma_left},
                          {"sigma_right", p.sigma_right}};
        break;
    case ChangeKind::ar_coeff: {
        // alpha_t = ar_left for t < tau, ar_right for t >= tau (1-based t).
        double prev = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            double alpha = t + 1 < p.tau ? p.ar_left : p.ar_right;
            double e = normal(rng, 0.25);
            x[t] = t == 0 ? e : alpha * prev + e;
            prev = x[t];
        }
        change = p.ar_left != p.ar_right;
        ex.meta.params = {{"ar_left", p.ar_left}, {"ar_right", p.ar_right}};
        break;
    }
    }

    ex.x = Series(std::move(x));
    ex.label = change ? 1 : 0;
    if (change) {
        ex.meta.tau = p.tau;
    }
    return ex;
}

MulticlassSpec MulticlassSpec::table(SnrRegime regime, std::size_t per_class) {
    MulticlassSpec spec;
    spec.regime = regime;
    spec.per_class = per_class;
    if (regime == SnrRegime::weak) {
        spec.mean = {-5.0, 5.0, 0.25, 0.5};
        spec.sigma = {0.3, 0.7, 0.12, 0.24};
        spec.slope = {-0.025, 0.025, 0.006, 0.012};
    } else {
        spec.mean = {-5.0, 5.0, 0.6, 1.2};
        spec.sigma = {0.3, 0.7, 0.2, 0.4};
        spec.slope = {-0.025, 0.025, 0.015, 0.03};
    }
    return spec;
}

LabeledDataset gen_multiclass(const MulticlassSpec& spec, std::uint64_t seed) {
    if (spec.n < 4 || 2 * spec.margin >= spec.n) {
        throw ParameterError("margin must satisfy 2 * margin < n");
    }
    if (spec.per_class == 0) {
        throw ParameterError("per_class must be positive");
    }
    check_range(spec.mean, "mean");
    check_range(spec.sigma, "sigma");
    check_range(spec.slope, "slope");
    if (spec.sigma.lower <= 0.0) {
        throw ParameterError("standard deviations must be positive");
    }

    std::size_t total = 5 * spec.per_class;
    LabeledDataset data;
    data.examples.resize(total);
    parallel_for(total, [&](std::size_t k) {
        int label = static_cast<int>(k / spec.per_class) + 1;
        std::size_t within = k % spec.per_class;
        std::uint64_t example_seed = derive_seed(seed, k);
        Rng rng(example_seed);

        ChangeTypeParams p;
        p.n = spec.n;
        p.tau = uniform_index(rng, spec.margin + 1, spec.n - spec.margin);
        ChangeKind kind = ChangeKind::mean;
        switch (label) {
        case 1:
            if (within % 2 == 0) {
                kind = ChangeKind::mean;
                p.mu_left = p.mu_right = uniform(rng, spec.mean.lower, spec.mean.upper);
            } else {
                kind = ChangeKind::variance;
                p.sigma_left = p.sigma_right = uniform(rng, spec.sigma.lower, spec.sigma.upper);
            }
            break;
        case 2:
            kind = ChangeKind::mean;
            std::tie(p.mu_left, p.mu_right) = draw_pair(rng, spec.mean);
            break;
        case 3:
            kind = ChangeKind::variance;
            std::tie(p.sigma_left, p.sigma_right) = draw_pair(rng, spec.sigma);
            break;
        case 4:
            kind = ChangeKind::slope;
            p.slope_left = p.slope_right = draw_nonzero_slope(rng, spec.slope);
            break;
        default:
            kind = ChangeKind::slope;
            std::tie(p.slope_left, p.slope_right) = draw_pair(rng, spec.slope);
            break;
        }
        Example ex = gen_changetype(kind, p, derive_seed(example_seed, 1));
        ex.label = label;
        ex.meta.seed = example_seed;
        ex.meta.params["tau_draw"] = static_cast<double>(p.tau);
        data.examples[k] = std::move(ex);
    });
    shuffle_examples(data.examples, derive_seed(seed, total));
    return data;
}

PiecewiseSeries gen_piecewise(std::size_t total_length, const std::vector<std::size_t>& taus,
                              const std::vector<double>& means, double noise_sd,
                              std::size_t min_spacing, std::uint64_t seed) {
    if (means.size() != taus.size() + 1) {
        throw ParameterError("need exactly one more mean than change-points");
    }
    if (!(noise_sd > 0.0)) {
        throw ParameterError("noise_sd must be positive");
    }
    if (total_length < 2) {
        throw InvalidLength("piecewise series need length >= 2");
    }
    std::size_t prev = 0;
    for (std::size_t r = 0; r <= taus.size(); ++r) {
        std::size_t next = r < taus.size() ? taus[r] : total_length;
        if (next <= prev || next - prev < min_spacing) {
            throw ParameterError("segment " + std::to_string(r + 1) + " is shorter than the spacing " +
                                 std::to_string(min_spacing));
        }
        prev = next;
    }

    Rng rng(seed);
    std::vector<double> x(total_length);
    std::size_t segment = 0;
    for (std::size_t t = 0; t < total_length; ++t) {
        while (segment < taus.size() && t >= taus[segment]) {
            ++segment;
        }
        x[t] = means[segment] + normal(rng, noise_sd);
    }
    return {Series(std::move(x)), taus, means, seed};
}

} // namespace cpd
