#include <cpd/eval.hpp>

#include <cpd/cusum.hpp>
#include <cpd/localise.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>

namespace cpd {
namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_bytes(std::uint64_t& h, const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= kFnvPrime;
    }
}

template <typename T>
void fnv_value(std::uint64_t& h, T v) {
    fnv_bytes(h, &v, sizeof v);
}

double binomial_slack(double bound, std::size_t reps) {
    return 3.0 * std::sqrt(bound * (1.0 - bound) / static_cast<double>(reps));
}

std::vector<double> standard_normal(Rng& rng, std::size_t n) {
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> x(n);
    for (auto& v : x) v = dist(rng);
    return x;
}

// Adds a step of height delta after position tau (1-based).
void add_step(std::vector<double>& x, std::size_t tau, double delta) {
    for (std::size_t t = tau; t < x.size(); ++t) x[t] += delta;
}

} // namespace

std::string dataset_fingerprint(const LabeledDataset& data) {
    std::uint64_t h = kFnvOffset;
    fnv_value(h, static_cast<std::uint64_t>(data.size()));
    for (const auto& ex : data.examples) {
        fnv_value(h, static_cast<std::int64_t>(ex.label));
        fnv_value(h, static_cast<std::uint64_t>(ex.meta.tau.value_or(0)));
        fnv_value(h, static_cast<std::uint64_t>(ex.x.size()));
        fnv_bytes(h, ex.x.values().data(), ex.x.size() * sizeof(double));
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

EvalReport mer(const Classifier& classifier, const LabeledDataset& data, std::uint64_t seed) {
    if (data.empty()) {
        throw ShapeError("cannot evaluate on an empty dataset");
    }
    std::vector<int> predicted(data.size());
    parallel_for(data.size(), [&](std::size_t k) { predicted[k] = classifier(data.examples[k]); });

    EvalReport report;
    report.count = data.size();
    report.seed = seed;
    report.fingerprint = dataset_fingerprint(data);
    for (std::size_t k = 0; k < data.size(); ++k) {
        int truth = data.examples[k].label;
        auto& cls = report.per_class[truth];
        ++cls.total;
        if (predicted[k] == truth) {
            ++cls.correct;
        } else {
            ++report.errors;
        }
    }
    report.mer = static_cast<double>(report.errors) / static_cast<double>(report.count);
    report.accuracy = 1.0 - report.mer;
    return report;
}

Classifier threshold_classifier(StatisticFn statistic, double threshold) {
    return [statistic = std::move(statistic), threshold](const Example& ex) {
        return statistic(ex) > threshold ? 1 : 0;
    };
}

Classifier network_classifier(const Network& net) {
    auto shared = std::make_shared<const Network>(net);
    return [shared](const Example& ex) { return classify_series(*shared, ex.x).label; };
}

ThresholdFit tune_threshold(const std::vector<double>& statistics, const std::vector<int>& labels,
                            const ThresholdGrid& grid) {
    if (statistics.empty()) {
        throw ShapeError("cannot tune a threshold on an empty dataset");
    }
    if (statistics.size() != labels.size()) {
        throw ShapeError("one label is required per statistic");
    }
    if (grid.points == 0) {
        throw ParameterError("threshold grid is empty");
    }
    auto [min_it, max_it] = std::minmax_element(statistics.begin(), statistics.end());
    double lo = grid.lower.value_or(*min_it);
    double hi = grid.upper.value_or(*max_it);
    if (hi < lo) {
        throw ParameterError("threshold grid upper bound is below the lower bound");
    }

    ThresholdFit best{lo, 2.0};
    double count = static_cast<double>(statistics.size());
    for (std::size_t g = 0; g < grid.points; ++g) {
        double t = grid.points == 1 ? lo
                                    : lo + (hi - lo) * static_cast<double>(g) /
                                               static_cast<double>(grid.points - 1);
        std::size_t errors = 0;
        for (std::size_t k = 0; k < statistics.size(); ++k) {
            int predicted = statistics[k] > t ? 1 : 0;
            errors += predicted != labels[k] ? 1 : 0;
        }
        double rate = static_cast<double>(errors) / count;
        if (rate < best.training_mer) {
            best = {t, rate};
        }
    }
    return best;
}

ThresholdFit tune_threshold(const StatisticFn& statistic, const LabeledDataset& train,
                            const ThresholdGrid& grid) {
    if (train.empty()) {
        throw ShapeError("cannot tune a threshold on an empty dataset");
    }
    std::vector<double> stats(train.size());
    parallel_for(train.size(), [&](std::size_t k) { stats[k] = statistic(train.examples[k]); });
    return tune_threshold(stats, train.labels(), grid);
}

PiecewiseSeries random_piecewise(const BoundCheckParams& p, std::uint64_t seed) {
    std::size_t spacing = 2 * p.n;
    std::size_t segments = p.changes + 1;
    if (p.total_length < segments * spacing) {
        throw ParameterError("total length cannot hold the requested changes at spacing 2n");
    }
    if (!(p.jump_lower > 0.0 && p.jump_lower <= p.jump_upper)) {
        throw ParameterError("invalid jump range");
    }
    Rng rng(seed);
    std::size_t extra = p.total_length - segments * spacing;
    std::uniform_int_distribution<std::size_t> offset(0, extra);
    std::vector<std::size_t> offsets(p.changes);
    for (auto& o : offsets) o = offset(rng);
    std::sort(offsets.begin(), offsets.end());

    std::vector<std::size_t> taus(p.changes);
    std::vector<double> means(segments, 0.0);
    std::uniform_real_distribution<double> jump(p.jump_lower, p.jump_upper);
    std::bernoulli_distribution sign(0.5);
    for (std::size_t r = 0; r < p.changes; ++r) {
        taus[r] = (r + 1) * spacing + offsets[r];
        double size = jump(rng);
        means[r + 1] = means[r] + (sign(rng) ? size : -size);
    }
    return gen_piecewise(p.total_length, taus, means, 1.0, spacing, derive_seed(seed, 1));
}

BoundCheck monte_carlo_bound_check(CheckKind kind, const BoundCheckParams& p, std::size_t reps,
                                   std::uint64_t seed) {
    if (reps < 1000) {
        throw ParameterError("Monte Carlo checks need at least 1000 replications");
    }
    std::vector<char> failed(reps, 0);
    BoundCheck check;
    check.reps = reps;

    switch (kind) {
    case CheckKind::lemma3a: {
        double lambda = p.lambda.value_or(null_threshold(p.n, p.eps));
        check.bound = p.eps;
        parallel_for(reps, [&](std::size_t r) {
            Rng rng(derive_seed(seed, r));
            auto x = standard_normal(rng, p.n);
            failed[r] = cusum_statistic(x).statistic > lambda;
        });
        break;
    }
    case CheckKind::lemma3b: {
        double lambda = p.lambda.value_or(null_threshold(p.n, p.eps));
        double dn = static_cast<double>(p.n);
        double target = p.snr_factor * std::sqrt(8.0 * std::log(dn / p.eps) / dn);
        check.bound = p.eps;
        parallel_for(reps, [&](std::size_t r) {
            Rng rng(derive_seed(seed, r));
            std::size_t tau = std::uniform_int_distribution<std::size_t>(1, p.n - 1)(rng);
            double sign = std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
            double dt = static_cast<double>(tau);
            double delta = sign * target * dn / std::sqrt(dt * (dn - dt));
            auto x = standard_normal(rng, p.n);
            add_step(x, tau, delta);
            failed[r] = cusum_statistic(x).statistic <= lambda;
        });
        break;
    }
    case CheckKind::corollary1: {
        double lambda = p.lambda.value_or(corollary_threshold(p.n, p.B));
        double dn = static_cast<double>(p.n);
        check.bound = error_bound(BoundKind::cusum, p.n, p.B);
        parallel_for(reps, [&](std::size_t r) {
            Rng rng(derive_seed(seed, r));
            bool change = r % 2 == 1;
            auto x = standard_normal(rng, p.n);
            if (change) {
                std::size_t tau = std::uniform_int_distribution<std::size_t>(1, p.n - 1)(rng);
                double sign = std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
                double dt = static_cast<double>(tau);
                add_step(x, tau, sign * 1.001 * p.B * dn / std::sqrt(dt * (dn - dt)));
            }
            int predicted = cusum_statistic(x).statistic > lambda ? 1 : 0;
            failed[r] = predicted != (change ? 1 : 0);
        });
        break;
    }
    case CheckKind::theorem_localisation: {
        if (!(p.jump_lower > 2.0 * std::sqrt(2.0) * p.B)) {
            throw ParameterError("jumps must exceed 2 sqrt(2) B");
        }
        double lambda = p.lambda.value_or(star_threshold(p.n, p.B));
        auto psi = cusum_star_window(p.n, lambda);
        check.bound = 0.05;
        parallel_for(reps, [&](std::size_t r) {
            auto series = random_piecewise(p, derive_seed(seed, r));
            auto found = localise(series.x, psi, p.gamma);
            bool ok = found.change_points.size() == series.taus.size();
            for (std::size_t k = 0; ok && k < series.taus.size(); ++k) {
                double jump = std::abs(series.means[k + 1] - series.means[k]);
                double tolerance = p.tolerance_scale * p.B * p.B / (jump * jump);
                double error = std::abs(static_cast<double>(found.change_points[k]) -
                                        static_cast<double>(series.taus[k]));
                ok = error <= tolerance;
            }
            failed[r] = !ok;
        });
        break;
    }
    }

    std::size_t failures = 0;
    for (char f : failed) failures += f ? 1 : 0;
    check.empirical = static_cast<double>(failures) / static_cast<double>(reps);
    check.slack = binomial_slack(check.bound, reps);
    check.pass = check.empirical <= check.bound + check.slack;
    return check;
}

RmseReport localisation_rmse(const std::vector<std::vector<std::size_t>>& estimates,
                             const std::vector<std::size_t>& truths) {
    if (estimates.size() != truths.size()) {
        throw ShapeError("estimates and truths differ in length");
    }
    RmseReport report;
    double sum = 0.0;
    for (std::size_t k = 0; k < truths.size(); ++k) {
        if (estimates[k].size() != 1) {
            ++report.failures;
            continue;
        }
        double d = static_cast<double>(estimates[k][0]) - static_cast<double>(truths[k]);
        sum += d * d;
        ++report.used;
    }
    report.rmse = report.used == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(report.used));
    return report;
}

EvalReport cross_scenario(const Classifier& classifier, const ScenarioSpec& test, std::uint64_t seed) {
    auto data = gen_scenario(test, seed);
    return mer(classifier, data, seed);
}

OracleThresholds tune_oracle(const LabeledDataset& train) {
    struct Family {
        ChangeType type;
        int no_change;
        int change;
        std::string name;
    };
    const Family families[] = {{ChangeType::mean, 1, 2, "mean"},
                               {ChangeType::variance, 1, 3, "variance"},
                               {ChangeType::slope, 4, 5, "slope"}};
    OracleThresholds out;
    for (const auto& fam : families) {
        std::vector<const Example*> members;
        for (const auto& ex : train.examples) {
            if (ex.meta.family == fam.name && (ex.label == fam.no_change || ex.label == fam.change)) {
                members.push_back(&ex);
            }
        }
        if (members.empty()) {
            throw ShapeError("training data has no " + fam.name + " examples");
        }
        std::vector<double> stats(members.size());
        std::vector<int> labels(members.size());
        parallel_for(members.size(), [&](std::size_t k) {
            stats[k] = oracle_statistic(members[k]->x, fam.type);
            labels[k] = members[k]->label == fam.change ? 1 : 0;
        });
        double t = tune_threshold(stats, labels).threshold;
        if (fam.type == ChangeType::mean) out.mean = t;
        if (fam.type == ChangeType::variance) out.variance = t;
        if (fam.type == ChangeType::slope) out.slope = t;
    }
    return out;
}

int oracle_multiclass(const Example& ex, const OracleThresholds& t) {
    const auto& family = ex.meta.family;
    if (family == "mean") {
        return oracle_classify(ex.x, ChangeType::mean, t.mean) ? 2 : 1;
    }
    if (family == "variance") {
        return oracle_classify(ex.x, ChangeType::variance, t.variance) ? 3 : 1;
    }
    if (family == "slope") {
        return oracle_classify(ex.x, ChangeType::slope, t.slope) ? 5 : 4;
    }
    throw ParameterError("example has no change family for the oracle classifier");
}

} // namespace cpd
