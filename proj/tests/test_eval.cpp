#include <cpd/cusum.hpp>
#include <cpd/eval.hpp>

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

using namespace cpd;
using doctest::Approx;

namespace {

StatisticFn cusum_stat() {
    return [](const Example& ex) { return cusum_statistic(ex.x).statistic; };
}

} // namespace

TEST_CASE("misclassification rates") {
    auto data = gen_scenario({Scenario::S1, 50, 400, Role::test}, 1);
    auto oracle = mer([](const Example& ex) { return ex.meta.tau ? 1 : 0; }, data, 1);
    CHECK(oracle.mer == 0.0);
    CHECK(oracle.accuracy == 1.0);

    auto zero = mer([](const Example&) { return 0; }, data, 1);
    CHECK(zero.mer == 0.5);
    CHECK(zero.per_class.at(0).rate() == 1.0);
    CHECK(zero.per_class.at(1).rate() == 0.0);
    std::size_t total = 0;
    for (const auto& [label, counts] : zero.per_class) total += counts.total;
    CHECK(total == data.size());
    CHECK(zero.count == data.size());
    CHECK(zero.errors == 200);
    CHECK(zero.fingerprint == dataset_fingerprint(data));
    CHECK(zero.seed == 1);
}

TEST_CASE("null-threshold CUSUM on a scenario test set") {
    auto data = gen_scenario({Scenario::S1, 100, 2000, Role::test}, 2);
    auto cls = threshold_classifier(cusum_stat(), null_threshold(100, 0.05));
    auto a = mer(cls, data, 2);
    auto b = mer(cls, gen_scenario({Scenario::S1, 100, 2000, Role::test}, 2), 2);
    CHECK(a.mer > 0.0);
    CHECK(a.mer < 0.5);
    CHECK(a.mer == b.mer);
}

TEST_CASE("rates do not depend on example order") {
    auto data = gen_scenario({Scenario::S2, 40, 300, Role::test}, 3);
    auto cls = threshold_classifier(cusum_stat(), 2.5);
    auto before = mer(cls, data);
    std::reverse(data.examples.begin(), data.examples.end());
    auto after = mer(cls, data);
    CHECK(before.mer == after.mer);
    CHECK(before.errors == after.errors);
}

TEST_CASE("fingerprints track content") {
    auto data = gen_scenario({Scenario::S1, 20, 10, Role::train}, 4);
    auto copy = data;
    CHECK(dataset_fingerprint(data) == dataset_fingerprint(copy));
    CHECK(dataset_fingerprint(data).size() == 16);
    copy.examples[3].label = 1 - copy.examples[3].label;
    CHECK(dataset_fingerprint(data) != dataset_fingerprint(copy));
}

TEST_CASE("threshold tuning") {
    std::vector<double> stats{0.1, 0.2, 0.3, 2.0, 2.1, 2.2};
    std::vector<int> labels{0, 0, 0, 1, 1, 1};
    auto fit = tune_threshold(stats, labels);
    CHECK(fit.training_mer == 0.0);
    CHECK(fit.threshold >= 0.3);
    CHECK(fit.threshold < 2.0);

    // every point in [0, 1) separates; the smallest grid point wins
    ThresholdGrid grid{5, 0.0, 1.0};
    auto tied = tune_threshold(std::vector<double>{-1.0, 2.0}, std::vector<int>{0, 1}, grid);
    CHECK(tied.threshold == 0.0);

    CHECK_THROWS_AS(tune_threshold(std::vector<double>{}, std::vector<int>{}), ShapeError);
    CHECK_THROWS_AS(tune_threshold(stats, labels, ThresholdGrid{0}), ParameterError);
}

TEST_CASE("tuned threshold is the best grid point") {
    auto data = gen_scenario({Scenario::S1prime, 60, 400, Role::train}, 5);
    std::vector<double> stats;
    for (const auto& ex : data.examples) stats.push_back(cusum_statistic(ex.x).statistic);
    auto labels = data.labels();
    auto fit = tune_threshold(stats, labels);
    auto [lo, hi] = std::minmax_element(stats.begin(), stats.end());
    for (std::size_t g = 0; g < 200; ++g) {
        double t = *lo + (*hi - *lo) * static_cast<double>(g) / 199.0;
        std::size_t errors = 0;
        for (std::size_t k = 0; k < stats.size(); ++k) errors += (stats[k] > t ? 1 : 0) != labels[k];
        CHECK(fit.training_mer <= static_cast<double>(errors) / static_cast<double>(stats.size()));
    }
}

TEST_CASE("tuned CUSUM threshold on a large S1 training set") {
    auto data = gen_scenario({Scenario::S1, 100, 4000, Role::train}, 6);
    auto fit = tune_threshold(cusum_stat(), data);
    CHECK(fit.threshold >= 3.0);
    CHECK(fit.threshold <= 4.5);
}

TEST_CASE("Monte Carlo bound checks") {
    BoundCheckParams p;
    CHECK_THROWS_AS(monte_carlo_bound_check(CheckKind::lemma3a, p, 999, 1), ParameterError);

    auto a = monte_carlo_bound_check(CheckKind::lemma3a, p, 2000, 1);
    CHECK(a.pass);
    CHECK(a.bound == 0.05);
    CHECK(a.slack == Approx(3.0 * std::sqrt(0.05 * 0.95 / 2000.0)));

    auto b = monte_carlo_bound_check(CheckKind::lemma3b, p, 2000, 2);
    CHECK(b.pass);

    p.B = 0.8;
    auto c = monte_carlo_bound_check(CheckKind::corollary1, p, 2000, 3);
    CHECK(c.bound == Approx(100.0 * std::exp(-8.0)));
    CHECK(c.pass);

    BoundCheckParams never = p;
    never.lambda = std::numeric_limits<double>::max();
    CHECK(monte_carlo_bound_check(CheckKind::lemma3a, never, 1000, 4).empirical == 0.0);

    auto same = monte_carlo_bound_check(CheckKind::lemma3a, BoundCheckParams{}, 1000, 9);
    auto again = monte_carlo_bound_check(CheckKind::lemma3a, BoundCheckParams{}, 1000, 9);
    CHECK(same.empirical == again.empirical);
}

TEST_CASE("localisation check with well separated jumps") {
    BoundCheckParams p;
    p.n = 192;
    p.B = 1.5;
    auto r = monte_carlo_bound_check(CheckKind::theorem_localisation, p, 1000, 5);
    CHECK(r.pass);
    p.jump_lower = 1.0;
    CHECK_THROWS_AS(monte_carlo_bound_check(CheckKind::theorem_localisation, p, 1000, 5), ParameterError);
}

TEST_CASE("random piecewise series respect spacing and jump sizes") {
    BoundCheckParams p;
    p.n = 100;
    p.B = 1.0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        auto series = random_piecewise(p, s);
        REQUIRE(series.taus.size() == 3);
        std::size_t previous = 0;
        for (std::size_t r = 0; r < series.taus.size(); ++r) {
            CHECK(series.taus[r] - previous >= 2 * p.n);
            previous = series.taus[r];
            double jump = std::abs(series.means[r + 1] - series.means[r]);
            CHECK(jump >= p.jump_lower);
            CHECK(jump <= p.jump_upper);
            CHECK(jump > 2.0 * std::sqrt(2.0) * p.B);
        }
        CHECK(p.total_length - previous >= 2 * p.n);
    }
}

TEST_CASE("localisation RMSE") {
    CHECK(localisation_rmse({{10}, {20}}, {10, 20}).rmse == 0.0);
    CHECK(localisation_rmse({{12}, {22}, {7}}, {10, 20, 5}).rmse == Approx(2.0));
    auto partial = localisation_rmse({{12}, {}, {1, 2}}, {10, 20, 5});
    CHECK(partial.used == 1);
    CHECK(partial.failures == 2);
    CHECK(partial.rmse == Approx(2.0));
    CHECK_THROWS(localisation_rmse({{1}}, {1, 2}));
}

TEST_CASE("cross-scenario evaluation") {
    auto train_data = gen_scenario({Scenario::S1, 50, 400, Role::train}, 7);
    auto fit = tune_threshold(cusum_stat(), train_data);
    auto cls = threshold_classifier(cusum_stat(), fit.threshold);
    ScenarioSpec spec{Scenario::S1, 50, 400, Role::test};
    auto cross = cross_scenario(cls, spec, 8);
    auto plain = mer(cls, gen_scenario(spec, 8), 8);
    CHECK(cross.mer == plain.mer);
    CHECK(cross.fingerprint == plain.fingerprint);
    auto heavy = cross_scenario(cls, {Scenario::S3, 50, 400, Role::test}, 9);
    CHECK(std::isfinite(heavy.mer));
}

TEST_CASE("oracle multiclass classifier") {
    auto spec = MulticlassSpec::table(SnrRegime::strong, 40);
    auto train_data = gen_multiclass(spec, 10);
    auto test_data = gen_multiclass(spec, 11);
    auto thresholds = tune_oracle(train_data);
    auto report = mer([&](const Example& ex) { return oracle_multiclass(ex, thresholds); }, test_data);
    CHECK(report.accuracy > 0.9);
    Example unknown = test_data.examples.front();
    unknown.meta.family = "none";
    CHECK_THROWS(oracle_multiclass(unknown, thresholds));
}
