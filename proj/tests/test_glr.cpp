#include <cpd/cusum.hpp>
#include <cpd/glr.hpp>
#include <cpd/simgen.hpp>

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace cpd;
using doctest::Approx;

namespace {

std::vector<double> normal_vector(std::size_t n, std::uint64_t seed, double sd = 1.0) {
    Rng rng(seed);
    std::normal_distribution<double> g(0.0, sd);
    std::vector<double> x(n);
    for (auto& v : x) v = g(rng);
    return x;
}

double sign_free_distance(const Eigen::MatrixXd& rows, Eigen::Index k, SeriesView v) {
    double plus = 0.0;
    double minus = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        double g = rows(k, static_cast<Eigen::Index>(j));
        plus = std::max(plus, std::abs(g - v[j]));
        minus = std::max(minus, std::abs(g + v[j]));
    }
    return std::min(plus, minus);
}

} // namespace

TEST_CASE("mean-change directions are the CUSUM vectors up to sign") {
    for (std::size_t n : {2u, 10u, 57u}) {
        auto dirs = glr_directions(ChangeDesign::mean_change(n));
        auto basis = cusum_basis(n);
        REQUIRE(dirs.locations.size() == n - 1);
        for (std::size_t k = 0; k < dirs.locations.size(); ++k) {
            CHECK_FALSE(dirs.degenerate[k]);
            CHECK(sign_free_distance(dirs.rows, static_cast<Eigen::Index>(k), basis->vector(dirs.locations[k])) <
                  1e-10);
        }
    }
}

TEST_CASE("mean-change scan equals the CUSUM statistic") {
    for (std::size_t n : {5u, 20u, 100u}) {
        auto dirs = glr_directions(ChangeDesign::mean_change(n));
        for (std::uint64_t s = 0; s < 1000; ++s) {
            auto x = normal_vector(n, s * 7 + n);
            CHECK(std::abs(glr_statistic(x, dirs).statistic - cusum_statistic(x).statistic) < 1e-10);
        }
    }
}

TEST_CASE("scan values on small inputs") {
    auto dirs = glr_directions(ChangeDesign::mean_change(2));
    auto r = glr_statistic(std::vector<double>{3.0, 0.0}, dirs);
    CHECK(r.statistic == Approx(2.1213).epsilon(1e-4));
    CHECK(r.location == 1);

    auto dirs8 = glr_directions(ChangeDesign::mean_change(8));
    CHECK(glr_statistic(std::vector<double>(8, 3.0), dirs8).statistic < 1e-12);

    auto x = normal_vector(8, 3);
    auto base = glr_statistic(x, dirs8);
    for (auto& v : x) v *= 4.0;
    auto scaled = glr_statistic(x, dirs8);
    CHECK(scaled.statistic == Approx(4.0 * base.statistic));
    CHECK(scaled.location == base.location);
}

TEST_CASE("change covariates inside the base span are degenerate") {
    ChangeDesign design = ChangeDesign::mean_change(6);
    design.locations.push_back(6);
    design.change_covariates.push_back(Eigen::VectorXd::Constant(6, 2.0));
    auto dirs = glr_directions(design);
    CHECK(dirs.degenerate.back());
    CHECK(dirs.rows.row(static_cast<Eigen::Index>(dirs.locations.size() - 1)).norm() == 0.0);

    ChangeDesign only;
    only.n = 5;
    only.base = Eigen::MatrixXd::Ones(5, 1);
    only.locations = {1};
    only.change_covariates = {Eigen::VectorXd::Constant(5, 1.0)};
    auto none = glr_directions(only);
    CHECK_THROWS_AS(glr_statistic(std::vector<double>{1, 2, 3, 4, 5}, none), EmptyScan);
}

TEST_CASE("invalid designs are rejected") {
    ChangeDesign rank_deficient = ChangeDesign::mean_change(6);
    rank_deficient.base = Eigen::MatrixXd::Ones(6, 2);
    CHECK_THROWS_AS(glr_directions(rank_deficient), DesignError);

    ChangeDesign singular = ChangeDesign::mean_change(6);
    singular.noise = Eigen::MatrixXd::Zero(6, 6);
    CHECK_THROWS_AS(glr_directions(singular), DesignError);
}

TEST_CASE("slope directions are orthogonal to the base covariates") {
    auto design = ChangeDesign::slope_change(40);
    auto dirs = glr_directions(design);
    for (std::size_t k = 0; k < dirs.locations.size(); ++k) {
        if (dirs.degenerate[k]) continue;
        Eigen::VectorXd row = dirs.rows.row(static_cast<Eigen::Index>(k)).transpose();
        CHECK(std::abs(row.norm() - 1.0) < 1e-10);
        for (Eigen::Index c = 0; c < design.base.cols(); ++c) {
            CHECK(std::abs(row.dot(design.base.col(c))) < 1e-8);
        }
    }
}

TEST_CASE("whitened scans ignore shifts along the base covariates") {
    std::size_t n = 30;
    Rng rng(5);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    Eigen::MatrixXd gamma = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < gamma.rows(); ++i) {
        for (Eigen::Index j = 0; j < i; ++j) gamma(i, j) = u(rng);
    }
    auto design = ChangeDesign::slope_change(n);
    design.noise = gamma;
    auto dirs = glr_directions(design);
    for (std::uint64_t s = 0; s < 50; ++s) {
        auto xi = normal_vector(n, 100 + s);
        Eigen::VectorXd x = gamma * Eigen::Map<Eigen::VectorXd>(xi.data(), static_cast<Eigen::Index>(n));
        Eigen::VectorXd shifted = x + design.base * Eigen::Vector2d(3.0, -0.7);
        std::vector<double> a(x.data(), x.data() + n);
        std::vector<double> b(shifted.data(), shifted.data() + n);
        for (std::size_t k = 0; k < dirs.locations.size(); ++k) {
            if (dirs.degenerate[k]) continue;
            auto row = dirs.rows.row(static_cast<Eigen::Index>(k));
            CHECK(std::abs(row.dot(x) - row.dot(shifted)) < 1e-8);
        }
        CHECK(std::abs(glr_statistic(a, dirs).statistic - glr_statistic(b, dirs).statistic) < 1e-8);
    }
}

TEST_CASE("variance scan") {
    std::vector<double> flat(20, 1.0);
    for (std::size_t i = 10; i < 20; ++i) flat[i] = 2.0;
    auto guarded = lr_variance_scan(flat);
    CHECK(std::isfinite(guarded.statistic));
    CHECK(guarded.statistic >= 0.0);

    for (std::uint64_t s = 0; s < 100; ++s) {
        CHECK(lr_variance_scan(normal_vector(50, s)).statistic >= 0.0);
    }

    std::size_t hits = 0;
    const std::size_t reps = 200;
    for (std::uint64_t s = 0; s < reps; ++s) {
        auto left = normal_vector(100, 2 * s + 1, 1.0);
        auto right = normal_vector(100, 2 * s + 2, 3.0);
        left.insert(left.end(), right.begin(), right.end());
        auto r = lr_variance_scan(left);
        hits += static_cast<std::size_t>(r.location >= 90 && r.location <= 110);
    }
    CHECK(static_cast<double>(hits) >= 0.95 * reps);
}

TEST_CASE("adaptive classifier recovers clear cases") {
    const std::size_t reps = 100;
    std::size_t mean_hits = 0, trend_hits = 0, noise_hits = 0;
    for (std::uint64_t s = 0; s < reps; ++s) {
        ChangeTypeParams p;
        p.mu_left = 0.0;
        p.mu_right = 3.5;
        mean_hits += static_cast<std::size_t>(adaptive_classify(gen_changetype(ChangeKind::mean, p, s).x) == 2);

        ChangeTypeParams trend;
        trend.slope_left = 0.01;
        trend.slope_right = 0.01;
        trend_hits +=
            static_cast<std::size_t>(adaptive_classify(gen_changetype(ChangeKind::slope, trend, 1000 + s).x) == 4);

        ChangeTypeParams none;
        noise_hits +=
            static_cast<std::size_t>(adaptive_classify(gen_changetype(ChangeKind::mean, none, 2000 + s).x) == 1);
    }
    CHECK(static_cast<double>(mean_hits) >= 0.95 * reps);
    CHECK(static_cast<double>(trend_hits) >= 0.90 * reps);
    CHECK(static_cast<double>(noise_hits) >= 0.90 * reps);
}

TEST_CASE("adaptive fit uses the fixed parameter counts") {
    auto x = normal_vector(60, 77);
    auto fit = adaptive_fit(x);
    double logn = std::log(60.0);
    for (std::size_t m = 0; m < 5; ++m) {
        CHECK(fit.bic[m] == Approx(-2.0 * fit.log_likelihood[m] + kAdaptiveParameterCounts[m] * logn));
    }
    auto best = std::min_element(fit.bic.begin(), fit.bic.end()) - fit.bic.begin();
    CHECK(fit.label == static_cast<int>(best) + 1);
}

TEST_CASE("oracle tests") {
    std::vector<double> constant(30, 2.0);
    CHECK(oracle_classify(constant, ChangeType::mean, 0.5) == 0);

    for (std::uint64_t s = 0; s < 200; ++s) {
        auto x = normal_vector(40, 300 + s);
        for (double lambda : {1.0, 2.0, 3.0}) {
            CHECK(oracle_classify(x, ChangeType::mean, lambda) == cusum_classify(x, lambda));
        }
    }

    // threshold from the null distribution, then power against a doubling
    std::vector<double> null_stats;
    for (std::uint64_t s = 0; s < 200; ++s) {
        ChangeTypeParams p;
        p.sigma_left = 0.5;
        p.sigma_right = 0.5;
        null_stats.push_back(oracle_statistic(gen_changetype(ChangeKind::variance, p, 5000 + s).x, ChangeType::variance));
    }
    std::sort(null_stats.begin(), null_stats.end());
    double threshold = null_stats[189];
    std::size_t hits = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        ChangeTypeParams p;
        p.sigma_left = 0.5;
        p.sigma_right = 1.0;
        hits += static_cast<std::size_t>(
            oracle_classify(gen_changetype(ChangeKind::variance, p, 7000 + s).x, ChangeType::variance, threshold));
    }
    CHECK(hits >= 190);
}
