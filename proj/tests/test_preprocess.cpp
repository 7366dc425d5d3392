#include <cpd/preprocess.hpp>

#include <doctest.h>

#include <cmath>

using namespace cpd;

TEST_CASE("unit scaling") {
    CHECK(unit_scale(std::vector<double>{2.0, 4.0, 6.0}) == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(unit_scale(std::vector<double>{5.0, 5.0, 5.0}) == std::vector<double>{0.0, 0.0, 0.0});
    Rng rng(1);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> x(30), y(30);
        for (std::size_t i = 0; i < 30; ++i) {
            x[i] = g(rng);
            y[i] = 3.0 * x[i] + 11.0;
        }
        auto a = unit_scale(x);
        auto b = unit_scale(y);
        for (std::size_t i = 0; i < 30; ++i) {
            CHECK(std::abs(a[i] - b[i]) < 1e-12);
            CHECK(a[i] >= 0.0);
            CHECK(a[i] <= 1.0);
        }
    }
}

TEST_CASE("lag products are zero padded") {
    CHECK(lag_product(std::vector<double>{1.0, 2.0, 3.0}) == std::vector<double>{2.0, 6.0, 0.0});
}

TEST_CASE("pipelines") {
    std::vector<double> x{1.0, -2.0};
    CHECK(preprocess(x, Preprocess::parse("square")) == std::vector<double>{1.0, 4.0});
    CHECK(preprocess(x, Preprocess::parse("identity")) == x);
    CHECK(preprocess(x, Preprocess{}) == x);

    auto two = Preprocess::parse("unit_scale|unit_scale+square");
    CHECK(two.channel_count() == 2);
    CHECK(two.input_dim(4) == 8);
    CHECK(preprocess(std::vector<double>{0.0, 2.0, 4.0}, two) ==
          std::vector<double>{0.0, 0.5, 1.0, 0.0, 0.25, 1.0});

    auto trunc = Preprocess::parse("zscore_truncate:3+unit_scale");
    CHECK(trunc.channels.at(0).at(0).kind == PreprocessStep::Kind::zscore_truncate);
    CHECK(trunc.channels.at(0).at(0).z == 3.0);
    CHECK(Preprocess::parse(trunc.to_string()) == trunc);
    CHECK(Preprocess::parse(two.to_string()) == two);
    CHECK(Preprocess::unit() == Preprocess::parse("unit_scale"));

    CHECK_THROWS_AS(Preprocess::parse("cube"), ParameterError);
    CHECK_THROWS_AS(Preprocess::parse("zscore_truncate:-1"), ParameterError);
}
