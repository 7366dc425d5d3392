#include <cpd/common.hpp>

#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

using namespace cpd;

TEST_CASE("series rejects short or non-finite input") {
    CHECK_THROWS_AS(Series(std::vector<double>{1.0}), InvalidLength);
    CHECK_THROWS_AS(Series(std::vector<double>{}), InvalidLength);
    CHECK_THROWS_AS(Series(std::vector<double>{1.0, std::nan("")}), ParameterError);
    CHECK_THROWS_AS(Series(std::vector<double>{1.0, std::numeric_limits<double>::infinity()}), ParameterError);
    Series ok(std::vector<double>{1.0, 2.0});
    CHECK(ok.size() == 2);
    CHECK(ok[1] == 2.0);
}

TEST_CASE("derived seeds are deterministic and spread out") {
    CHECK(derive_seed(7, 3) == derive_seed(7, 3));
    std::set<std::uint64_t> seen;
    for (std::uint64_t base = 0; base < 20; ++base) {
        for (std::uint64_t stream = 0; stream < 50; ++stream) {
            seen.insert(derive_seed(base, stream));
        }
    }
    CHECK(seen.size() == 1000);
}

TEST_CASE("parallel_for output does not depend on the worker count") {
    auto compute = [](std::size_t threads) {
        set_max_threads(threads);
        std::vector<double> out(1000);
        parallel_for(out.size(), [&](std::size_t i) {
            Rng rng(derive_seed(42, i));
            out[i] = std::normal_distribution<double>(0.0, 1.0)(rng);
        });
        return out;
    };
    auto one = compute(1);
    auto four = compute(4);
    CHECK(one == four);
    set_max_threads(0);
}

TEST_CASE("nested parallel_for runs every inner index") {
    set_max_threads(4);
    std::vector<int> counts(64, 0);
    parallel_for(8, [&](std::size_t i) {
        parallel_for(8, [&](std::size_t j) { counts[i * 8 + j] += 1; });
    });
    for (int c : counts) CHECK(c == 1);
    set_max_threads(0);
}
