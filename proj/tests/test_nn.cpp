#include <cpd/cusum.hpp>
#include <cpd/nn.hpp>

#include <doctest.h>

#include <cmath>

using namespace cpd;
using doctest::Approx;

namespace {

std::vector<double> random_input(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    double scale = std::uniform_real_distribution<double>(0.5, 3.0)(rng);
    std::vector<double> x(n);
    for (auto& v : x) v = scale * g(rng);
    std::size_t tau = std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
    double jump = std::uniform_real_distribution<double>(-4.0, 4.0)(rng);
    for (std::size_t t = tau; t < n; ++t) x[t] += jump;
    return x;
}

Batch random_batch(std::size_t dim, std::size_t count, std::size_t classes, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Batch b;
    b.inputs.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(count));
    for (Eigen::Index c = 0; c < b.inputs.cols(); ++c) {
        for (Eigen::Index r = 0; r < b.inputs.rows(); ++r) b.inputs(r, c) = g(rng);
        b.labels.push_back(classes == 1 ? static_cast<int>(c % 2) : 1 + static_cast<int>(c % classes));
    }
    return b;
}

} // namespace

TEST_CASE("architecture and shape checks") {
    CHECK_THROWS_AS((Architecture{0, {3}, 1}).validate(), ShapeError);
    CHECK_THROWS_AS((Architecture{3, {}, 1}).validate(), ShapeError);
    CHECK_THROWS_AS((Architecture{3, {0}, 1}).validate(), ShapeError);
    auto net = init_network({5, {4, 3}, 1}, 1);
    CHECK(net.layers.size() == 3);
    CHECK(net.layers[0].weight.rows() == 4);
    CHECK(net.layers[0].weight.cols() == 5);
    CHECK(net.layers[2].weight.rows() == 1);
    CHECK(net.parameter_count() == 5 * 4 + 4 + 4 * 3 + 3 + 3 + 1);
    CHECK_THROWS_AS(forward(net, std::vector<double>(4, 0.0)), ShapeError);
    auto broken = net;
    broken.layers[1].weight.resize(3, 5);
    CHECK_THROWS_AS(broken.validate(), ShapeError);
    auto nan = net;
    nan.layers[0].weight(0, 0) = std::nan("");
    CHECK_THROWS_AS(nan.validate(), ParameterError);
}

TEST_CASE("initialisation is seeded and bounded") {
    auto a = init_network({20, {10}, 1}, 5);
    auto b = init_network({20, {10}, 1}, 5);
    CHECK(a.layers[0].weight == b.layers[0].weight);
    double limit = std::sqrt(6.0 / 30.0);
    CHECK(a.layers[0].weight.cwiseAbs().maxCoeff() <= limit);
    CHECK(a.layers[0].bias.isZero());
}

TEST_CASE("zero weights never signal a change") {
    auto net = init_network({6, {4}, 1}, 2);
    for (auto& layer : net.layers) {
        layer.weight.setZero();
        layer.bias.setZero();
    }
    net.threshold = 0.5;
    for (std::uint64_t s = 0; s < 20; ++s) CHECK(forward(net, random_input(6, s)).label == 0);
}

TEST_CASE("two-unit identity net thresholds its input") {
    Network net;
    net.arch = {1, {2}, 1};
    Layer hidden;
    hidden.weight = Eigen::MatrixXd(2, 1);
    hidden.weight << 1.0, -1.0;
    hidden.bias = Eigen::VectorXd::Zero(2);
    Layer out;
    out.weight = Eigen::MatrixXd(1, 2);
    out.weight << 1.0, -1.0;
    out.bias = Eigen::VectorXd::Zero(1);
    net.layers = {hidden, out};
    net.threshold = 0.75;
    for (double x = -3.0; x <= 3.0; x += 0.125) {
        auto r = forward(net, std::vector<double>{x});
        CHECK(r.score[0] == Approx(x));
        CHECK(r.label == (x > 0.75 ? 1 : 0));
        CHECK(r.probability[0] == Approx(1.0 / (1.0 + std::exp(-(x - 0.75)))));
    }
}

TEST_CASE("multiclass ties go to the first class") {
    auto net = init_network({4, {3}, 5}, 3);
    net.layers.back().weight.setZero();
    auto r = forward(net, std::vector<double>{1.0, 2.0, 3.0, 4.0});
    CHECK(r.label == 1);
    double total = 0.0;
    for (double p : r.probability) total += p;
    CHECK(total == Approx(1.0));
}

TEST_CASE("embedded CUSUM networks") {
    auto tiny = embed_cusum(2, 1.0);
    CHECK(tiny.arch.widths == std::vector<std::size_t>{2});
    CHECK(std::abs(tiny.layers[0].weight(0, 0)) == Approx(1.0 / std::sqrt(2.0)));
    CHECK(tiny.layers[0].weight(0, 0) == Approx(-tiny.layers[0].weight(0, 1)));
    CHECK(tiny.layers[0].weight(1, 0) == Approx(-tiny.layers[0].weight(0, 0)));

    CHECK(embed_cusum(100, 3.899, EmbedVariant::star).arch.widths[0] == 24);
    CHECK(embed_cusum(100, 3.899).arch.widths[0] == 198);
    CHECK_THROWS_AS(embed_cusum(3, 1.0, EmbedVariant::star), InvalidLength);
    CHECK_THROWS_AS(embed_cusum(10, 0.0), InvalidThreshold);

    for (std::size_t n : {2u, 10u, 100u}) {
        double lambda = null_threshold(n, 0.05);
        auto full = embed_cusum(n, lambda);
        for (std::uint64_t s = 0; s < 1000; ++s) {
            auto x = random_input(n, s * 3 + n);
            if (std::abs(cusum_statistic(x).statistic - lambda) <= 1e-9) continue;
            CHECK(forward(full, x).label == cusum_classify(x, lambda));
        }
        if (n < 4) continue;
        auto star = embed_cusum(n, lambda, EmbedVariant::star);
        for (std::uint64_t s = 0; s < 1000; ++s) {
            auto x = random_input(n, s * 5 + n);
            if (std::abs(cusum_star_statistic(x).statistic - lambda) <= 1e-9) continue;
            CHECK(forward(star, x).label == cusum_star_classify(x, lambda));
        }
    }
}

TEST_CASE("unit scaling makes classification affine invariant") {
    auto net = init_network({30, {12}, 1}, 4);
    net.preprocess = Preprocess::unit();
    for (std::uint64_t s = 0; s < 50; ++s) {
        auto x = random_input(30, 100 + s);
        std::vector<double> moved(30);
        for (std::size_t i = 0; i < 30; ++i) moved[i] = 4.0 * x[i] - 9.0;
        auto a = classify_series(net, x);
        auto b = classify_series(net, moved);
        CHECK(a.score[0] == Approx(b.score[0]).epsilon(1e-9));
        CHECK(a.label == b.label);
    }
}

TEST_CASE("saturated separable batch has near zero loss") {
    Network net;
    net.arch = {1, {1}, 1};
    Layer hidden;
    hidden.weight = Eigen::MatrixXd::Constant(1, 1, 1.0);
    hidden.bias = Eigen::VectorXd::Constant(1, -100.0);
    Layer out;
    out.weight = Eigen::MatrixXd::Constant(1, 1, 50.0);
    out.bias = Eigen::VectorXd::Constant(1, 5000.0);
    net.layers = {hidden, out};
    Batch b;
    b.inputs = Eigen::MatrixXd(1, 4);
    b.inputs << -5.0, -3.0, 3.0, 5.0;
    b.labels = {0, 0, 1, 1};
    CHECK(batch_loss(net, b) < 1e-3);
}

TEST_CASE("duplicating the batch keeps the mean loss and gradient") {
    auto net = init_network({6, {5}, 3}, 8);
    auto b = random_batch(6, 7, 3, 9);
    Batch twice;
    twice.inputs.resize(6, 14);
    twice.inputs << b.inputs, b.inputs;
    twice.labels = b.labels;
    twice.labels.insert(twice.labels.end(), b.labels.begin(), b.labels.end());
    auto one = loss_and_gradient(net, b);
    auto two = loss_and_gradient(net, twice);
    CHECK(one.loss == Approx(two.loss));
    for (std::size_t l = 0; l < one.gradient.size(); ++l) {
        CHECK((one.gradient[l].weight - two.gradient[l].weight).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((one.gradient[l].bias - two.gradient[l].bias).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("gradient matches finite differences") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        std::size_t classes = s % 2 == 0 ? 1 : 4;
        auto net = init_network({10, {8, 8}, classes}, 20 + s);
        Rng rng(s);
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        for (std::size_t l = 0; l + 1 < net.layers.size(); ++l) {
            for (Eigen::Index i = 0; i < net.layers[l].bias.size(); ++i) net.layers[l].bias(i) = u(rng);
        }
        auto r = grad_check(net, random_batch(10, 6, classes, 40 + s), 1e-5);
        CHECK(r.max_relative_error <= 1e-4);
        CHECK(r.parameters == net.parameter_count());
    }
}

TEST_CASE("all-active network checks almost exactly") {
    auto net = init_network({10, {8}, 1}, 77);
    net.layers[0].bias.setConstant(-50.0);
    auto r = grad_check(net, random_batch(10, 5, 1, 78), 1e-5);
    CHECK(r.nudges == 0);
    CHECK(r.max_relative_error <= 1e-6);
}
