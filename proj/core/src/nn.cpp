#include <cpd/nn.hpp>

#include <cpd/cusum.hpp>

#include <algorithm>
#include <cmath>

namespace cpd {
namespace {

struct Trace {
    std::vector<Eigen::MatrixXd> act;
    std::vector<Eigen::MatrixXd> pre;
    Eigen::MatrixXd scores;
};

Trace run(const Network& net, const Eigen::MatrixXd& inputs) {
    std::size_t hidden = net.arch.depth();
    Trace t;
    t.act.reserve(hidden + 1);
    t.pre.reserve(hidden);
    t.act.push_back(inputs);
    for (std::size_t l = 0; l < hidden; ++l) {
        const auto& layer = net.layers[l];
        Eigen::MatrixXd z = layer.weight * t.act.back();
        z.colwise() -= layer.bias;
        t.act.push_back(z.cwiseMax(0.0));
        t.pre.push_back(std::move(z));
    }
    const auto& out = net.layers.back();
    t.scores = out.weight * t.act.back();
    t.scores.colwise() -= out.bias;
    return t;
}

double softplus(double s) {
    return std::max(s, 0.0) + std::log1p(std::exp(-std::abs(s)));
}

double logistic(double s) {
    if (s >= 0.0) {
        return 1.0 / (1.0 + std::exp(-s));
    }
    double e = std::exp(s);
    return e / (1.0 + e);
}

void check_batch(const Network& net, const Batch& batch) {
    if (batch.inputs.cols() == 0) {
        throw ShapeError("batch is empty");
    }
    if (static_cast<std::size_t>(batch.inputs.rows()) != net.arch.input_dim) {
        throw ShapeError("batch input dimension " + std::to_string(batch.inputs.rows()) +
                         " does not match network input " + std::to_string(net.arch.input_dim));
    }
    if (batch.labels.size() != static_cast<std::size_t>(batch.inputs.cols())) {
        throw ShapeError("one label is required per batch column");
    }
    int lo = net.binary() ? 0 : 1;
    int hi = net.binary() ? 1 : static_cast<int>(net.arch.output_dim);
    for (int y : batch.labels) {
        if (y < lo || y > hi) {
            throw ShapeError("label " + std::to_string(y) + " outside [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]");
        }
    }
}

// Mean loss and d(mean loss)/d(score), column per example.
double output_loss(const Network& net, const Eigen::MatrixXd& scores, const std::vector<int>& labels,
                   Eigen::MatrixXd* dscores) {
    auto count = scores.cols();
    double total = 0.0;
    if (dscores) {
        dscores->resize(scores.rows(), count);
    }
    double inv = 1.0 / static_cast<double>(count);
    for (Eigen::Index j = 0; j < count; ++j) {
        int y = labels[static_cast<std::size_t>(j)];
        if (net.binary()) {
            double s = scores(0, j) - net.threshold;
            total += softplus(s) - static_cast<double>(y) * s;
            if (dscores) {
                (*dscores)(0, j) = (logistic(s) - static_cast<double>(y)) * inv;
            }
        } else {
            Eigen::VectorXd s = scores.col(j);
            double top = s.maxCoeff();
            double lse = top + std::log((s.array() - top).exp().sum());
            total += lse - s(y - 1);
            if (dscores) {
                Eigen::VectorXd p = (s.array() - lse).exp();
                p(y - 1) -= 1.0;
                dscores->col(j) = p * inv;
            }
        }
    }
    double loss = total * inv;
    if (!std::isfinite(loss)) {
        throw TrainingError("cross-entropy loss is not finite");
    }
    return loss;
}

} // namespace

void Architecture::validate() const {
    if (input_dim == 0) {
        throw ShapeError("input dimension must be positive");
    }
    if (widths.empty()) {
        throw ShapeError("at least one hidden layer is required");
    }
    for (std::size_t w : widths) {
        if (w == 0) {
            throw ShapeError("hidden widths must be positive");
        }
    }
    if (output_dim == 0) {
        throw ShapeError("output dimension must be positive");
    }
}

std::size_t Network::parameter_count() const noexcept {
    std::size_t total = 0;
    for (const auto& layer : layers) {
        total += static_cast<std::size_t>(layer.weight.size() + layer.bias.size());
    }
    return total;
}

void Network::validate() const {
    arch.validate();
    if (layers.size() != arch.depth() + 1) {
        throw ShapeError("expected " + std::to_string(arch.depth() + 1) + " layers, found " +
                         std::to_string(layers.size()));
    }
    std::size_t in = arch.input_dim;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        std::size_t out = l < arch.depth() ? arch.widths[l] : arch.output_dim;
        const auto& layer = layers[l];
        if (static_cast<std::size_t>(layer.weight.rows()) != out ||
            static_cast<std::size_t>(layer.weight.cols()) != in ||
            static_cast<std::size_t>(layer.bias.size()) != out) {
            throw ShapeError("layer " + std::to_string(l) + " has the wrong shape");
        }
        if (!layer.weight.allFinite() || !layer.bias.allFinite()) {
            throw ParameterError("layer " + std::to_string(l) + " has non-finite parameters");
        }
        in = out;
    }
    if (!std::isfinite(threshold)) {
        throw ParameterError("threshold is not finite");
    }
    if (arch.input_dim % preprocess.channel_count() != 0) {
        throw ShapeError("input dimension is not a multiple of the channel count");
    }
}

ForwardResult forward(const Network& net, std::span<const double> input) {
    if (input.size() != net.arch.input_dim) {
        throw ShapeError("input length " + std::to_string(input.size()) + " does not match " +
                         std::to_string(net.arch.input_dim));
    }
    Eigen::Map<const Eigen::MatrixXd> column(input.data(), static_cast<Eigen::Index>(input.size()), 1);
    Trace t = run(net, column);
    ForwardResult r;
    r.score.assign(t.scores.data(), t.scores.data() + t.scores.size());
    if (net.binary()) {
        r.label = r.score[0] > net.threshold ? 1 : 0;
        r.probability = {logistic(r.score[0] - net.threshold)};
    } else {
        std::size_t best = 0;
        for (std::size_t k = 1; k < r.score.size(); ++k) {
            if (r.score[k] > r.score[best]) {
                best = k;
            }
        }
        r.label = static_cast<int>(best) + 1;
        double top = r.score[best];
        double sum = 0.0;
        r.probability.resize(r.score.size());
        for (std::size_t k = 0; k < r.score.size(); ++k) {
            r.probability[k] = std::exp(r.score[k] - top);
            sum += r.probability[k];
        }
        for (double& p : r.probability) p /= sum;
    }
    return r;
}

ForwardResult classify_series(const Network& net, SeriesView x) {
    auto input = preprocess(x, net.preprocess);
    return forward(net, input);
}

Network init_network(const Architecture& arch, std::uint64_t seed) {
    arch.validate();
    Network net;
    net.arch = arch;
    Rng rng(seed);
    std::size_t in = arch.input_dim;
    for (std::size_t l = 0; l <= arch.depth(); ++l) {
        std::size_t out = l < arch.depth() ? arch.widths[l] : arch.output_dim;
        double limit = std::sqrt(6.0 / static_cast<double>(in + out));
        std::uniform_real_distribution<double> dist(-limit, limit);
        Layer layer;
        layer.weight.resize(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
        // Row-major fill so the draw order does not depend on storage order.
        for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
            for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
                layer.weight(r, c) = dist(rng);
            }
        }
        layer.bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out));
        net.layers.push_back(std::move(layer));
        in = out;
    }
    return net;
}

Network embed_cusum(std::size_t n, double lambda, EmbedVariant variant) {
    if (!(lambda > 0.0)) {
        throw InvalidThreshold("embedding threshold must be positive");
    }
    std::vector<std::size_t> indices;
    if (variant == EmbedVariant::full) {
        if (n < 2) {
            throw InvalidLength("CUSUM embedding needs n >= 2");
        }
        for (std::size_t i = 1; i < n; ++i) indices.push_back(i);
    } else {
        indices = dyadic_grid(n).indices;
    }
    auto basis = cusum_basis(n);
    std::size_t m = 2 * indices.size();

    Network net;
    net.arch = {n, {m}, 1};
    Layer hidden;
    hidden.weight.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < indices.size(); ++k) {
        auto v = basis->vector(indices[k]);
        for (std::size_t j = 0; j < n; ++j) {
            hidden.weight(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = v[j];
            hidden.weight(static_cast<Eigen::Index>(k + indices.size()), static_cast<Eigen::Index>(j)) = -v[j];
        }
    }
    hidden.bias = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(m), lambda);
    Layer out;
    out.weight = Eigen::MatrixXd::Ones(1, static_cast<Eigen::Index>(m));
    out.bias = Eigen::VectorXd::Zero(1);
    net.layers = {std::move(hidden), std::move(out)};
    net.threshold = 0.0;
    return net;
}

LossGradient loss_and_gradient(const Network& net, const Batch& batch) {
    check_batch(net, batch);
    Trace t = run(net, batch.inputs);
    Eigen::MatrixXd delta;
    LossGradient result;
    result.loss = output_loss(net, t.scores, batch.labels, &delta);

    std::size_t hidden = net.arch.depth();
    result.gradient.resize(hidden + 1);
    for (std::size_t l = hidden + 1; l-- > 0;) {
        auto& g = result.gradient[l];
        g.weight = delta * t.act[l].transpose();
        g.bias = -delta.rowwise().sum();
        if (l == 0) {
            break;
        }
        delta = net.layers[l].weight.transpose() * delta;
        delta = (t.pre[l - 1].array() > 0.0).select(delta, 0.0);
    }
    return result;
}

double batch_loss(const Network& net, const Batch& batch) {
    check_batch(net, batch);
    Trace t = run(net, batch.inputs);
    return output_loss(net, t.scores, batch.labels, nullptr);
}

GradCheckResult grad_check(const Network& original, const Batch& sample, double h) {
    if (!(h > 0.0 && h <= 1e-3)) {
        throw ParameterError("finite-difference step must lie in (0, 1e-3]");
    }
    check_batch(original, sample);
    Network net = original;
    GradCheckResult result;

    double margin = std::max(1e-6, 100.0 * h);
    for (int round = 0; round < 200; ++round) {
        Trace t = run(net, sample.inputs);
        bool moved = false;
        for (std::size_t l = 0; l < t.pre.size() && !moved; ++l) {
            const auto& z = t.pre[l];
            for (Eigen::Index u = 0; u < z.rows(); ++u) {
                if ((z.row(u).array().abs() < margin).any()) {
                    net.layers[l].bias(u) += 4.0 * margin;
                    ++result.nudges;
                    moved = true;
                }
            }
        }
        if (!moved) {
            break;
        }
    }

    LossGradient analytic = loss_and_gradient(net, sample);
    auto compare = [&](double& param, double grad) {
        double saved = param;
        param = saved + h;
        double up = batch_loss(net, sample);
        param = saved - h;
        double down = batch_loss(net, sample);
        param = saved;
        double numeric = (up - down) / (2.0 * h);
        double scale = std::max({std::abs(grad), std::abs(numeric), 1e-6});
        result.max_relative_error = std::max(result.max_relative_error, std::abs(grad - numeric) / scale);
        ++result.parameters;
    };
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        auto& layer = net.layers[l];
        const auto& g = analytic.gradient[l];
        for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
            for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
                compare(layer.weight(r, c), g.weight(r, c));
            }
        }
        for (Eigen::Index r = 0; r < layer.bias.size(); ++r) {
            compare(layer.bias(r), g.bias(r));
        }
    }
    return result;
}

} // namespace cpd
