#pragma once

// Fully connected ReLU networks
//
//   a_0 = input,  a_l = max(0, W_{l-1} a_{l-1} - b_l)  (l = 1..L),
//   score = W_L a_L - b_out,
//
// with a hard threshold on the score for binary output and argmax over K
// scores for multiclass output.

#include <cpd/common.hpp>
#include <cpd/preprocess.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace cpd {

struct Architecture {
    std::size_t input_dim{0};
    /// Hidden widths m_1..m_L (L >= 1).
    std::vector<std::size_t> widths;
    /// 1 for binary output, K >= 2 for K classes.
    std::size_t output_dim{1};

    std::size_t depth() const noexcept { return widths.size(); }
    void validate() const;

    friend bool operator==(const Architecture&, const Architecture&) = default;
};

struct Layer {
    /// m_{l+1} x m_l
    Eigen::MatrixXd weight;
    /// Subtracted before the activation (or from the output score).
    Eigen::VectorXd bias;
};

struct Network {
    Architecture arch;
    /// L hidden layers followed by the output layer.
    std::vector<Layer> layers;
    /// Binary decision threshold on the score.
    double threshold{0.0};
    /// Applied to raw series by classify_series; not by forward.
    Preprocess preprocess;

    bool binary() const noexcept { return arch.output_dim == 1; }
    std::size_t parameter_count() const noexcept;
    /// Throws ShapeError when the layer shapes do not chain, ParameterError
    /// when a parameter is not finite.
    void validate() const;
};

/// Layer-shaped gradient, one entry per Network::layers entry.
using Gradient = std::vector<Layer>;

struct ForwardResult {
    /// Output scores (one entry for binary networks).
    std::vector<double> score;
    /// Binary: 1{score > threshold}. Multiclass: 1 + argmax (smallest index on ties).
    int label{0};
    /// Binary: logistic(score - threshold). Multiclass: softmax of the scores.
    std::vector<double> probability;
};

ForwardResult forward(const Network& net, std::span<const double> input);

/// Applies net.preprocess and then forward.
ForwardResult classify_series(const Network& net, SeriesView x);

/// Glorot-uniform weights (limit sqrt(6 / (fan_in + fan_out))), zero biases.
Network init_network(const Architecture& arch, std::uint64_t seed);

enum class EmbedVariant { full, star };

/// One hidden layer holding +v_i and -v_i (all i, or i in the dyadic grid),
/// hidden bias lambda, unit output weights, output bias 0 and threshold 0.
Network embed_cusum(std::size_t n, double lambda, EmbedVariant variant = EmbedVariant::full);

/// Columns are examples. Binary labels are 0/1, multiclass labels 1..K.
struct Batch {
    Eigen::MatrixXd inputs;
    std::vector<int> labels;
};

struct LossGradient {
    double loss{0.0};
    Gradient gradient;
};

/// Mean cross-entropy over the batch and its exact gradient. Binary networks
/// use the logistic link on score - threshold. Throws TrainingError if the
/// loss is not finite.
LossGradient loss_and_gradient(const Network& net, const Batch& batch);

/// Mean cross-entropy only.
double batch_loss(const Network& net, const Batch& batch);

struct GradCheckResult {
    double max_relative_error{0.0};
    std::size_t parameters{0};
    /// Hidden biases moved to keep pre-activations off the ReLU kink.
    std::size_t nudges{0};
};

/// Central differences with step h over every parameter, compared with
/// loss_and_gradient. Relative error is |a - f| / max(|a|, |f|, 1e-6).
/// Hidden units whose pre-activation on any sample lies within
/// max(1e-6, 100 h) of zero have their bias shifted first.
GradCheckResult grad_check(const Network& net, const Batch& sample, double h = 1e-5);

} // namespace cpd
