#include <cpd/train.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cpd {

void TrainConfig::validate() const {
    if (epochs == 0 || batch_size == 0) {
        throw ParameterError("epochs and batch size must be positive");
    }
    if (!(learning_rate > 0.0) || !(epsilon > 0.0)) {
        throw ParameterError("learning rate and epsilon must be positive");
    }
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
        throw ParameterError("Adam betas must lie in [0, 1)");
    }
    if (inverse_time_decay && (!(decay_rate >= 0.0) || decay_steps == 0)) {
        throw ParameterError("invalid inverse-time decay settings");
    }
}

Batch make_batch(const LabeledDataset& data, const Preprocess& pre) {
    if (data.empty()) {
        throw ShapeError("dataset is empty");
    }
    std::size_t n = data.length();
    auto rows = static_cast<Eigen::Index>(pre.input_dim(n));
    Batch batch;
    batch.inputs.resize(rows, static_cast<Eigen::Index>(data.size()));
    batch.labels = data.labels();
    parallel_for(data.size(), [&](std::size_t k) {
        auto v = preprocess(data.examples[k].x, pre);
        batch.inputs.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Eigen::VectorXd>(v.data(), rows);
    });
    return batch;
}

Network train_network(Network net, const LabeledDataset& data, const TrainConfig& cfg) {
    cfg.validate();
    net.validate();
    Batch all = make_batch(data, net.preprocess);
    if (static_cast<std::size_t>(all.inputs.rows()) != net.arch.input_dim) {
        throw ShapeError("preprocessed input does not match the network input dimension");
    }

    std::vector<Layer> m1;
    std::vector<Layer> m2;
    for (const auto& layer : net.layers) {
        Layer zero{Eigen::MatrixXd::Zero(layer.weight.rows(), layer.weight.cols()),
                   Eigen::VectorXd::Zero(layer.bias.size())};
        m1.push_back(zero);
        m2.push_back(zero);
    }

    std::size_t count = data.size();
    std::vector<std::size_t> order(count);
    Batch batch;
    std::size_t step = 0;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), 0);
        Rng rng(derive_seed(cfg.seed, epoch));
        std::shuffle(order.begin(), order.end(), rng);

        for (std::size_t start = 0; start < count; start += cfg.batch_size) {
            std::size_t size = std::min(cfg.batch_size, count - start);
            batch.inputs.resize(all.inputs.rows(), static_cast<Eigen::Index>(size));
            batch.labels.resize(size);
            for (std::size_t j = 0; j < size; ++j) {
                std::size_t k = order[start + j];
                batch.inputs.col(static_cast<Eigen::Index>(j)) = all.inputs.col(static_cast<Eigen::Index>(k));
                batch.labels[j] = all.labels[k];
            }

            LossGradient lg = loss_and_gradient(net, batch);
            ++step;
            double lr = cfg.learning_rate;
            if (cfg.inverse_time_decay) {
                lr /= 1.0 + cfg.decay_rate * static_cast<double>(step) / static_cast<double>(cfg.decay_steps);
            }
            double t = static_cast<double>(step);
            double c1 = 1.0 - std::pow(cfg.beta1, t);
            double c2 = 1.0 - std::pow(cfg.beta2, t);
            for (std::size_t l = 0; l < net.layers.size(); ++l) {
                auto update = [&](auto& param, auto& first, auto& second, const auto& grad) {
                    first = cfg.beta1 * first + (1.0 - cfg.beta1) * grad;
                    second = cfg.beta2 * second + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
                    param.array() -= lr * (first.array() / c1) /
                                     ((second.array() / c2).sqrt() + cfg.epsilon);
                };
                update(net.layers[l].weight, m1[l].weight, m2[l].weight, lg.gradient[l].weight);
                update(net.layers[l].bias, m1[l].bias, m2[l].bias, lg.gradient[l].bias);
            }
        }
        for (const auto& layer : net.layers) {
            if (!layer.weight.allFinite() || !layer.bias.allFinite()) {
                throw TrainingError("parameters diverged in epoch " + std::to_string(epoch + 1));
            }
        }
    }
    return net;
}

Network train(const LabeledDataset& data, const Architecture& arch, const Preprocess& pre,
              const TrainConfig& cfg) {
    Network net = init_network(arch, derive_seed(cfg.seed, 0xC0FFEEULL));
    net.preprocess = pre;
    return train_network(std::move(net), data, cfg);
}

} // namespace cpd
