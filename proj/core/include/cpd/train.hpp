#pragma once

#include <cpd/nn.hpp>
#include <cpd/simgen.hpp>

#include <cstdint>

namespace cpd {

struct TrainConfig {
    std::size_t epochs{200};
    std::size_t batch_size{32};
    double learning_rate{1e-3};
    double beta1{0.9};
    double beta2{0.999};
    double epsilon{1e-8};
    /// lr_t = lr / (1 + decay_rate * step / decay_steps) when enabled.
    bool inverse_time_decay{false};
    double decay_rate{1.0};
    std::size_t decay_steps{1000};
    std::uint64_t seed{0};

    void validate() const;
};

/// Preprocesses every series with `pre` into the columns of a matrix.
Batch make_batch(const LabeledDataset& data, const Preprocess& pre);

/// Adam on mean cross-entropy. Each epoch reshuffles the examples with a
/// generator seeded from (cfg.seed, epoch) and walks them in consecutive
/// batches (the last one may be short). Returns the final parameters.
/// Throws TrainingError on non-finite loss or parameters.
Network train_network(Network init, const LabeledDataset& data, const TrainConfig& cfg);

/// Glorot-initialised network seeded from cfg.seed, then train_network.
Network train(const LabeledDataset& data, const Architecture& arch, const Preprocess& pre,
              const TrainConfig& cfg);

} // namespace cpd
