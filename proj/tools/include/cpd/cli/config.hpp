#pragma once

#include <cpd/train.hpp>

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cpd::cli {

/// Everything a command needs to rerun: selections, sizes, seed, paths and
/// hyperparameter overrides. Embedded verbatim in every report.
struct ExperimentConfig {
    std::string command;
    /// reproduce only
    std::string recipe;
    /// quick or full (reproduce only)
    std::string scale{"full"};

    std::string scenario{"S1"};
    std::string role{"train"};
    std::size_t n{100};
    std::size_t count{700};
    /// multiclass simulation
    std::string regime{"strong"};
    std::size_t per_class{100};

    std::uint64_t seed{0};
    std::size_t threads{0};

    /// cusum, cusum-star, wilcoxon, network, adaptive
    std::string method{"cusum"};
    std::optional<double> threshold;
    /// Threshold level for null-level thresholds when no threshold is given.
    double eps{0.05};
    std::optional<double> B;
    double gamma{0.5};
    std::size_t window{0};

    std::vector<std::size_t> widths;
    std::size_t classes{1};
    std::string preprocess{"unit_scale"};
    /// glorot or embed (embed uses the CUSUM construction at `threshold`)
    std::string init{"glorot"};
    TrainConfig train;

    std::map<std::string, std::string> inputs;
    std::map<std::string, std::string> outputs;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&);
};

nlohmann::json config_to_json(const ExperimentConfig& cfg);
/// Throws SchemaError on unknown keys or wrongly typed values.
ExperimentConfig config_from_json(const nlohmann::json& j);

} // namespace cpd::cli
