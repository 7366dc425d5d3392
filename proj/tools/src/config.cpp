#include <cpd/cli/config.hpp>

#include <cpd/cli/io.hpp>

#include <set>

namespace cpd::cli {
namespace {

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out) {
    if (!j.contains(key)) {
        return;
    }
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw SchemaError(std::string("config field '") + key + "' has the wrong type");
    }
}

template <typename T>
void read_optional(const nlohmann::json& j, const char* key, std::optional<T>& out) {
    if (!j.contains(key) || j.at(key).is_null()) {
        out.reset();
        return;
    }
    T value{};
    read(j, key, value);
    out = value;
}

nlohmann::json train_to_json(const TrainConfig& t) {
    return {{"epochs", t.epochs},
            {"batch_size", t.batch_size},
            {"learning_rate", t.learning_rate},
            {"beta1", t.beta1},
            {"beta2", t.beta2},
            {"epsilon", t.epsilon},
            {"inverse_time_decay", t.inverse_time_decay},
            {"decay_rate", t.decay_rate},
            {"decay_steps", t.decay_steps},
            {"seed", t.seed}};
}

TrainConfig train_from_json(const nlohmann::json& j) {
    static const std::set<std::string> known{"epochs",  "batch_size",         "learning_rate",
                                             "beta1",   "beta2",              "epsilon",
                                             "inverse_time_decay", "decay_rate", "decay_steps", "seed"};
    if (!j.is_object()) {
        throw SchemaError("config field 'train' must be an object");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key())) {
            throw SchemaError("unknown config field 'train." + it.key() + "'");
        }
    }
    TrainConfig t;
    read(j, "epochs", t.epochs);
    read(j, "batch_size", t.batch_size);
    read(j, "learning_rate", t.learning_rate);
    read(j, "beta1", t.beta1);
    read(j, "beta2", t.beta2);
    read(j, "epsilon", t.epsilon);
    read(j, "inverse_time_decay", t.inverse_time_decay);
    read(j, "decay_rate", t.decay_rate);
    read(j, "decay_steps", t.decay_steps);
    read(j, "seed", t.seed);
    return t;
}

bool same_train(const TrainConfig& a, const TrainConfig& b) {
    return a.epochs == b.epochs && a.batch_size == b.batch_size && a.learning_rate == b.learning_rate &&
           a.beta1 == b.beta1 && a.beta2 == b.beta2 && a.epsilon == b.epsilon &&
           a.inverse_time_decay == b.inverse_time_decay && a.decay_rate == b.decay_rate &&
           a.decay_steps == b.decay_steps && a.seed == b.seed;
}

} // namespace

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.command == b.command && a.recipe == b.recipe && a.scale == b.scale && a.scenario == b.scenario &&
           a.role == b.role && a.n == b.n && a.count == b.count && a.regime == b.regime &&
           a.per_class == b.per_class && a.seed == b.seed && a.threads == b.threads && a.method == b.method &&
           a.threshold == b.threshold && a.eps == b.eps && a.B == b.B && a.gamma == b.gamma &&
           a.window == b.window && a.widths == b.widths && a.classes == b.classes &&
           a.preprocess == b.preprocess && a.init == b.init && same_train(a.train, b.train) &&
           a.inputs == b.inputs && a.outputs == b.outputs;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = c.command;
    j["recipe"] = c.recipe;
    j["scale"] = c.scale;
    j["scenario"] = c.scenario;
    j["role"] = c.role;
    j["n"] = c.n;
    j["count"] = c.count;
    j["regime"] = c.regime;
    j["per_class"] = c.per_class;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["method"] = c.method;
    j["threshold"] = c.threshold ? nlohmann::json(*c.threshold) : nlohmann::json(nullptr);
    j["eps"] = c.eps;
    j["B"] = c.B ? nlohmann::json(*c.B) : nlohmann::json(nullptr);
    j["gamma"] = c.gamma;
    j["window"] = c.window;
    j["widths"] = c.widths;
    j["classes"] = c.classes;
    j["preprocess"] = c.preprocess;
    j["init"] = c.init;
    j["train"] = train_to_json(c.train);
    j["inputs"] = c.inputs;
    j["outputs"] = c.outputs;
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    static const std::set<std::string> known{
        "schema_version", "command", "recipe", "scale",  "scenario", "role",    "n",          "count",
        "regime",         "per_class", "seed", "threads", "method",  "threshold", "eps",      "B",
        "gamma",          "window",  "widths", "classes", "preprocess", "init", "train",      "inputs",
        "outputs"};
    if (!j.is_object()) {
        throw SchemaError("config must be a JSON object");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key())) {
            throw SchemaError("unknown config field '" + it.key() + "'");
        }
    }
    if (j.contains("schema_version")) {
        int version = 0;
        read(j, "schema_version", version);
        if (version != kSchemaVersion) {
            throw SchemaError("unsupported config schema_version " + std::to_string(version));
        }
    }
    ExperimentConfig c;
    read(j, "command", c.command);
    read(j, "recipe", c.recipe);
    read(j, "scale", c.scale);
    read(j, "scenario", c.scenario);
    read(j, "role", c.role);
    read(j, "n", c.n);
    read(j, "count", c.count);
    read(j, "regime", c.regime);
    read(j, "per_class", c.per_class);
    read(j, "seed", c.seed);
    read(j, "threads", c.threads);
    read(j, "method", c.method);
    read_optional(j, "threshold", c.threshold);
    read(j, "eps", c.eps);
    read_optional(j, "B", c.B);
    read(j, "gamma", c.gamma);
    read(j, "window", c.window);
    read(j, "widths", c.widths);
    read(j, "classes", c.classes);
    read(j, "preprocess", c.preprocess);
    read(j, "init", c.init);
    if (j.contains("train")) {
        c.train = train_from_json(j.at("train"));
    }
    read(j, "inputs", c.inputs);
    read(j, "outputs", c.outputs);
    return c;
}

} // namespace cpd::cli
