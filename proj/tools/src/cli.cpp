#include <cpd/cli/cli.hpp>

#include <cpd/cli/config.hpp>
#include <cpd/cli/io.hpp>
#include <cpd/cli/recipes.hpp>
#include <cpd/cusum.hpp>
#include <cpd/eval.hpp>
#include <cpd/glr.hpp>
#include <cpd/localise.hpp>
#include <cpd/robust.hpp>
#include <cpd/train.hpp>

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>

namespace cpd::cli {
namespace {

using json = nlohmann::json;

// Flag values that are not part of ExperimentConfig directly.
struct Flags {
    std::string config_path;
    double threshold{0.0};
    double B{0.0};
    std::string data, train_data, test_data, series, network;
    std::string out, csv, report;
    bool n_given{false};
};

std::optional<std::string> config_path_from(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return std::nullopt;
}

std::uint64_t parse_seed(const std::string& text, const std::string& source) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw SchemaError(source + ": '" + text + "' is not an unsigned integer seed");
    }
    return v;
}

std::string input(const ExperimentConfig& cfg, const std::string& key) {
    auto it = cfg.inputs.find(key);
    return it == cfg.inputs.end() ? std::string{} : it->second;
}

std::string output(const ExperimentConfig& cfg, const std::string& key) {
    auto it = cfg.outputs.find(key);
    return it == cfg.outputs.end() ? std::string{} : it->second;
}

std::string require_input(const ExperimentConfig& cfg, const std::string& key) {
    auto path = input(cfg, key);
    if (path.empty()) {
        throw ParameterError(cfg.command + " needs --" + key);
    }
    return path;
}

json wrap(const ExperimentConfig& cfg, json result) {
    return {{"schema_version", kSchemaVersion},
            {"command", cfg.command},
            {"config", config_to_json(cfg)},
            {"result", std::move(result)}};
}

void emit_report(const ExperimentConfig& cfg, const json& report, std::ostream& out, const std::string& key) {
    auto path = output(cfg, key);
    if (path.empty()) {
        out << dump_json(report);
    } else {
        write_json(report, path);
    }
}

Role parse_role(const std::string& text) {
    if (text == "train") return Role::train;
    if (text == "test") return Role::test;
    throw ParameterError("role must be 'train' or 'test', got '" + text + "'");
}

SnrRegime parse_regime(const std::string& text) {
    if (text == "weak") return SnrRegime::weak;
    if (text == "strong") return SnrRegime::strong;
    throw ParameterError("regime must be 'weak' or 'strong', got '" + text + "'");
}

// ---------------------------------------------------------------- simulate

json simulate(const ExperimentConfig& cfg, std::ostream& out) {
    LabeledDataset data;
    if (cfg.scenario == "multiclass") {
        auto spec = MulticlassSpec::table(parse_regime(cfg.regime), cfg.per_class);
        spec.n = cfg.n;
        data = gen_multiclass(spec, cfg.seed);
    } else {
        data = gen_scenario({parse_scenario(cfg.scenario), cfg.n, cfg.count, parse_role(cfg.role)}, cfg.seed);
    }
    auto path = output(cfg, "out");
    if (path.empty()) {
        write_dataset(data, out);
    } else {
        save_dataset(data, path);
    }
    return {{"rows", data.size()}, {"length", data.length()}, {"fingerprint", dataset_fingerprint(data)}};
}

// ------------------------------------------------------------------- train

std::size_t output_dim_for(const LabeledDataset& data, std::size_t classes) {
    std::set<int> labels;
    for (const auto& ex : data.examples) labels.insert(ex.label);
    bool binary = *labels.begin() >= 0 && *labels.rbegin() <= 1;
    if (classes <= 1 && binary) {
        return 1;
    }
    std::size_t k = std::max<std::size_t>(classes, static_cast<std::size_t>(std::max(*labels.rbegin(), 0)));
    if (*labels.begin() < 1 || static_cast<std::size_t>(*labels.rbegin()) > k || k < 2) {
        throw SchemaError("labels must be 0/1 or lie in 1..K for K >= 2 classes");
    }
    return k;
}

json train_command(ExperimentConfig& cfg, std::ostream& out) {
    auto data = load_dataset(require_input(cfg, "data"));
    std::size_t n = data.length();
    cfg.n = n;
    cfg.train.seed = cfg.seed;
    auto pre = Preprocess::parse(cfg.preprocess);

    Network init;
    if (cfg.init == "embed") {
        if (pre.to_string() != Preprocess{}.to_string()) {
            throw ParameterError("embed initialisation needs --preprocess identity");
        }
        double lambda = cfg.threshold ? *cfg.threshold : null_threshold(n, cfg.eps);
        init = embed_cusum(n, lambda);
    } else if (cfg.init == "glorot") {
        auto widths = cfg.widths.empty() ? std::vector<std::size_t>{2 * n - 2} : cfg.widths;
        Architecture arch{pre.input_dim(n), widths, output_dim_for(data, cfg.classes)};
        init = init_network(arch, derive_seed(cfg.seed, 0xC0FFEE));
        init.preprocess = pre;
    } else {
        throw ParameterError("init must be 'glorot' or 'embed', got '" + cfg.init + "'");
    }
    if (init.binary() && output_dim_for(data, cfg.classes) != 1) {
        throw SchemaError("embedded network is binary but the data has class labels");
    }
    auto net = train_network(std::move(init), data, cfg.train);

    auto path = output(cfg, "out");
    if (path.empty()) {
        out << dump_json(network_to_json(net));
    } else {
        save_network(net, path);
    }
    auto fit = mer(network_classifier(net), data, cfg.seed);
    return {{"parameters", net.parameter_count()},
            {"widths", net.arch.widths},
            {"output_dim", net.arch.output_dim},
            {"training", eval_report_json(fit)}};
}

// ------------------------------------------------- detectors and thresholds

struct Detector {
    std::optional<StatisticFn> statistic;
    std::optional<double> threshold;
    std::string threshold_source;
    Classifier classify;
    std::optional<Network> net;
};

StatisticFn statistic_for(const std::string& method) {
    if (method == "cusum") return [](const Example& ex) { return cusum_statistic(ex.x).statistic; };
    if (method == "cusum-star") return [](const Example& ex) { return cusum_star_statistic(ex.x).statistic; };
    if (method == "wilcoxon") return [](const Example& ex) { return wilcoxon_statistic(ex.x).statistic; };
    throw ParameterError("method '" + method + "' has no scalar statistic");
}

Detector make_detector(const ExperimentConfig& cfg, std::size_t n) {
    Detector d;
    const auto& m = cfg.method;
    if (m == "cusum" || m == "cusum-star" || m == "wilcoxon") {
        d.statistic = statistic_for(m);
        auto train_path = input(cfg, "train");
        if (cfg.threshold) {
            d.threshold = *cfg.threshold;
            d.threshold_source = "given";
        } else if (!train_path.empty()) {
            auto train_data = load_dataset(train_path);
            d.threshold = tune_threshold(*d.statistic, train_data).threshold;
            d.threshold_source = "tuned";
        } else if (m == "cusum") {
            d.threshold = cfg.B ? corollary_threshold(n, *cfg.B) : null_threshold(n, cfg.eps);
            d.threshold_source = cfg.B ? "signal" : "null";
        } else if (m == "cusum-star") {
            d.threshold = cfg.B ? star_threshold(n, *cfg.B) : star_null_threshold(n, cfg.eps);
            d.threshold_source = cfg.B ? "signal" : "null";
        } else {
            throw ParameterError("wilcoxon needs --threshold or --train");
        }
        if (m == "wilcoxon" && *d.threshold <= 0.0) {
            throw InvalidThreshold("wilcoxon threshold must be positive");
        }
        d.classify = threshold_classifier(*d.statistic, *d.threshold);
    } else if (m == "network") {
        d.net = load_network(require_input(cfg, "network"));
        d.classify = network_classifier(*d.net);
    } else if (m == "adaptive") {
        d.classify = [](const Example& ex) { return adaptive_classify(ex.x); };
    } else {
        throw ParameterError("unknown method '" + m + "'");
    }
    return d;
}

LabeledDataset detection_inputs(const ExperimentConfig& cfg) {
    auto data_path = input(cfg, "data");
    auto series_path = input(cfg, "series");
    if (!data_path.empty() == !series_path.empty()) {
        throw ParameterError("detect needs exactly one of --data and --series");
    }
    if (!data_path.empty()) {
        return load_dataset(data_path);
    }
    LabeledDataset single;
    Example ex;
    ex.x = Series(load_series(series_path));
    ex.label = -1;
    single.examples.push_back(std::move(ex));
    return single;
}

json detect(const ExperimentConfig& cfg) {
    auto data = detection_inputs(cfg);
    bool labelled = input(cfg, "series").empty();
    auto d = make_detector(cfg, data.length());

    json rows = json::array();
    std::ofstream table;
    auto csv = output(cfg, "csv");
    if (!csv.empty()) {
        table.open(csv, std::ios::binary);
        if (!table) throw Error("cannot write '" + csv + "'");
        table << "index,statistic,location,prediction,label\n";
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& ex = data.examples[i];
        json row = {{"index", i + 1}};
        std::string stat_text;
        std::string loc_text;
        if (d.statistic) {
            ScanResult scan = cfg.method == "cusum"        ? cusum_statistic(ex.x)
                              : cfg.method == "cusum-star" ? cusum_star_statistic(ex.x)
                                                           : wilcoxon_statistic(ex.x);
            row["statistic"] = scan.statistic;
            row["location"] = scan.location;
            stat_text = format_double(scan.statistic);
            loc_text = std::to_string(scan.location);
        } else if (d.net) {
            auto f = classify_series(*d.net, ex.x);
            row["score"] = f.score;
            row["probability"] = f.probability;
            if (d.net->binary()) stat_text = format_double(f.probability[0]);
        }
        int prediction = d.classify(ex);
        row["prediction"] = prediction;
        if (labelled) row["label"] = ex.label;
        rows.push_back(row);
        if (table.is_open()) {
            table << (i + 1) << ',' << stat_text << ',' << loc_text << ',' << prediction << ','
                  << (labelled ? std::to_string(ex.label) : std::string{}) << '\n';
        }
    }
    json result = {{"method", cfg.method}, {"n", data.length()}, {"series", rows}};
    if (d.threshold) {
        result["threshold"] = *d.threshold;
        result["threshold_source"] = d.threshold_source;
    }
    if (labelled) {
        auto report = mer(d.classify, data, cfg.seed);
        report.threshold = d.threshold;
        result["evaluation"] = eval_report_json(report);
    }
    return result;
}

// ---------------------------------------------------------------- localise

json localise_command(const ExperimentConfig& cfg) {
    auto values = load_series(require_input(cfg, "series"));
    Series x(std::move(values));
    WindowClassifier psi;
    std::optional<double> lambda;
    std::size_t window = cfg.window;
    if (cfg.method == "network") {
        auto net = load_network(require_input(cfg, "network"));
        if (!net.binary()) throw ParameterError("localisation needs a binary network");
        std::size_t native = net.arch.input_dim / net.preprocess.channel_count();
        if (window == 0) window = native;
        if (window != native) throw ParameterError("window does not match the network input length");
        psi = network_window(net, window);
    } else {
        if (window < 2) throw ParameterError("localise needs --window of at least 2");
        if (cfg.method == "cusum") {
            lambda = cfg.threshold ? *cfg.threshold
                     : cfg.B       ? corollary_threshold(window, *cfg.B)
                                   : null_threshold(window, cfg.eps);
            psi = cusum_window(window, *lambda);
        } else if (cfg.method == "cusum-star") {
            lambda = cfg.threshold ? *cfg.threshold
                     : cfg.B       ? star_threshold(window, *cfg.B)
                                   : star_null_threshold(window, cfg.eps);
            psi = cusum_star_window(window, *lambda);
        } else {
            throw ParameterError("localise method must be cusum, cusum-star or network");
        }
    }
    auto result = localise(x, psi, cfg.gamma);

    auto csv = output(cfg, "csv");
    if (!csv.empty()) {
        std::ofstream table(csv, std::ios::binary);
        if (!table) throw Error("cannot write '" + csv + "'");
        table << "i,running_mean\n";
        for (std::size_t k = 0; k < result.running_mean.size(); ++k) {
            table << (window + k) << ',' << format_double(result.running_mean[k]) << '\n';
        }
    }
    json segments = json::array();
    for (const auto& [s, e] : result.segments) segments.push_back({s, e});
    json j = {{"method", cfg.method},
              {"length", x.size()},
              {"window", window},
              {"gamma", cfg.gamma},
              {"change_points", result.change_points},
              {"segments", segments},
              {"windows_flagged",
               std::count(result.sliding.labels.begin(), result.sliding.labels.end(), 1)}};
    if (lambda) j["threshold"] = *lambda;
    return j;
}

// ---------------------------------------------------------------- evaluate

json evaluate(const ExperimentConfig& cfg) {
    auto test = load_dataset(require_input(cfg, "test"));
    auto d = make_detector(cfg, test.length());
    auto report = mer(d.classify, test, cfg.seed);
    report.threshold = d.threshold;
    json j = {{"method", cfg.method}, {"evaluation", eval_report_json(report)}};
    if (d.threshold) j["threshold_source"] = d.threshold_source;
    return j;
}

// --------------------------------------------------------------- argument

void add_common(CLI::App* sub, ExperimentConfig& cfg, Flags& flags) {
    sub->add_option("--seed", cfg.seed, "Random seed (falls back to CPD_SEED)");
    sub->add_option("--threads", cfg.threads, "Worker thread cap, 0 for hardware concurrency");
    sub->add_option("--config", flags.config_path, "JSON config; flags override its fields");
}

void add_method(CLI::App* sub, ExperimentConfig& cfg, Flags& flags) {
    sub->add_option("--method", cfg.method, "cusum, cusum-star, wilcoxon, network or adaptive");
    sub->add_option("--threshold", flags.threshold, "Decision threshold");
    sub->add_option("--eps", cfg.eps, "Level of the default null threshold");
    sub->add_option("--B", flags.B, "Signal level of the default signal threshold");
    sub->add_option("--network", flags.network, "Network JSON");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    ExperimentConfig cfg;
    Flags flags;
    try {
        if (const char* env = std::getenv("CPD_SEED"); env != nullptr && *env != '\0') {
            cfg.seed = parse_seed(env, "CPD_SEED");
        }
        if (auto path = config_path_from(args)) {
            std::uint64_t env_seed = cfg.seed;
            auto j = read_json(*path);
            cfg = config_from_json(j);
            if (!j.contains("seed")) cfg.seed = env_seed;
        }
        flags.data = input(cfg, "data");
        flags.train_data = input(cfg, "train");
        flags.test_data = input(cfg, "test");
        flags.series = input(cfg, "series");
        flags.network = input(cfg, "network");
        flags.out = output(cfg, "out");
        flags.csv = output(cfg, "csv");
        flags.report = output(cfg, "report");
        if (cfg.threshold) flags.threshold = *cfg.threshold;
        if (cfg.B) flags.B = *cfg.B;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }

    CLI::App app{"Change-point detection with CUSUM tests and neural networks", "cpd"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "Generate a labelled dataset as CSV");
    add_common(sim, cfg, flags);
    sim->add_option("--scenario", cfg.scenario, "S1, S1', S2, S3 or multiclass");
    auto* n_opt = sim->add_option("--n", cfg.n, "Series length");
    sim->add_option("--N", cfg.count, "Number of series");
    sim->add_option("--role", cfg.role, "train or test magnitude range");
    sim->add_option("--regime", cfg.regime, "weak or strong (multiclass)");
    sim->add_option("--per-class", cfg.per_class, "Series per class (multiclass)");
    sim->add_option("--out", flags.out, "Dataset CSV (stdout when omitted)");
    sim->add_option("--report", flags.report, "JSON run report");

    auto* tr = app.add_subcommand("train", "Train a ReLU network on a dataset CSV");
    add_common(tr, cfg, flags);
    tr->add_option("--data", flags.data, "Training CSV")->required();
    tr->add_option("--widths", cfg.widths, "Hidden widths, comma separated")->delimiter(',');
    tr->add_option("--classes", cfg.classes, "Number of classes (inferred from labels)");
    tr->add_option("--preprocess", cfg.preprocess, "Input channels, e.g. unit_scale|unit_scale+square");
    tr->add_option("--init", cfg.init, "glorot or embed");
    tr->add_option("--threshold", flags.threshold, "CUSUM threshold for --init embed");
    tr->add_option("--eps", cfg.eps, "Level of the default embed threshold");
    tr->add_option("--epochs", cfg.train.epochs);
    tr->add_option("--batch-size", cfg.train.batch_size);
    tr->add_option("--lr", cfg.train.learning_rate);
    tr->add_flag("--decay", cfg.train.inverse_time_decay, "Inverse-time learning-rate decay");
    tr->add_option("--decay-rate", cfg.train.decay_rate);
    tr->add_option("--decay-steps", cfg.train.decay_steps);
    tr->add_option("--out", flags.out, "Network JSON (stdout when omitted)");
    tr->add_option("--report", flags.report, "JSON run report");

    auto* det = app.add_subcommand("detect", "Classify series as change or no change");
    add_common(det, cfg, flags);
    add_method(det, cfg, flags);
    det->add_option("--data", flags.data, "Dataset CSV");
    det->add_option("--series", flags.series, "Single series file");
    det->add_option("--train", flags.train_data, "Dataset CSV to tune the threshold on");
    det->add_option("--out", flags.out, "JSON report (stdout when omitted)");
    det->add_option("--csv", flags.csv, "Per-series CSV");

    auto* loc = app.add_subcommand("localise", "Estimate change locations in a long series");
    add_common(loc, cfg, flags);
    add_method(loc, cfg, flags);
    loc->add_option("--series", flags.series, "Series file")->required();
    loc->add_option("--window", cfg.window, "Window length n");
    loc->add_option("--gamma", cfg.gamma, "Running-mean level in (0, 1]");
    loc->add_option("--out", flags.out, "JSON report (stdout when omitted)");
    loc->add_option("--csv", flags.csv, "Running mean CSV");

    auto* ev = app.add_subcommand("evaluate", "Misclassification rate on a labelled CSV");
    add_common(ev, cfg, flags);
    add_method(ev, cfg, flags);
    ev->add_option("--test", flags.test_data, "Test CSV")->required();
    ev->add_option("--train", flags.train_data, "Dataset CSV to tune the threshold on");
    ev->add_option("--out", flags.out, "JSON report (stdout when omitted)");
    ev->add_option("--csv", flags.csv, "Flat key,value CSV");

    auto* rep = app.add_subcommand("reproduce", "Run a named experiment recipe");
    add_common(rep, cfg, flags);
    rep->add_option("recipe", cfg.recipe, "Recipe id")->required();
    rep->add_option("--scale", cfg.scale, "quick or full");
    rep->add_option("--out", flags.out, "JSON report (stdout when omitted)");
    rep->add_option("--csv", flags.csv, "Flat key,value CSV");

    std::vector<const char*> argv{"cpd"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitInvalid;
    }

    auto* chosen = app.get_subcommands().front();
    cfg.command = chosen->get_name();
    auto given = [&](const char* name) {
        auto* opt = chosen->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };
    flags.n_given = n_opt->count() > 0;

    int code = kExitOk;
    try {
        if (given("--threshold") || cfg.threshold) cfg.threshold = flags.threshold;
        if (given("--B") || cfg.B) cfg.B = flags.B;
        auto set_path = [](std::map<std::string, std::string>& m, const char* key, const std::string& v) {
            if (!v.empty()) m[key] = v;
        };
        set_path(cfg.inputs, "data", flags.data);
        set_path(cfg.inputs, "train", flags.train_data);
        set_path(cfg.inputs, "test", flags.test_data);
        set_path(cfg.inputs, "series", flags.series);
        set_path(cfg.inputs, "network", flags.network);
        set_path(cfg.outputs, "out", flags.out);
        set_path(cfg.outputs, "csv", flags.csv);
        set_path(cfg.outputs, "report", flags.report);
        if (cfg.command == "simulate" && cfg.scenario == "multiclass" && !flags.n_given) {
            cfg.n = MulticlassSpec{}.n;
        }
        set_max_threads(cfg.threads);
        cfg.train.validate();

        if (cfg.command == "simulate") {
            auto report = wrap(cfg, simulate(cfg, out));
            if (!flags.report.empty()) write_json(report, flags.report);
        } else if (cfg.command == "train") {
            auto result = train_command(cfg, out);
            if (!flags.report.empty()) write_json(wrap(cfg, result), flags.report);
        } else if (cfg.command == "reproduce") {
            auto scale = parse_scale(cfg.scale);
            auto report = run_recipe(cfg.recipe, cfg.seed, scale);
            report["config"] = config_to_json(cfg);
            emit_report(cfg, report, out, "out");
            if (!flags.csv.empty()) write_flat_csv(report, flags.csv);
        } else {
            json result = cfg.command == "detect"     ? detect(cfg)
                          : cfg.command == "localise" ? localise_command(cfg)
                                                      : evaluate(cfg);
            auto report = wrap(cfg, result);
            emit_report(cfg, report, out, "out");
            if (cfg.command == "evaluate" && !flags.csv.empty()) write_flat_csv(report, flags.csv);
        }
    } catch (const SchemaError& e) {
        err << "error: " << e.what() << '\n';
        code = kExitInvalid;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n';
        code = kExitInvalid;
    } catch (const InvalidThreshold& e) {
        err << "error: " << e.what() << '\n';
        code = kExitInvalid;
    } catch (const InvalidLength& e) {
        err << "error: " << e.what() << '\n';
        code = kExitInvalid;
    } catch (const ShapeError& e) {
        err << "error: " << e.what() << '\n';
        code = kExitInvalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        code = kExitRuntime;
    }
    return code;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

} // namespace cpd::cli
