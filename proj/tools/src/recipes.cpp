#include <cpd/cli/recipes.hpp>

#include <cpd/cli/io.hpp>
#include <cpd/cusum.hpp>
#include <cpd/eval.hpp>
#include <cpd/glr.hpp>
#include <cpd/localise.hpp>
#include <cpd/robust.hpp>
#include <cpd/train.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace cpd::cli {
namespace {

using json = nlohmann::json;

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

json header(const std::string& id, std::uint64_t seed, Scale scale) {
    return {{"schema_version", kSchemaVersion}, {"recipe", id}, {"seed", seed}, {"scale", to_string(scale)}};
}

json bound_json(const BoundCheck& b) {
    return {{"empirical", b.empirical}, {"bound", b.bound}, {"slack", b.slack}, {"pass", b.pass}, {"reps", b.reps}};
}

StatisticFn cusum_stat() {
    return [](const Example& ex) { return cusum_statistic(ex.x).statistic; };
}

StatisticFn wilcoxon_stat() {
    return [](const Example& ex) { return wilcoxon_statistic(ex.x).statistic; };
}

TrainConfig epochs_config(std::size_t epochs, std::uint64_t seed) {
    TrainConfig cfg;
    cfg.epochs = epochs;
    cfg.seed = seed;
    return cfg;
}

struct Comparison {
    Scenario scenario{Scenario::S1};
    std::size_t n{100};
    std::size_t train_count{700};
    std::size_t test_count{5000};
    std::size_t seeds{3};
    std::vector<std::size_t> widths;
    Preprocess preprocess;
    std::size_t epochs{200};
    std::string baseline{"cusum"};
};

// Tuned baseline test against a trained network on the same train/test data,
// repeated over derived seeds.
json compare_binary(const Comparison& c, std::uint64_t seed) {
    StatisticFn stat = c.baseline == "wilcoxon" ? wilcoxon_stat() : cusum_stat();
    json runs = json::array();
    std::vector<double> baseline_mer;
    std::vector<double> network_mer;
    for (std::size_t s = 0; s < c.seeds; ++s) {
        std::uint64_t run_seed = derive_seed(seed, s);
        auto train_data = gen_scenario({c.scenario, c.n, c.train_count, Role::train}, derive_seed(run_seed, 1));
        auto test_data = gen_scenario({c.scenario, c.n, c.test_count, Role::test}, derive_seed(run_seed, 2));

        auto fit = tune_threshold(stat, train_data);
        auto base = mer(threshold_classifier(stat, fit.threshold), test_data, run_seed);
        base.threshold = fit.threshold;

        Architecture arch{c.preprocess.input_dim(c.n), c.widths, 1};
        auto net = train(train_data, arch, c.preprocess, epochs_config(c.epochs, derive_seed(run_seed, 3)));
        auto nn = mer(network_classifier(net), test_data, run_seed);

        baseline_mer.push_back(base.mer);
        network_mer.push_back(nn.mer);
        runs.push_back({{"seed", run_seed},
                        {"train_fingerprint", dataset_fingerprint(train_data)},
                        {"baseline", eval_report_json(base)},
                        {"baseline_training_mer", fit.training_mer},
                        {"network", eval_report_json(nn)}});
    }
    double mb = median(baseline_mer);
    double mn = median(network_mer);
    return {{"scenario", to_string(c.scenario)},
            {"n", c.n},
            {"train_size", c.train_count},
            {"test_size", c.test_count},
            {"widths", c.widths},
            {"preprocess", c.preprocess.to_string()},
            {"epochs", c.epochs},
            {"baseline_method", c.baseline},
            {"runs", runs},
            {"median_baseline_mer", mb},
            {"median_network_mer", mn},
            {"network_minus_baseline", mn - mb}};
}

json fig1a(std::uint64_t seed, Scale scale) {
    bool full = scale == Scale::full;
    Comparison c;
    c.scenario = Scenario::S1;
    c.train_count = full ? 700 : 100;
    c.test_count = full ? 5000 : 200;
    c.seeds = full ? 3 : 1;
    c.widths = {2 * c.n - 2};
    c.preprocess = Preprocess::unit();
    c.epochs = full ? 200 : 5;
    auto j = compare_binary(c, seed);
    j["cusum_mer"] = j["median_baseline_mer"];
    j["network_mer"] = j["median_network_mer"];
    return j;
}

json fig1d(std::uint64_t seed, Scale scale) {
    bool full = scale == Scale::full;
    Comparison c;
    c.scenario = Scenario::S3;
    c.train_count = full ? 1000 : 100;
    c.test_count = full ? 5000 : 200;
    c.seeds = full ? 3 : 1;
    c.widths = {2 * c.n - 2};
    c.preprocess = Preprocess::unit();
    c.epochs = full ? 200 : 5;
    auto j = compare_binary(c, seed);
    j["cusum_mer"] = j["median_baseline_mer"];
    j["network_mer"] = j["median_network_mer"];
    return j;
}

json figb1(std::uint64_t seed, Scale scale) {
    bool full = scale == Scale::full;
    Comparison c;
    c.scenario = Scenario::S3;
    c.train_count = full ? 1000 : 100;
    c.test_count = full ? 5000 : 200;
    c.seeds = full ? 3 : 1;
    c.widths = {2 * c.n - 2};
    c.preprocess = Preprocess::parse("zscore_truncate:3+unit_scale");
    c.epochs = full ? 200 : 5;
    c.baseline = "wilcoxon";
    auto j = compare_binary(c, seed);
    j["wilcoxon_mer"] = j["median_baseline_mer"];
    j["network_mer"] = j["median_network_mer"];
    return j;
}

json lemma3(std::uint64_t seed, Scale scale) {
    std::size_t reps = scale == Scale::full ? 20000 : 1000;
    BoundCheckParams p;
    p.n = 100;
    p.eps = 0.05;
    p.snr_factor = 1.05;
    auto a = monte_carlo_bound_check(CheckKind::lemma3a, p, reps, derive_seed(seed, 1));
    auto b = monte_carlo_bound_check(CheckKind::lemma3b, p, reps, derive_seed(seed, 2));
    return {{"n", p.n},
            {"eps", p.eps},
            {"threshold", null_threshold(p.n, p.eps)},
            {"snr_factor", p.snr_factor},
            {"null_false_positive", bound_json(a)},
            {"alternative_miss", bound_json(b)}};
}

json corollary1(std::uint64_t seed, Scale scale) {
    std::size_t reps = scale == Scale::full ? 20000 : 1000;
    BoundCheckParams p;
    p.n = 100;
    p.B = 0.8;
    auto c = monte_carlo_bound_check(CheckKind::corollary1, p, reps, derive_seed(seed, 1));
    return {{"n", p.n}, {"B", p.B}, {"threshold", corollary_threshold(p.n, p.B)}, {"check", bound_json(c)}};
}

json grid_lemma(std::uint64_t /*seed*/, Scale scale) {
    std::size_t n_max = scale == Scale::full ? 512 : 64;
    const double ratio = std::sqrt(3.0) / 3.0;
    std::size_t checks = 0;
    std::size_t violations = 0;
    std::size_t grid_misses = 0;
    double worst = std::numeric_limits<double>::infinity();
    double profile_error = 0.0;
    for (std::size_t n = 16; n <= n_max; ++n) {
        auto grid = dyadic_grid(n);
        for (std::size_t tau = 1; tau < n; ++tau) {
            auto a = step_cusum_profile(n, tau, 1.0);
            double peak = *std::max_element(a.begin(), a.end());
            double half = static_cast<double>(std::min(tau, n - tau)) / 2.0;
            double lowest = std::numeric_limits<double>::infinity();
            bool grid_hit = false;
            for (std::size_t t = 1; t < n; ++t) {
                if (std::abs(static_cast<double>(t) - static_cast<double>(tau)) <= half) {
                    lowest = std::min(lowest, a[t - 1]);
                    grid_hit = grid_hit || std::binary_search(grid.indices.begin(), grid.indices.end(), t);
                }
            }
            ++checks;
            worst = std::min(worst, lowest / peak);
            if (lowest < ratio * peak * (1.0 - 1e-12)) {
                ++violations;
            }
            if (!grid_hit) {
                ++grid_misses;
            }
            if (tau % 7 == 1) {
                std::vector<double> mu(n, 0.0);
                for (std::size_t t = tau; t < n; ++t) mu[t] = 1.0;
                auto c = cusum_transform(mu);
                for (std::size_t i = 0; i + 1 < n; ++i) {
                    profile_error = std::max(profile_error, std::abs(std::abs(c[i]) - a[i]));
                }
            }
        }
    }
    return {{"n_min", 16},
            {"n_max", n_max},
            {"checks", checks},
            {"violations", violations},
            {"worst_ratio", worst},
            {"bound_ratio", ratio},
            {"windows_without_grid_point", grid_misses},
            {"closed_form_max_error", profile_error}};
}

json embedding(std::uint64_t seed, Scale scale) {
    std::size_t inputs = scale == Scale::full ? 10000 : 1000;
    json per_n = json::array();
    std::size_t total_mismatch = 0;
    double glr_error = 0.0;
    for (std::size_t n : {std::size_t{2}, std::size_t{10}, std::size_t{100}}) {
        double lambda = null_threshold(n, 0.05);
        auto full_net = embed_cusum(n, lambda, EmbedVariant::full);
        std::optional<Network> star_net;
        std::optional<DyadicGrid> grid;
        if (n >= 4) {
            star_net = embed_cusum(n, lambda, EmbedVariant::star);
            grid = dyadic_grid(n);
        }
        std::vector<int> outcome(inputs * 4, 0);
        parallel_for(inputs, [&](std::size_t k) {
            Rng rng(derive_seed(derive_seed(seed, n), k));
            std::normal_distribution<double> noise(0.0, 1.0);
            double scale_sd = std::uniform_real_distribution<double>(0.5, 3.0)(rng);
            std::vector<double> x(n);
            for (auto& v : x) v = scale_sd * noise(rng);
            std::size_t tau = std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
            double delta = std::uniform_real_distribution<double>(-4.0, 4.0)(rng);
            for (std::size_t t = tau; t < n; ++t) x[t] += delta;

            double stat = cusum_statistic(x).statistic;
            if (std::abs(stat - lambda) > 1e-9) {
                outcome[4 * k] = 1;
                outcome[4 * k + 1] = forward(full_net, x).label != cusum_classify(x, lambda);
            }
            if (star_net) {
                double star = cusum_star_statistic(x, *grid).statistic;
                if (std::abs(star - lambda) > 1e-9) {
                    outcome[4 * k + 2] = 1;
                    outcome[4 * k + 3] = forward(*star_net, x).label != cusum_star_classify(x, *grid, lambda);
                }
            }
        });
        std::size_t full_checked = 0, full_bad = 0, star_checked = 0, star_bad = 0;
        for (std::size_t k = 0; k < inputs; ++k) {
            full_checked += static_cast<std::size_t>(outcome[4 * k]);
            full_bad += static_cast<std::size_t>(outcome[4 * k + 1]);
            star_checked += static_cast<std::size_t>(outcome[4 * k + 2]);
            star_bad += static_cast<std::size_t>(outcome[4 * k + 3]);
        }
        total_mismatch += full_bad + star_bad;

        auto dirs = glr_directions(ChangeDesign::mean_change(n));
        auto basis = cusum_basis(n);
        double err_n = 0.0;
        for (std::size_t k = 0; k < dirs.locations.size(); ++k) {
            if (dirs.degenerate[k]) continue;
            auto v = basis->vector(dirs.locations[k]);
            double plus = 0.0;
            double minus = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                double g = dirs.rows(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
                plus = std::max(plus, std::abs(g - v[j]));
                minus = std::max(minus, std::abs(g + v[j]));
            }
            err_n = std::max(err_n, std::min(plus, minus));
        }
        glr_error = std::max(glr_error, err_n);
        per_n.push_back({{"n", n},
                         {"threshold", lambda},
                         {"full_hidden_width", full_net.arch.widths[0]},
                         {"full_checked", full_checked},
                         {"full_mismatches", full_bad},
                         {"star_hidden_width", star_net ? star_net->arch.widths[0] : 0},
                         {"star_checked", star_checked},
                         {"star_mismatches", star_bad},
                         {"glr_direction_error", err_n}});
    }
    return {{"inputs_per_n", inputs},
            {"per_n", per_n},
            {"mismatches", total_mismatch},
            {"glr_direction_error", glr_error}};
}

json wilcoxon_oracle(std::uint64_t seed, Scale scale) {
    std::size_t count = scale == Scale::full ? 1000 : 200;
    std::vector<int> equal(count, 0);
    std::vector<int> with_ties(count, 0);
    parallel_for(count, [&](std::size_t k) {
        Rng rng(derive_seed(seed, k));
        std::size_t n = std::uniform_int_distribution<std::size_t>(2, 50)(rng);
        bool ties = k % 3 == 0;
        std::normal_distribution<double> noise(0.0, 1.0);
        std::vector<double> x(n);
        for (auto& v : x) v = ties ? std::round(2.0 * noise(rng)) : noise(rng);
        auto fast = wilcoxon_statistic(x);
        auto direct = wilcoxon_statistic_direct(x);
        equal[k] = fast.statistic == direct.statistic && fast.location == direct.location;
        with_ties[k] = ties;
    });
    std::size_t agree = 0;
    std::size_t tie_cases = 0;
    for (std::size_t k = 0; k < count; ++k) {
        agree += static_cast<std::size_t>(equal[k]);
        tie_cases += static_cast<std::size_t>(with_ties[k]);
    }
    return {{"series", count}, {"exact_agreement", agree}, {"series_with_ties", tie_cases},
            {"mismatches", count - agree}};
}

json gradcheck(std::uint64_t seed, Scale scale) {
    std::size_t count = scale == Scale::full ? 100 : 10;
    std::vector<double> errors(count, 0.0);
    std::vector<std::size_t> nudges(count, 0);
    parallel_for(count, [&](std::size_t k) {
        std::uint64_t s = derive_seed(seed, k);
        Rng rng(s);
        Architecture arch{10, {8, 8}, k % 2 == 0 ? std::size_t{1} : std::size_t{3}};
        Network net = init_network(arch, derive_seed(s, 1));
        std::uniform_real_distribution<double> bias(-0.5, 0.5);
        for (std::size_t l = 0; l + 1 < net.layers.size(); ++l) {
            for (Eigen::Index u = 0; u < net.layers[l].bias.size(); ++u) net.layers[l].bias(u) = bias(rng);
        }
        net.threshold = bias(rng);
        Batch sample;
        sample.inputs.resize(10, 6);
        std::normal_distribution<double> noise(0.0, 1.0);
        for (Eigen::Index c = 0; c < sample.inputs.cols(); ++c) {
            for (Eigen::Index r = 0; r < sample.inputs.rows(); ++r) sample.inputs(r, c) = noise(rng);
            int label = net.binary() ? static_cast<int>(c % 2)
                                     : 1 + static_cast<int>(c % static_cast<Eigen::Index>(arch.output_dim));
            sample.labels.push_back(label);
        }
        auto result = grad_check(net, sample, 1e-5);
        errors[k] = result.max_relative_error;
        nudges[k] = result.nudges;
    });
    std::size_t total_nudges = 0;
    for (auto v : nudges) total_nudges += v;
    return {{"networks", count},
            {"step", 1e-5},
            {"max_relative_error", *std::max_element(errors.begin(), errors.end())},
            {"median_relative_error", median(errors)},
            {"kink_nudges", total_nudges}};
}

json thm_localisation(std::uint64_t seed, Scale /*scale*/) {
    BoundCheckParams p;
    p.n = 192;
    p.B = 1.5;
    p.total_length = 2400;
    p.changes = 3;
    p.jump_lower = 10.0;
    p.jump_upper = 14.0;
    p.gamma = 0.5;
    p.tolerance_scale = 2.0;
    std::size_t reps = 1000;
    auto strict = monte_carlo_bound_check(CheckKind::theorem_localisation, p, reps, derive_seed(seed, 1));

    // Jumps just above the 2 sqrt(2) B condition, location tolerance 2 n B^2 / jump^2.
    BoundCheckParams near = p;
    double edge = 2.0 * std::sqrt(2.0) * p.B;
    near.jump_lower = 1.05 * edge;
    near.jump_upper = 1.5 * edge;
    near.tolerance_scale = 2.0 * static_cast<double>(p.n);
    auto boundary = monte_carlo_bound_check(CheckKind::theorem_localisation, near, reps, derive_seed(seed, 2));

    return {{"window", p.n},
            {"B", p.B},
            {"threshold", star_threshold(p.n, p.B)},
            {"total_length", p.total_length},
            {"changes", p.changes},
            {"gamma", p.gamma},
            {"jumps", {p.jump_lower, p.jump_upper}},
            {"success_rate", 1.0 - strict.empirical},
            {"check", bound_json(strict)},
            {"boundary_jumps", {near.jump_lower, near.jump_upper}},
            {"boundary_success_rate_window_scaled_tolerance", 1.0 - boundary.empirical},
            {"boundary_check", bound_json(boundary)}};
}

json table1(std::uint64_t seed, Scale scale) {
    bool full = scale == Scale::full;
    std::size_t train_per_class = full ? 400 : 20;
    std::size_t test_per_class = full ? 500 : 20;
    auto train_spec = MulticlassSpec::table(SnrRegime::strong, train_per_class);
    auto test_spec = MulticlassSpec::table(SnrRegime::strong, test_per_class);
    auto train_data = gen_multiclass(train_spec, derive_seed(seed, 1));
    auto test_data = gen_multiclass(test_spec, derive_seed(seed, 2));

    auto thresholds = tune_oracle(train_data);
    auto oracle = mer([&](const Example& ex) { return oracle_multiclass(ex, thresholds); }, test_data, seed);
    auto adaptive = mer([](const Example& ex) { return adaptive_classify(ex.x); }, test_data, seed);

    auto pre = Preprocess::parse("unit_scale|unit_scale+square");
    Architecture arch{pre.input_dim(train_spec.n), {64, 64, 64, 64, 64}, 5};
    TrainConfig cfg = epochs_config(full ? 200 : 3, derive_seed(seed, 3));
    cfg.inverse_time_decay = true;
    cfg.decay_rate = 1.0;
    cfg.decay_steps = 2000;
    auto net = train(train_data, arch, pre, cfg);
    auto nn = mer(network_classifier(net), test_data, seed);

    return {{"regime", "strong"},
            {"n", train_spec.n},
            {"train_per_class", train_per_class},
            {"test_per_class", test_per_class},
            {"oracle_thresholds",
             {{"mean", thresholds.mean}, {"variance", thresholds.variance}, {"slope", thresholds.slope}}},
            {"oracle", eval_report_json(oracle)},
            {"adaptive", eval_report_json(adaptive)},
            {"network", eval_report_json(nn)},
            {"network_widths", arch.widths},
            {"network_preprocess", pre.to_string()},
            {"epochs", cfg.epochs},
            {"oracle_accuracy", oracle.accuracy},
            {"adaptive_accuracy", adaptive.accuracy},
            {"network_accuracy", nn.accuracy}};
}

json cross_scenario_recipe(std::uint64_t seed, Scale scale) {
    bool full = scale == Scale::full;
    std::size_t n = 100;
    std::size_t train_count = full ? 700 : 100;
    std::size_t test_count = full ? 5000 : 200;
    std::size_t epochs = full ? 200 : 5;
    Architecture arch{n, {2 * n - 2}, 1};

    auto s1_train = gen_scenario({Scenario::S1, n, train_count, Role::train}, derive_seed(seed, 1));
    auto net = train(s1_train, arch, Preprocess::unit(), epochs_config(epochs, derive_seed(seed, 2)));
    auto cusum_fit = tune_threshold(cusum_stat(), s1_train);

    json targets = json::array();
    for (Scenario target : {Scenario::S1, Scenario::S1prime, Scenario::S2, Scenario::S3}) {
        std::uint64_t test_seed = derive_seed(seed, 10 + static_cast<std::uint64_t>(target));
        ScenarioSpec spec{target, n, test_count, Role::test};
        auto nn = cross_scenario(network_classifier(net), spec, test_seed);
        auto cusum = cross_scenario(threshold_classifier(cusum_stat(), cusum_fit.threshold), spec, test_seed);
        targets.push_back({{"target", to_string(target)},
                           {"network", eval_report_json(nn)},
                           {"cusum", eval_report_json(cusum)}});
    }

    auto twin_train = gen_scenario({Scenario::S1prime, n, train_count, Role::train}, derive_seed(seed, 3));
    auto twin = train(twin_train, arch, Preprocess::unit(), epochs_config(epochs, derive_seed(seed, 4)));
    std::uint64_t twin_test_seed = derive_seed(seed, 10 + static_cast<std::uint64_t>(Scenario::S1prime));
    auto twin_report =
        cross_scenario(network_classifier(twin), {Scenario::S1prime, n, test_count, Role::test}, twin_test_seed);

    return {{"train_scenario", "S1"},
            {"train_size", train_count},
            {"test_size", test_count},
            {"cusum_threshold", cusum_fit.threshold},
            {"targets", targets},
            {"s1prime_trained_twin", eval_report_json(twin_report)}};
}

json rmse_recipe(std::uint64_t seed, Scale scale) {
    std::size_t reps = scale == Scale::full ? 500 : 50;
    std::size_t n = 2000;
    const std::vector<std::pair<std::string, double>> levels{{"weak", 0.5}, {"medium", 1.0}, {"strong", 2.0}};
    json out = json::array();
    std::vector<double> values;
    for (std::size_t level = 0; level < levels.size(); ++level) {
        double multiplier = levels[level].second;
        std::vector<std::vector<std::size_t>> estimates(reps);
        std::vector<std::size_t> truths(reps);
        parallel_for(reps, [&](std::size_t r) {
            Rng rng(derive_seed(derive_seed(seed, level), r));
            std::size_t tau = std::uniform_int_distribution<std::size_t>(2, n - 2)(rng);
            double b = snr_base(n, tau);
            double size = multiplier * std::uniform_real_distribution<double>(0.5 * b, 1.5 * b)(rng);
            double sign = std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
            std::normal_distribution<double> noise(0.0, 1.0);
            std::vector<double> x(n);
            for (std::size_t t = 0; t < n; ++t) x[t] = (t < tau ? 0.0 : sign * size) + noise(rng);
            estimates[r] = {cusum_statistic(x).location};
            truths[r] = tau;
        });
        auto rep = localisation_rmse(estimates, truths);
        values.push_back(rep.rmse);
        out.push_back({{"level", levels[level].first},
                       {"multiplier", multiplier},
                       {"rmse", rep.rmse},
                       {"used", rep.used},
                       {"failures", rep.failures}});
    }
    bool decreasing = true;
    for (std::size_t k = 1; k < values.size(); ++k) decreasing = decreasing && values[k] < values[k - 1];
    return {{"length", n}, {"reps", reps}, {"levels", out}, {"decreasing", decreasing}};
}

using Recipe = std::function<json(std::uint64_t, Scale)>;

const std::map<std::string, Recipe>& registry() {
    static const std::map<std::string, Recipe> recipes{
        {"fig1a", fig1a},
        {"fig1d", fig1d},
        {"figb1", figb1},
        {"lemma3", lemma3},
        {"corollary1", corollary1},
        {"grid-lemma", grid_lemma},
        {"embedding", embedding},
        {"wilcoxon-oracle", wilcoxon_oracle},
        {"gradcheck", gradcheck},
        {"thm-localisation", thm_localisation},
        {"table1", table1},
        {"cross-scenario", cross_scenario_recipe},
        {"rmse", rmse_recipe},
    };
    return recipes;
}

} // namespace

Scale parse_scale(const std::string& text) {
    if (text == "quick") return Scale::quick;
    if (text == "full") return Scale::full;
    throw ParameterError("scale must be 'quick' or 'full', got '" + text + "'");
}

std::string to_string(Scale scale) {
    return scale == Scale::quick ? "quick" : "full";
}

const std::vector<std::string>& recipe_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, recipe] : registry()) out.push_back(name);
        return out;
    }();
    return names;
}

json run_recipe(const std::string& id, std::uint64_t seed, Scale scale) {
    auto found = registry().find(id);
    if (found == registry().end()) {
        throw ParameterError("unknown recipe '" + id + "'");
    }
    json report = header(id, seed, scale);
    report["result"] = found->second(seed, scale);
    return report;
}

} // namespace cpd::cli
