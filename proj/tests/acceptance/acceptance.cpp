// Acceptance run: one PASS/FAIL line per criterion at full scale.
//
//   acceptance [--seed S] [--report path] [--known-failure id]...
//
// Exit status is 0 when every criterion passes, or when the only failures are
// listed with --known-failure. Known failures are still reported as FAIL.

#include <cpd/cli/io.hpp>
#include <cpd/cli/recipes.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <string>
#include <vector>

using nlohmann::json;
using cpd::cli::Scale;

namespace {

// Pinned tolerances.
constexpr double kEmbeddingDirectionTol = 1e-10;
constexpr double kEmbeddingSeconds = 30.0;
constexpr double kNullCheckSeconds = 60.0;
constexpr double kSigmaMultiplier = 3.0;
constexpr double kFig1aBand = 0.05;
constexpr double kFig1dMargin = 0.05;
constexpr double kGradTol = 1e-4;
constexpr double kLocalisationRate = 0.95;
constexpr double kMlpAccuracy = 0.75;

struct Outcome {
    bool pass{false};
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    std::string recipe;
    std::function<Outcome(const json& result, double seconds)> judge;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

bool within_bound(const json& check) {
    double empirical = check.at("empirical").get<double>();
    double bound = check.at("bound").get<double>();
    double reps = check.at("reps").get<double>();
    return empirical <= bound + kSigmaMultiplier * std::sqrt(bound * (1.0 - bound) / reps);
}

std::vector<Criterion> criteria() {
    return {
        {1, "embedding equivalence", "embedding",
         [](const json& r, double s) {
             bool inputs = r.at("inputs_per_n").get<std::size_t>() >= 10000;
             double dir = r.at("glr_direction_error").get<double>();
             std::size_t bad = r.at("mismatches").get<std::size_t>();
             return Outcome{inputs && bad == 0 && dir <= kEmbeddingDirectionTol && s < kEmbeddingSeconds,
                            "mismatches=" + std::to_string(bad) + " direction_error=" + num(dir)};
         }},
        {2, "null level and detection power", "lemma3",
         [](const json& r, double s) {
             const auto& a = r.at("null_false_positive");
             const auto& b = r.at("alternative_miss");
             return Outcome{within_bound(a) && within_bound(b) && s < kNullCheckSeconds &&
                                a.at("reps").get<std::size_t>() >= 20000,
                            "fpr=" + num(a.at("empirical").get<double>()) +
                                " miss=" + num(b.at("empirical").get<double>()) + " bound=0.05"};
         }},
        {3, "signal-level error bound", "corollary1",
         [](const json& r, double) {
             const auto& c = r.at("check");
             double expected = 100.0 * std::exp(-8.0);
             bool bound_ok = std::abs(c.at("bound").get<double>() - expected) < 1e-12;
             return Outcome{bound_ok && within_bound(c) && c.at("reps").get<std::size_t>() >= 20000,
                            "error=" + num(c.at("empirical").get<double>()) + " bound=" + num(expected)};
         }},
        {4, "dyadic grid inequality", "grid-lemma",
         [](const json& r, double) {
             std::size_t v = r.at("violations").get<std::size_t>();
             return Outcome{v == 0 && r.at("n_max").get<std::size_t>() >= 512,
                            "violations=" + std::to_string(v) + " worst_ratio=" + num(r.at("worst_ratio").get<double>())};
         }},
        {5, "S1 network tracks tuned CUSUM", "fig1a",
         [](const json& r, double) {
             double gap = r.at("network_minus_baseline").get<double>();
             return Outcome{std::abs(gap) <= kFig1aBand,
                            "cusum=" + num(r.at("median_baseline_mer").get<double>()) +
                                " network=" + num(r.at("median_network_mer").get<double>())};
         }},
        {6, "S3 network beats tuned CUSUM", "fig1d",
         [](const json& r, double) {
             double gap = r.at("network_minus_baseline").get<double>();
             return Outcome{gap <= -kFig1dMargin,
                            "cusum=" + num(r.at("median_baseline_mer").get<double>()) +
                                " network=" + num(r.at("median_network_mer").get<double>())};
         }},
        {7, "truncated-input network vs tuned Wilcoxon", "figb1",
         [](const json& r, double) {
             double gap = r.at("network_minus_baseline").get<double>();
             return Outcome{gap <= 0.0, "wilcoxon=" + num(r.at("median_baseline_mer").get<double>()) +
                                            " network=" + num(r.at("median_network_mer").get<double>())};
         }},
        {8, "Wilcoxon fast evaluation is exact", "wilcoxon-oracle",
         [](const json& r, double) {
             std::size_t bad = r.at("mismatches").get<std::size_t>();
             return Outcome{bad == 0 && r.at("series").get<std::size_t>() >= 1000,
                            "mismatches=" + std::to_string(bad)};
         }},
        {9, "gradient check", "gradcheck",
         [](const json& r, double) {
             double e = r.at("max_relative_error").get<double>();
             return Outcome{e <= kGradTol && r.at("networks").get<std::size_t>() >= 100,
                            "max_relative_error=" + num(e)};
         }},
        {10, "sliding-window localisation", "thm-localisation",
         [](const json& r, double) {
             double rate = r.at("success_rate").get<double>();
             return Outcome{rate >= kLocalisationRate, "success_rate=" + num(rate)};
         }},
        {11, "multiclass ordering", "table1",
         [](const json& r, double) {
             double o = r.at("oracle_accuracy").get<double>();
             double a = r.at("adaptive_accuracy").get<double>();
             double m = r.at("network_accuracy").get<double>();
             return Outcome{o >= a && m >= kMlpAccuracy,
                            "oracle=" + num(o) + " adaptive=" + num(a) + " mlp=" + num(m)};
         }},
    };
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::uint64_t seed = 7;
    std::string report_path;
    std::vector<int> known;
    app.add_option("--seed", seed, "Seed shared by every recipe");
    app.add_option("--report", report_path, "Write all recipe reports as JSON");
    app.add_option("--known-failure", known, "Criterion id allowed to fail");
    CLI11_PARSE(app, argc, argv);
    std::set<int> allowed(known.begin(), known.end());

    json reports = json::object();
    int unexpected = 0;
    int failed = 0;
    auto record = [&](int id, const std::string& name, const Outcome& o, double seconds) {
        bool tolerated = !o.pass && allowed.count(id);
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " " << name << ": " << o.detail << " ("
                  << num(seconds) << " s)" << (tolerated ? " [known failure]" : "") << std::endl;
        failed += !o.pass;
        unexpected += !o.pass && !tolerated;
    };

    for (const auto& c : criteria()) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            auto report = cpd::cli::run_recipe(c.recipe, seed, Scale::full);
            double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            reports[c.recipe] = report;
            o = c.judge(report.at("result"), seconds);
            record(c.id, c.name, o, seconds);
        } catch (const std::exception& e) {
            double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            record(c.id, c.name, Outcome{false, std::string("error: ") + e.what()}, seconds);
        }
    }

    // Reruns at quick scale keep this within the test timeout.
    {
        auto start = std::chrono::steady_clock::now();
        std::vector<std::string> differing;
        try {
            for (const auto& id : cpd::cli::recipe_names()) {
                auto first = cpd::cli::dump_json(cpd::cli::run_recipe(id, seed, Scale::quick));
                auto second = cpd::cli::dump_json(cpd::cli::run_recipe(id, seed, Scale::quick));
                if (first != second) differing.push_back(id);
            }
            std::string detail = std::to_string(cpd::cli::recipe_names().size()) + " recipes, differing=" +
                                 std::to_string(differing.size());
            for (const auto& id : differing) detail += " " + id;
            double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            record(12, "byte-identical reruns", Outcome{differing.empty(), detail}, seconds);
        } catch (const std::exception& e) {
            double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            record(12, "byte-identical reruns", Outcome{false, std::string("error: ") + e.what()}, seconds);
        }
    }

    if (!report_path.empty()) {
        cpd::cli::write_json(reports, report_path);
    }
    std::cout << (12 - failed) << "/12 criteria pass";
    if (failed != unexpected) std::cout << ", " << (failed - unexpected) << " known failure(s)";
    std::cout << std::endl;
    return unexpected == 0 ? 0 : 1;
}
