#pragma once

// Dataset CSV, series files, network and report JSON.

#include <cpd/eval.hpp>
#include <cpd/nn.hpp>
#include <cpd/simgen.hpp>

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace cpd::cli {

/// Malformed input file or configuration; maps to exit code 2.
class SchemaError : public Error {
public:
    using Error::Error;
};

inline constexpr int kSchemaVersion = 1;

/// Locale-independent, 17 significant digits, '.' separator.
std::string format_double(double v);
double parse_double(const std::string& text, const std::string& where);

/// Header `label,tau,x1..xn`; tau is empty for rows without a change.
void write_dataset(const LabeledDataset& data, std::ostream& out);
void save_dataset(const LabeledDataset& data, const std::string& path);
LabeledDataset read_dataset(std::istream& in, const std::string& name);
LabeledDataset load_dataset(const std::string& path);

/// Numbers separated by commas, whitespace or newlines. A first line that
/// does not parse as numbers is taken as a header and skipped.
std::vector<double> load_series(const std::string& path);

nlohmann::json network_to_json(const Network& net);
Network network_from_json(const nlohmann::json& j);
void save_network(const Network& net, const std::string& path);
Network load_network(const std::string& path);

nlohmann::json read_json(const std::string& path);
/// Pretty-printed with a trailing newline.
void write_json(const nlohmann::json& j, const std::string& path);
std::string dump_json(const nlohmann::json& j);

/// One `key,value` row per leaf, keys joined with '.', array indices inline.
void write_flat_csv(const nlohmann::json& j, const std::string& path);

nlohmann::json eval_report_json(const EvalReport& report);

} // namespace cpd::cli
