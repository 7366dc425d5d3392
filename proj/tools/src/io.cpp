#include <cpd/cli/io.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace cpd::cli {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell.push_back(c);
        }
    }
    cells.push_back(cell);
    return cells;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw SchemaError("cannot open '" + path + "'");
    }
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path + "'");
    }
    return out;
}

template <typename T>
T required(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) {
        throw SchemaError(std::string("network JSON is missing '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw SchemaError(std::string("network JSON field '") + key + "' has the wrong type");
    }
}

void flatten(const nlohmann::json& j, const std::string& prefix, std::ostream& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        }
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            flatten(j[i], prefix + "." + std::to_string(i), out);
        }
    } else if (j.is_number_float()) {
        out << prefix << ',' << format_double(j.get<double>()) << '\n';
    } else if (j.is_string()) {
        out << prefix << ',' << j.get<std::string>() << '\n';
    } else {
        out << prefix << ',' << j.dump() << '\n';
    }
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text, const std::string& where) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    while (first < last && *first == ' ') ++first;
    while (last > first && last[-1] == ' ') --last;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || first == last) {
        throw SchemaError(where + ": '" + text + "' is not a number");
    }
    return v;
}

void write_dataset(const LabeledDataset& data, std::ostream& out) {
    std::size_t n = data.length();
    out << "label,tau";
    for (std::size_t j = 1; j <= n; ++j) {
        out << ",x" << j;
    }
    out << '\n';
    for (const auto& ex : data.examples) {
        out << ex.label << ',';
        if (ex.meta.tau) {
            out << *ex.meta.tau;
        }
        for (double v : ex.x) {
            out << ',' << format_double(v);
        }
        out << '\n';
    }
}

void save_dataset(const LabeledDataset& data, const std::string& path) {
    auto out = open_output(path);
    write_dataset(data, out);
    if (!out) {
        throw Error("failed writing '" + path + "'");
    }
}

LabeledDataset read_dataset(std::istream& in, const std::string& name) {
    std::string line;
    if (!std::getline(in, line) || line.empty() || line == "\r") {
        throw SchemaError(name + ": empty file, expected header label,tau,x1..xn");
    }
    auto header = split_csv(line);
    if (header.empty() || header[0] != "label") {
        throw SchemaError(name + ": header is missing column 'label'");
    }
    if (header.size() < 2 || header[1] != "tau") {
        throw SchemaError(name + ": header is missing column 'tau'");
    }
    std::size_t n = header.size() - 2;
    for (std::size_t j = 1; j <= n; ++j) {
        if (header[j + 1] != "x" + std::to_string(j)) {
            throw SchemaError(name + ": header is missing column 'x" + std::to_string(j) + "'");
        }
    }
    if (n < 2) {
        throw SchemaError(name + ": header is missing column 'x" + std::to_string(n + 1) + "'");
    }

    LabeledDataset data;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        std::string where = name + ":" + std::to_string(line_no);
        auto cells = split_csv(line);
        if (cells.size() != n + 2) {
            throw SchemaError(where + ": expected " + std::to_string(n + 2) + " fields, found " +
                              std::to_string(cells.size()));
        }
        Example ex;
        int label = 0;
        auto [lp, lec] = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), label);
        if (lec != std::errc{} || lp != cells[0].data() + cells[0].size() || cells[0].empty()) {
            throw SchemaError(where + ": label '" + cells[0] + "' is not an integer");
        }
        ex.label = label;
        if (!cells[1].empty()) {
            std::size_t tau = 0;
            auto [tp, tec] = std::from_chars(cells[1].data(), cells[1].data() + cells[1].size(), tau);
            if (tec != std::errc{} || tp != cells[1].data() + cells[1].size() || tau < 1 || tau >= n) {
                throw SchemaError(where + ": tau '" + cells[1] + "' is not an index in [1, n-1]");
            }
            ex.meta.tau = tau;
        }
        std::vector<double> values(n);
        for (std::size_t j = 0; j < n; ++j) {
            values[j] = parse_double(cells[j + 2], where + " column x" + std::to_string(j + 1));
        }
        try {
            ex.x = Series(std::move(values));
        } catch (const Error& e) {
            throw SchemaError(where + ": " + e.what());
        }
        data.examples.push_back(std::move(ex));
    }
    if (data.empty()) {
        throw SchemaError(name + ": no data rows");
    }
    return data;
}

LabeledDataset load_dataset(const std::string& path) {
    auto in = open_input(path);
    return read_dataset(in, path);
}

std::vector<double> load_series(const std::string& path) {
    auto in = open_input(path);
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        for (char& c : line) {
            if (c == ',' || c == '\t' || c == '\r') c = ' ';
        }
        std::istringstream tokens(line);
        std::string token;
        std::vector<double> row;
        bool numeric = true;
        while (tokens >> token) {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
            if (ec != std::errc{} || ptr != token.data() + token.size()) {
                numeric = false;
                break;
            }
            row.push_back(v);
        }
        if (!numeric) {
            if (line_no == 1) {
                continue;
            }
            throw SchemaError(path + ":" + std::to_string(line_no) + ": '" + token + "' is not a number");
        }
        values.insert(values.end(), row.begin(), row.end());
    }
    if (values.empty()) {
        throw SchemaError(path + ": no values");
    }
    return values;
}

nlohmann::json network_to_json(const Network& net) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "relu_network";
    j["input_dim"] = net.arch.input_dim;
    j["widths"] = net.arch.widths;
    j["output_dim"] = net.arch.output_dim;
    j["threshold"] = net.threshold;
    j["preprocess"] = net.preprocess.to_string();
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& layer : net.layers) {
        std::vector<double> weight;
        weight.reserve(static_cast<std::size_t>(layer.weight.size()));
        for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
            for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
                weight.push_back(layer.weight(r, c));
            }
        }
        std::vector<double> bias(layer.bias.data(), layer.bias.data() + layer.bias.size());
        layers.push_back({{"rows", layer.weight.rows()},
                          {"cols", layer.weight.cols()},
                          {"weight", weight},
                          {"bias", bias}});
    }
    j["layers"] = layers;
    return j;
}

Network network_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw SchemaError("network JSON must be an object");
    }
    if (required<int>(j, "schema_version") != kSchemaVersion) {
        throw SchemaError("unsupported network schema_version");
    }
    Network net;
    net.arch.input_dim = required<std::size_t>(j, "input_dim");
    net.arch.widths = required<std::vector<std::size_t>>(j, "widths");
    net.arch.output_dim = required<std::size_t>(j, "output_dim");
    net.threshold = required<double>(j, "threshold");
    try {
        net.preprocess = Preprocess::parse(required<std::string>(j, "preprocess"));
    } catch (const ParameterError& e) {
        throw SchemaError(e.what());
    }
    if (!j.contains("layers")) {
        throw SchemaError("network JSON is missing 'layers'");
    }
    const auto& layers = j.at("layers");
    if (!layers.is_array()) {
        throw SchemaError("network JSON field 'layers' must be an array");
    }
    for (const auto& entry : layers) {
        auto rows = required<Eigen::Index>(entry, "rows");
        auto cols = required<Eigen::Index>(entry, "cols");
        auto weight = required<std::vector<double>>(entry, "weight");
        auto bias = required<std::vector<double>>(entry, "bias");
        if (static_cast<Eigen::Index>(weight.size()) != rows * cols ||
            static_cast<Eigen::Index>(bias.size()) != rows) {
            throw SchemaError("network layer arrays do not match rows x cols");
        }
        Layer layer;
        layer.weight.resize(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c) {
                layer.weight(r, c) = weight[static_cast<std::size_t>(r * cols + c)];
            }
        }
        layer.bias = Eigen::Map<const Eigen::VectorXd>(bias.data(), rows);
        net.layers.push_back(std::move(layer));
    }
    try {
        net.validate();
    } catch (const Error& e) {
        throw SchemaError(std::string("invalid network: ") + e.what());
    }
    return net;
}

void save_network(const Network& net, const std::string& path) {
    write_json(network_to_json(net), path);
}

Network load_network(const std::string& path) {
    return network_from_json(read_json(path));
}

nlohmann::json read_json(const std::string& path) {
    auto in = open_input(path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

std::string dump_json(const nlohmann::json& j) {
    return j.dump(2) + "\n";
}

void write_json(const nlohmann::json& j, const std::string& path) {
    auto out = open_output(path);
    out << dump_json(j);
    if (!out) {
        throw Error("failed writing '" + path + "'");
    }
}

void write_flat_csv(const nlohmann::json& j, const std::string& path) {
    auto out = open_output(path);
    out << "key,value\n";
    flatten(j, "", out);
    if (!out) {
        throw Error("failed writing '" + path + "'");
    }
}

nlohmann::json eval_report_json(const EvalReport& r) {
    nlohmann::json per_class = nlohmann::json::object();
    for (const auto& [label, counts] : r.per_class) {
        per_class[std::to_string(label)] = {
            {"total", counts.total}, {"correct", counts.correct}, {"rate", counts.rate()}};
    }
    nlohmann::json j = {{"mer", r.mer},
                        {"accuracy", r.accuracy},
                        {"count", r.count},
                        {"errors", r.errors},
                        {"per_class", per_class},
                        {"seed", r.seed},
                        {"fingerprint", r.fingerprint}};
    if (r.threshold) {
        j["threshold"] = *r.threshold;
    }
    return j;
}

} // namespace cpd::cli
