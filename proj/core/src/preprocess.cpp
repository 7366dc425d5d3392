#include <cpd/preprocess.hpp>

#include <cpd/robust.hpp>

#include <algorithm>
#include <charconv>
#include <sstream>

namespace cpd {
namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    parts.push_back(current);
    return parts;
}

PreprocessStep parse_step(const std::string& text) {
    PreprocessStep step;
    if (text == "unit_scale") {
        step.kind = PreprocessStep::Kind::unit_scale;
    } else if (text == "square") {
        step.kind = PreprocessStep::Kind::square;
    } else if (text == "lag_product") {
        step.kind = PreprocessStep::Kind::lag_product;
    } else if (text.rfind("zscore_truncate", 0) == 0) {
        step.kind = PreprocessStep::Kind::zscore_truncate;
        auto colon = text.find(':');
        if (colon != std::string::npos) {
            const char* first = text.data() + colon + 1;
            const char* last = text.data() + text.size();
            auto [ptr, ec] = std::from_chars(first, last, step.z);
            if (ec != std::errc{} || ptr != last || !(step.z > 0.0)) {
                throw ParameterError("bad truncation level in '" + text + "'");
            }
        } else if (text != "zscore_truncate") {
            throw ParameterError("unknown preprocessing step '" + text + "'");
        }
    } else {
        throw ParameterError("unknown preprocessing step '" + text + "'");
    }
    return step;
}

std::string step_name(const PreprocessStep& step) {
    switch (step.kind) {
    case PreprocessStep::Kind::unit_scale: return "unit_scale";
    case PreprocessStep::Kind::square: return "square";
    case PreprocessStep::Kind::lag_product: return "lag_product";
    case PreprocessStep::Kind::zscore_truncate: {
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof buf, step.z);
        return "zscore_truncate:" + std::string(buf, res.ptr);
    }
    }
    return "?";
}

void apply_step(std::vector<double>& v, const PreprocessStep& step) {
    switch (step.kind) {
    case PreprocessStep::Kind::unit_scale:
        v = unit_scale(v);
        break;
    case PreprocessStep::Kind::square:
        for (double& a : v) a *= a;
        break;
    case PreprocessStep::Kind::lag_product:
        v = lag_product(v);
        break;
    case PreprocessStep::Kind::zscore_truncate:
        v = zscore_truncate(v, TruncationSpec{step.z});
        break;
    }
}

} // namespace

std::vector<double> unit_scale(SeriesView x) {
    std::vector<double> out(x.size(), 0.0);
    if (x.empty()) {
        return out;
    }
    auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    double range = *hi - *lo;
    if (range == 0.0) {
        return out;
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
        out[j] = (x[j] - *lo) / range;
    }
    return out;
}

std::vector<double> lag_product(SeriesView x) {
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t t = 0; t + 1 < x.size(); ++t) {
        out[t] = x[t] * x[t + 1];
    }
    return out;
}

std::string Preprocess::to_string() const {
    if (channels.empty()) {
        return "identity";
    }
    std::ostringstream out;
    for (std::size_t c = 0; c < channels.size(); ++c) {
        if (c > 0) out << '|';
        if (channels[c].empty()) {
            out << "identity";
        }
        for (std::size_t s = 0; s < channels[c].size(); ++s) {
            if (s > 0) out << '+';
            out << step_name(channels[c][s]);
        }
    }
    return out.str();
}

Preprocess Preprocess::parse(const std::string& text) {
    Preprocess spec;
    if (text.empty() || text == "identity") {
        return spec;
    }
    for (const auto& channel : split(text, '|')) {
        std::vector<PreprocessStep> steps;
        if (channel != "identity") {
            for (const auto& step : split(channel, '+')) {
                steps.push_back(parse_step(step));
            }
        }
        spec.channels.push_back(std::move(steps));
    }
    return spec;
}

Preprocess Preprocess::unit() {
    return Preprocess{{{PreprocessStep{PreprocessStep::Kind::unit_scale, 3.0}}}};
}

std::vector<double> preprocess(SeriesView x, const Preprocess& spec) {
    if (spec.channels.empty()) {
        return {x.begin(), x.end()};
    }
    std::vector<double> out;
    out.reserve(spec.input_dim(x.size()));
    for (const auto& channel : spec.channels) {
        std::vector<double> v(x.begin(), x.end());
        for (const auto& step : channel) {
            apply_step(v, step);
        }
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

} // namespace cpd
