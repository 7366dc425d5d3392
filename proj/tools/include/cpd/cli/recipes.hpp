#pragma once

// Named end-to-end experiments. Each recipe is a pure function of
// (id, seed, scale) and returns a JSON report.

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace cpd::cli {

enum class Scale { quick, full };

Scale parse_scale(const std::string& text);
std::string to_string(Scale scale);

const std::vector<std::string>& recipe_names();

/// Throws ParameterError for an unknown id.
nlohmann::json run_recipe(const std::string& id, std::uint64_t seed, Scale scale);

} // namespace cpd::cli
