#pragma once

#include <string>

#include <json.hpp>

namespace css {

// Like ordered_json::dump, but floating-point numbers are written with 17
// significant digits.  indent < 0 gives the compact form.
std::string dump_json(const nlohmann::ordered_json& j, int indent = 2);

}  // namespace css
