#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace stochosc {

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Parses a sectioned key/value config:
///
///   # comment
///   [integration]
///   dt = 1e-3
///   initial = [1.0, 0.0]
///   [model]
///   name = "duffing"
///   params = {alpha = 0.5, sigma = 2}
///
/// Values are numbers, strings, booleans, arrays and inline tables (either
/// `{k = v}` or JSON `{"k": v}`); arrays and tables may span lines. Returns
/// {section: {key: value}}. Duplicate sections or keys, and keys outside a
/// section, are errors.
nlohmann::json parse_config(std::string_view text);

nlohmann::json load_config_file(const std::string& path);

}  // namespace stochosc
