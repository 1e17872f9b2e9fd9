#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "stochosc/integrator.hpp"
#include "stochosc/lyapunov.hpp"

namespace stochosc {

enum class Representation { Direct, Transformed };

struct OutputPaths {
    std::string csv;     ///< empty: standard output
    std::string svg;
    std::string report;
    std::string json;    ///< empty: standard output where JSON is the main product
};

struct RunConfig {
    std::string model = "duffing";
    /// Catalog parameters, or the inline polynomial data for model "custom".
    nlohmann::json params = nlohmann::json::object();
    IntegrationConfig integration;
    Representation representation = Representation::Direct;
    std::size_t n_paths = 100;
    std::size_t levels = 4;
    int threads = 0;  ///< 0 keeps the OpenMP default
    OutputPaths outputs;
    VerifyOptions verify;
};

/// Merges `overrides` over `file` key by key within each section, applies the
/// preset and defaults, and checks every key. `env_seed` (may be null) replaces
/// the built-in default seed; an explicit seed in the file or overrides wins.
/// Throws ConfigError naming the offending key.
RunConfig resolve_run_config(const nlohmann::json& file, const nlohmann::json& overrides,
                             const char* env_seed = nullptr);

OscillatorModel build_model(const RunConfig& config);

/// Entry point of the command-line tool. Exit codes: 0 success, 1 usage or
/// configuration error, 2 verification found no applicable criterion.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stochosc
