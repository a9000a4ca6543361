#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gdifs/app/toml_lite.hpp"
#include "gdifs/derham.hpp"
#include "gdifs/gdsystem.hpp"

namespace gdifs::app {

struct IterationConfig {
    std::size_t max_depth = 10;
    double residual_tol = 1e-9;
    double dedup = 0.0;
    std::size_t point_cap = 10'000'000;
    double seed_tol = 1e-14;
    std::size_t seed_max_iter = 100'000;
    unsigned workers = 1;
};

struct CertifyConfig {
    std::size_t pairs = 2000;
    std::uint64_t seed = 42;
    bool gate = true;  // mode = "gate"; "warn" keeps going on failed certificates
    std::size_t self_map_samples = 1001;
};

struct OutputConfig {
    std::string dir = ".";
    std::vector<std::string> formats{"csv", "json"};
    std::string stem;  // file name prefix, defaults to the config name
    std::size_t grid_distance = 0;  // > 0: report d_HP of each component to this [0,1] grid

    bool wants(std::string_view fmt) const;
};

struct DeRhamOptions {
    std::size_t grid = 1001;
    double tol = 1e-10;
    std::size_t cross_depth = 14;
    double cross_dedup = 0.0;
    std::size_t cross_grid = 1000;
};

struct RunConfig {
    enum class Kind { Graph, DeRham };

    std::string name;
    Kind kind = Kind::Graph;
    GraphIFS system;                    // Kind::Graph
    std::vector<bool> auto_comparison;  // per edge: comparison = "auto"
    std::optional<DeRhamSystem> derham;  // Kind::DeRham
    IterationConfig iteration;
    CertifyConfig certify;
    OutputConfig output;
    DeRhamOptions derham_opts;
};

/// Builds a RunConfig from config text; `origin` names the source in errors.
RunConfig load_config_text(std::string_view text, const std::string& origin = "config");

/// Reads a config file. A missing path whose stem names a bundled config
/// falls back to the embedded copy; `note` then receives a message.
RunConfig load_config(const std::string& path, std::string* note = nullptr);

ComparisonFn parse_comparison(const Json& j, const std::string& where);

/// Replaces every "auto" comparison with the sampled Linear estimate.
void resolve_auto_comparisons(RunConfig& cfg);

struct BundledConfig {
    const char* name;
    const char* text;
};

std::span<const BundledConfig> bundled_configs();
const BundledConfig* find_bundled(std::string_view name);

}  // namespace gdifs::app
