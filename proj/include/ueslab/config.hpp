#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "ueslab/analysis.hpp"
#include "ueslab/controllers.hpp"
#include "ueslab/maps.hpp"
#include "ueslab/probe.hpp"

namespace ueslab {

/// Flat `section.key = value` file. `#` starts a comment, lists are comma
/// separated, numbers may be written as a ratio (`1/3`).
struct ConfigFile {
    std::string source;
    std::map<std::string, std::string> values;
    std::map<std::string, int> lines;

    [[nodiscard]] bool has(const std::string& key) const { return values.count(key) != 0; }
};

/// Throws ConfigError on syntax errors, unknown or duplicated keys.
ConfigFile parse_config(std::string_view text, std::string source = "<string>");
ConfigFile load_config(const std::filesystem::path& path);

/// A path that exists as given, else `<bundled config dir>/<arg>.cfg`.
std::filesystem::path resolve_config_path(const std::string& arg);
std::filesystem::path bundled_config_dir();

enum class FitKind { None, PowerLaw, Exponential };

struct ExperimentConfig {
    std::string name;
    std::string map_name = "quartic_paper";
    Vector map_q;
    Vector map_theta_star;
    EsDesign design;
    Vector theta0;  // empty -> zeros
    double eta0 = 0.0;
    std::optional<double> dt;  // empty -> 40 steps per fastest dither period
    double horizon = 100.0;
    std::size_t record_every = 1;
    FitKind fit = FitKind::None;
    Window fit_window{0.0, 0.0};
    std::optional<ProbeConfig> probe;
    std::string output_dir;
    bool plot_log_y = false;
};

/// Typed view of a parsed file. Throws ConfigError naming the offending key.
ExperimentConfig to_experiment_config(const ConfigFile& file);

/// Everything needed to run: config, resolved map, assembled parameters.
struct Experiment {
    ExperimentConfig config;
    CostMap map;
    EsParams params;
    EsState start;
    double dt;
};

/// Loads, then re-checks every module-level invariant. Throws ConfigError.
Experiment load_experiment(const std::filesystem::path& path);
Experiment make_experiment(const ExperimentConfig& cfg, const std::string& source);

}  // namespace ueslab
