#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "ueslab/sim.hpp"

namespace ueslab {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumeric = 3 };

struct RunOutcome {
    int exit_code = kExitOk;
    std::filesystem::path output_dir;
};

/// Output directory precedence: `out_override`, then $UESLAB_OUT, then
/// output.dir from the config, then out/<config name>.
std::filesystem::path output_directory(const std::string& config_name,
                                       const std::string& configured,
                                       const std::optional<std::filesystem::path>& out_override);

/// `run <config>`: trajectory.csv, fit.csv, plot.svg plus a one-line summary.
RunOutcome run_experiment(const std::string& config, std::ostream& out, std::ostream& err,
                          const std::optional<std::filesystem::path>& out_override = std::nullopt);

/// `sweep <config>`: practical-stability probe, written to probe.csv.
RunOutcome run_sweep(const std::string& config, std::ostream& out, std::ostream& err,
                     const std::optional<std::filesystem::path>& out_override = std::nullopt);

/// `lemma-check`: RK4 vs closed form; 0 iff max relative error < 1e-6.
int run_lemma_check(const Lemma1Params& params, double horizon, double dt, std::ostream& out,
                    std::ostream& err);

/// Entry point of the `ueslab` executable.
int cli_main(int argc, char** argv);

}  // namespace ueslab
