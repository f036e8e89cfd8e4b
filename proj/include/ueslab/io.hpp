#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ueslab/analysis.hpp"
#include "ueslab/probe.hpp"
#include "ueslab/sim.hpp"

namespace ueslab {

/// 17 significant digits; `nan` / `inf` / `-inf` for non-finite values.
std::string format_double(double x);

/// Header `t,theta_1,...,theta_n,eta,y`, one row per sample.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

/// Header `model,estimate,residual,window_start,window_end`.
void write_fit_csv(const std::filesystem::path& path, const std::vector<RateFit>& fits);

/// Header `omega,trial,entry_time,stayed,sup_gap`. Missing values are `nan`.
void write_probe_csv(const std::filesystem::path& path, const std::vector<ProbeTrial>& report);

/// Two stacked panels: theta_i(t) and y(t). With `log_y` and a known optimal
/// value the lower panel shows log10 |y - J*| instead.
void write_trajectory_svg(const std::filesystem::path& path, const Trajectory& traj,
                          const std::string& title, std::optional<double> optimal_value,
                          bool log_y);

}  // namespace ueslab
