#include "ueslab/app.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ueslab/analysis.hpp"
#include "ueslab/config.hpp"
#include "ueslab/errors.hpp"
#include "ueslab/io.hpp"
#include "ueslab/probe.hpp"

namespace ueslab {

inline constexpr double kLemmaTolerance = 1e-6;

std::filesystem::path output_directory(const std::string& config_name,
                                       const std::string& configured,
                                       const std::optional<std::filesystem::path>& out_override) {
    if (out_override) return *out_override;
    if (const char* env = std::getenv("UESLAB_OUT"); env && *env) return env;
    if (!configured.empty()) return configured;
    return std::filesystem::path("out") / config_name;
}

namespace {

std::optional<Experiment> load_or_report(const std::string& config, std::ostream& err) {
    try {
        return load_experiment(resolve_config_path(config));
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "config error: " << config << ": " << e.what() << '\n';
    }
    return std::nullopt;
}

}  // namespace

RunOutcome run_experiment(const std::string& config, std::ostream& out, std::ostream& err,
                          const std::optional<std::filesystem::path>& out_override) {
    RunOutcome outcome;
    auto exp = load_or_report(config, err);
    if (!exp) {
        outcome.exit_code = kExitConfig;
        return outcome;
    }
    const ExperimentConfig& cfg = exp->config;
    const auto dir = output_directory(cfg.name, cfg.output_dir, out_override);
    outcome.output_dir = dir;

    const double t0 = exp->params.schedule().t0;
    Trajectory traj = simulate(exp->params, exp->map, exp->start, t0 + cfg.horizon, exp->dt,
                               cfg.record_every);
    traj.meta["config"] = cfg.name;
    traj.meta["map"] = exp->map.name;

    try {
        write_trajectory_csv(dir / "trajectory.csv", traj);
        if (traj.size() > 1)
            write_trajectory_svg(dir / "plot.svg", traj, cfg.name, exp->map.optimal_value,
                                 cfg.plot_log_y);
    } catch (const std::exception& e) {
        err << "error writing artifacts: " << e.what() << '\n';
        outcome.exit_code = kExitNumeric;
        return outcome;
    }

    if (traj.divergence) {
        write_fit_csv(dir / "fit.csv", {});
        err << "integration diverged (last good t=" << format_double(traj.divergence->last_good_time)
            << "): " << traj.divergence->message << "; partial artifacts in " << dir.string() << '\n';
        outcome.exit_code = kExitNumeric;
        return outcome;
    }

    std::vector<RateFit> fits;
    std::ostringstream summary;
    summary << cfg.name << ": t=" << format_double(traj.times.back());
    if (exp->map.optimum) {
        const auto dev = deviation(traj, *exp->map.optimum);
        summary << " |theta-theta*|=" << dev.back();
    } else {
        summary << " theta=" << traj.theta.back()[0];
    }
    try {
        if (cfg.fit == FitKind::PowerLaw) {
            const auto& a = std::get<Schedule::Asymptotic>(exp->params.schedule().kind);
            fits.push_back(fit_power_rate(traj, *exp->map.optimum, a.beta, t0, cfg.fit_window));
        } else if (cfg.fit == FitKind::Exponential) {
            fits.push_back(fit_exp_rate(traj, *exp->map.optimum, cfg.fit_window));
        }
    } catch (const std::exception& e) {
        write_fit_csv(dir / "fit.csv", {});
        err << "rate fit failed: " << e.what() << '\n';
        outcome.exit_code = kExitNumeric;
        return outcome;
    }
    write_fit_csv(dir / "fit.csv", fits);
    for (const auto& f : fits)
        summary << ' ' << to_string(f.model) << "_rate=" << f.estimate << " (residual "
                << f.residual << ", window [" << f.window.start << ", " << f.window.end << "])";
    out << summary.str() << '\n';
    return outcome;
}

RunOutcome run_sweep(const std::string& config, std::ostream& out, std::ostream& err,
                     const std::optional<std::filesystem::path>& out_override) {
    RunOutcome outcome;
    auto exp = load_or_report(config, err);
    if (!exp) {
        outcome.exit_code = kExitConfig;
        return outcome;
    }
    const ExperimentConfig& cfg = exp->config;
    if (!cfg.probe) {
        err << "config error: " << cfg.name << ": sweep needs probe.omega_values\n";
        outcome.exit_code = kExitConfig;
        return outcome;
    }
    const auto dir = output_directory(cfg.name, cfg.output_dir, out_override);
    outcome.output_dir = dir;
    const auto report = practical_stability_probe(exp->params, exp->map, *cfg.probe);
    write_probe_csv(dir / "probe.csv", report);

    const Vector gaps = max_gap_per_omega(report, *cfg.probe);
    std::size_t failed = 0;
    for (const auto& t : report)
        if (t.failure) ++failed;
    out << cfg.name << ": " << report.size() << " trials";
    if (failed) out << " (" << failed << " failed)";
    out << "; max sup_gap per omega:";
    for (std::size_t i = 0; i < gaps.size(); ++i)
        out << ' ' << cfg.probe->omega_values[i] << "->" << gaps[i];
    out << '\n';
    return outcome;
}

int run_lemma_check(const Lemma1Params& params, double horizon, double dt, std::ostream& out,
                    std::ostream& err) {
    try {
        params.validate();
        if (!(horizon > 0) || !(dt > 0)) throw ArgumentError("lemma-check: --t1 and --dt must be > 0");
    } catch (const ArgumentError& e) {
        err << "parameter error: " << e.what() << '\n';
        return kExitConfig;
    }
    try {
        const auto rep = lemma_check(params, horizon, dt);
        out << "lemma-check: max relative error " << format_double(rep.max_rel_error) << " over "
            << rep.points << " points (worst at t=" << rep.worst_time << "), tolerance "
            << kLemmaTolerance << ": " << (rep.max_rel_error < kLemmaTolerance ? "ok" : "FAILED")
            << '\n';
        return rep.max_rel_error < kLemmaTolerance ? kExitOk : kExitNumeric;
    } catch (const std::exception& e) {
        err << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    }
}

int cli_main(int argc, char** argv) {
    CLI::App app{"ueslab: unbiased extremum seeking simulations"};
    app.require_subcommand(1);

    std::string run_config;
    auto* run = app.add_subcommand("run", "Simulate a config, write trajectory/fit CSV and an SVG plot");
    run->add_option("config", run_config, "Config file or bundled config name")->required();

    std::string sweep_config;
    auto* sweep = app.add_subcommand("sweep", "Run the practical-stability probe over omega");
    sweep->add_option("config", sweep_config, "Config file or bundled config name")->required();

    Lemma1Params lp;
    double t1 = 100.0;
    double dt = 1e-3;
    auto* lemma = app.add_subcommand("lemma-check", "Compare RK4 with the comparison-ODE closed form");
    lemma->add_option("--beta", lp.beta)->required();
    lemma->add_option("--eps1", lp.eps1)->required();
    lemma->add_option("--eps2", lp.eps2)->required();
    lemma->add_option("--p", lp.p)->required();
    lemma->add_option("--q", lp.q)->required();
    lemma->add_option("--v0", lp.v0)->required();
    lemma->add_option("--t1", t1, "Horizon (default 100)");
    lemma->add_option("--dt", dt, "RK4 step (default 1e-3)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    if (*run) return run_experiment(run_config, std::cout, std::cerr).exit_code;
    if (*sweep) return run_sweep(sweep_config, std::cout, std::cerr).exit_code;
    return run_lemma_check(lp, t1, dt, std::cout, std::cerr);
}

}  // namespace ueslab
