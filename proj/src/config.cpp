#include "ueslab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "ueslab/errors.hpp"
#include "ueslab/sim.hpp"

#ifndef UESLAB_CONFIG_DIR
#define UESLAB_CONFIG_DIR "configs"
#endif

namespace ueslab {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "map.name",         "map.q",           "map.theta_star",   "schedule.kind",
        "schedule.beta",    "schedule.v",      "schedule.r",       "schedule.lambda",
        "schedule.t0",      "es.alpha",        "es.k",             "es.omega",
        "es.omega_hat",     "es.omega_h",      "es.theta0",        "es.eta0",
        "sim.dt",           "sim.horizon",     "sim.record_every", "analysis.fit",
        "analysis.window",  "probe.omega_values", "probe.epsilon", "probe.delta",
        "probe.horizon",    "probe.trials",    "probe.seed",       "probe.steps_per_period",
        "output.dir",       "output.log_y",
    };
    return keys;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

bool parse_plain_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && std::isfinite(out);
}

class Reader {
public:
    explicit Reader(const ConfigFile& f) : f_(f) {}

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
        std::ostringstream os;
        os << f_.source;
        if (auto it = f_.lines.find(key); it != f_.lines.end()) os << ":" << it->second;
        os << ": " << key << ": " << msg;
        throw ConfigError(os.str());
    }

    [[nodiscard]] bool has(const std::string& key) const { return f_.has(key); }

    [[nodiscard]] double number(const std::string& key, const std::string& text) const {
        double v = 0;
        const std::string t = trim(text);
        if (parse_plain_number(t, v)) return v;
        if (const auto slash = t.find('/'); slash != std::string::npos) {
            double num = 0, den = 0;
            if (parse_plain_number(trim(t.substr(0, slash)), num) &&
                parse_plain_number(trim(t.substr(slash + 1)), den) && den != 0)
                return num / den;
        }
        fail(key, "expected a number, got '" + t + "'");
    }

    [[nodiscard]] double number(const std::string& key) const { return number(key, f_.values.at(key)); }

    double number_or(const std::string& key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }

    [[nodiscard]] Vector list(const std::string& key) const {
        Vector out;
        const std::string& raw = f_.values.at(key);
        if (trim(raw).empty()) return out;
        std::stringstream ss(raw);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(number(key, item));
        return out;
    }

    [[nodiscard]] std::string text(const std::string& key) const { return trim(f_.values.at(key)); }

    [[nodiscard]] std::size_t count(const std::string& key) const {
        const double v = number(key);
        if (!(v >= 0) || v != std::floor(v)) fail(key, "expected a non-negative integer");
        return static_cast<std::size_t>(v);
    }

    [[nodiscard]] bool flag(const std::string& key) const {
        const std::string t = text(key);
        if (t == "true" || t == "1" || t == "yes") return true;
        if (t == "false" || t == "0" || t == "no") return false;
        fail(key, "expected true/false, got '" + t + "'");
    }

private:
    const ConfigFile& f_;
};

}  // namespace

ConfigFile parse_config(std::string_view text, std::string source) {
    ConfigFile f;
    f.source = std::move(source);
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        std::ostringstream where;
        where << f.source << ":" << lineno << ": ";
        if (eq == std::string::npos)
            throw ConfigError(where.str() + "expected 'section.key = value', got '" + body + "'");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (!known_keys().count(key)) throw ConfigError(where.str() + "unknown key '" + key + "'");
        if (f.values.count(key)) throw ConfigError(where.str() + "duplicate key '" + key + "'");
        f.values[key] = value;
        f.lines[key] = lineno;
    }
    return f;
}

ConfigFile load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

std::filesystem::path bundled_config_dir() { return std::filesystem::path(UESLAB_CONFIG_DIR); }

std::filesystem::path resolve_config_path(const std::string& arg) {
    const std::filesystem::path direct(arg);
    if (std::filesystem::is_regular_file(direct)) return direct;
    const auto bundled = bundled_config_dir() / (arg + ".cfg");
    if (std::filesystem::is_regular_file(bundled)) return bundled;
    return direct;
}

ExperimentConfig to_experiment_config(const ConfigFile& file) {
    Reader r(file);
    ExperimentConfig c;
    c.name = std::filesystem::path(file.source).stem().string();

    if (r.has("map.name")) c.map_name = r.text("map.name");
    if (r.has("map.q")) c.map_q = r.list("map.q");
    if (r.has("map.theta_star")) c.map_theta_star = r.list("map.theta_star");
    if (c.map_name != "quartic_paper" && c.map_name != "quadratic")
        r.fail("map.name", "unknown map '" + c.map_name + "' (known: quartic_paper, quadratic)");
    if (c.map_name == "quartic_paper" && (r.has("map.q") || r.has("map.theta_star")))
        r.fail(r.has("map.q") ? "map.q" : "map.theta_star", "not a parameter of quartic_paper");
    if (c.map_name == "quadratic" && c.map_q.empty()) r.fail("map.q", "required for the quadratic map");

    const std::string kind = r.has("schedule.kind") ? r.text("schedule.kind") : "nominal";
    const double t0 = r.number_or("schedule.t0", 0.0);
    if (!(t0 >= 0)) r.fail("schedule.t0", "must be >= 0");
    auto forbid = [&](std::initializer_list<const char*> keys) {
        for (const char* k : keys)
            if (r.has(k)) r.fail(k, "not used by schedule.kind = " + kind);
    };
    try {
        if (kind == "nominal") {
            forbid({"schedule.beta", "schedule.v", "schedule.r", "schedule.lambda"});
            c.design.schedule = Schedule::nominal(t0);
        } else if (kind == "asymptotic") {
            forbid({"schedule.lambda"});
            for (const char* k : {"schedule.beta", "schedule.v", "schedule.r"})
                if (!r.has(k)) r.fail(k, "required for schedule.kind = asymptotic");
            const double beta = r.number("schedule.beta");
            const double v = r.number("schedule.v");
            const double rr = r.number("schedule.r");
            if (!(beta > 0)) r.fail("schedule.beta", "must be > 0");
            if (!(v > 0)) r.fail("schedule.v", "must be > 0");
            if (!(rr >= 0)) r.fail("schedule.r", "must be >= 0");
            c.design.schedule = Schedule::asymptotic(beta, v, rr, t0);
        } else if (kind == "exponential") {
            forbid({"schedule.beta", "schedule.v", "schedule.r"});
            if (!r.has("schedule.lambda")) r.fail("schedule.lambda", "required for schedule.kind = exponential");
            const double lambda = r.number("schedule.lambda");
            if (!(lambda > 0)) r.fail("schedule.lambda", "must be > 0");
            c.design.schedule = Schedule::exponential(lambda, t0);
        } else {
            r.fail("schedule.kind", "expected nominal, asymptotic or exponential, got '" + kind + "'");
        }
    } catch (const ArgumentError& e) {
        r.fail("schedule.kind", e.what());
    }

    if (r.has("es.alpha")) c.design.alpha = r.list("es.alpha");
    if (r.has("es.k")) c.design.k = r.list("es.k");
    if (r.has("es.omega_hat")) {
        c.design.omega_hat = r.list("es.omega_hat");
        if (c.design.omega_hat.empty()) r.fail("es.omega_hat", "list must not be empty");
    }
    c.design.omega = r.number_or("es.omega", c.design.omega);
    c.design.omega_h = r.number_or("es.omega_h", c.design.omega_h);
    if (r.has("es.theta0")) c.theta0 = r.list("es.theta0");
    c.eta0 = r.number_or("es.eta0", 0.0);

    if (r.has("sim.dt")) {
        c.dt = r.number("sim.dt");
        if (!(*c.dt > 0)) r.fail("sim.dt", "must be > 0");
    }
    c.horizon = r.number_or("sim.horizon", c.horizon);
    if (!(c.horizon > 0)) r.fail("sim.horizon", "must be > 0");
    if (r.has("sim.record_every")) {
        c.record_every = r.count("sim.record_every");
        if (c.record_every == 0) r.fail("sim.record_every", "must be >= 1");
    }

    if (r.has("analysis.fit")) {
        const std::string fit = r.text("analysis.fit");
        if (fit == "none") c.fit = FitKind::None;
        else if (fit == "power") c.fit = FitKind::PowerLaw;
        else if (fit == "exponential") c.fit = FitKind::Exponential;
        else r.fail("analysis.fit", "expected none, power or exponential, got '" + fit + "'");
    }
    if (c.fit != FitKind::None) {
        if (!r.has("analysis.window")) r.fail("analysis.fit", "needs analysis.window = start, end");
        const Vector w = r.list("analysis.window");
        if (w.size() != 2 || !(w[1] > w[0])) r.fail("analysis.window", "expected 'start, end' with end > start");
        c.fit_window = Window{w[0], w[1]};
        if (c.fit == FitKind::PowerLaw && !c.design.schedule.is_asymptotic())
            r.fail("analysis.fit", "power-law fit needs schedule.kind = asymptotic (uses beta and t0)");
    } else if (r.has("analysis.window")) {
        r.fail("analysis.window", "set analysis.fit to use a fit window");
    }

    const bool any_probe = r.has("probe.omega_values") || r.has("probe.epsilon") ||
                           r.has("probe.delta") || r.has("probe.horizon") || r.has("probe.trials") ||
                           r.has("probe.seed") || r.has("probe.steps_per_period");
    if (any_probe) {
        if (!r.has("probe.omega_values")) r.fail("probe.omega_values", "required by the probe settings");
        ProbeConfig p;
        p.omega_values = r.list("probe.omega_values");
        p.epsilon = r.number_or("probe.epsilon", p.epsilon);
        p.delta = r.number_or("probe.delta", p.delta);
        p.horizon = r.number_or("probe.horizon", p.horizon);
        if (r.has("probe.trials")) p.trials = r.count("probe.trials");
        if (r.has("probe.seed")) p.seed = r.count("probe.seed");
        p.steps_per_period = r.number_or("probe.steps_per_period", p.steps_per_period);
        try {
            p.validate();
        } catch (const ArgumentError& e) {
            const std::string msg = e.what();
            const auto key = msg.substr(0, msg.find(' '));
            r.fail(file.has(key) ? key : "probe.omega_values", msg);
        }
        c.probe = p;
    }

    if (r.has("output.dir")) c.output_dir = r.text("output.dir");
    if (r.has("output.log_y")) c.plot_log_y = r.flag("output.log_y");
    return c;
}

Experiment make_experiment(const ExperimentConfig& cfg, const std::string& source) {
    auto fail = [&](const std::string& msg) -> ConfigError {
        return ConfigError(source + ": " + msg);
    };
    CostMap map;
    try {
        map = maps::by_name(cfg.map_name, cfg.map_q, cfg.map_theta_star);
    } catch (const ArgumentError& e) {
        throw fail(std::string("map: ") + e.what());
    }
    const std::size_t n = map.dim;

    EsDesign d = cfg.design;
    auto broadcast = [&](Vector& v, const char* key) {
        if (v.empty()) throw fail(std::string("es.") + key + ": required");
        if (v.size() == 1 && n > 1) v.assign(n, v[0]);
    };
    broadcast(d.alpha, "alpha");
    broadcast(d.k, "k");

    std::optional<EsParams> params;
    try {
        params.emplace(EsParams::assemble(std::move(d), map));
    } catch (const AssemblyError& e) {
        throw fail(e.what());
    }

    EsState start;
    start.theta = cfg.theta0.empty() ? Vector(n, 0.0) : cfg.theta0;
    if (start.theta.size() != n) {
        std::ostringstream os;
        os << "es.theta0: expected " << n << " entries, got " << start.theta.size();
        throw fail(os.str());
    }
    start.eta = cfg.eta0;

    const double limit = 2.0 * std::numbers::pi / (kMinStepsPerPeriod * params->max_frequency());
    const double dt = cfg.dt.value_or(limit);
    if (dt > limit * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "sim.dt: " << dt << " exceeds 2*pi/(40*omega_max) = " << limit;
        throw fail(os.str());
    }
    if (cfg.fit != FitKind::None) {
        const double t0 = params->schedule().t0;
        if (cfg.fit_window.start < t0 || cfg.fit_window.end > t0 + cfg.horizon)
            throw fail("analysis.window: must lie inside [schedule.t0, schedule.t0 + sim.horizon]");
    }
    if (cfg.probe && !map.has_optimum()) throw fail("probe: map has no known optimum");
    return Experiment{cfg, std::move(map), std::move(*params), std::move(start), dt};
}

Experiment load_experiment(const std::filesystem::path& path) {
    const ConfigFile file = load_config(path);
    return make_experiment(to_experiment_config(file), file.source);
}

}  // namespace ueslab
