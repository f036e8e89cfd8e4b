#include "ueslab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "ueslab/errors.hpp"

namespace ueslab {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

}  // namespace

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
    auto out = open_out(path);
    const std::size_t n = traj.dim();
    out << "t";
    for (std::size_t i = 0; i < n; ++i) out << ",theta_" << i + 1;
    out << ",eta,y\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out << format_double(traj.times[k]);
        for (double v : traj.theta[k]) out << ',' << format_double(v);
        out << ',' << format_double(traj.eta[k]) << ',' << format_double(traj.y[k]) << '\n';
    }
}

void write_fit_csv(const std::filesystem::path& path, const std::vector<RateFit>& fits) {
    auto out = open_out(path);
    out << "model,estimate,residual,window_start,window_end\n";
    for (const auto& f : fits)
        out << to_string(f.model) << ',' << format_double(f.estimate) << ','
            << format_double(f.residual) << ',' << format_double(f.window.start) << ','
            << format_double(f.window.end) << '\n';
}

void write_probe_csv(const std::filesystem::path& path, const std::vector<ProbeTrial>& report) {
    auto out = open_out(path);
    out << "omega,trial,entry_time,stayed,sup_gap\n";
    for (const auto& t : report)
        out << format_double(t.omega) << ',' << t.trial << ','
            << (t.entry_time ? format_double(*t.entry_time) : "nan") << ',' << (t.stayed ? 1 : 0)
            << ',' << format_double(t.sup_gap) << '\n';
}

namespace {

struct Series {
    std::string label;
    std::vector<double> y;
};

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
constexpr std::size_t kMaxPolylinePoints = 4000;

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

void panel(std::ostream& svg, double x0, double y0, double w, double h, const std::vector<double>& t,
           const std::vector<Series>& series, const std::string& ylabel) {
    double tmin = t.front(), tmax = t.back();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& s : series)
        for (double v : s.y)
            if (std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
        lo -= 0.5;
        hi += 0.5;
    }
    if (tmax <= tmin) tmax = tmin + 1;
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
    auto px = [&](double tv) { return x0 + (tv - tmin) / (tmax - tmin) * w; };
    auto py = [&](double v) { return y0 + h - (v - lo) / (hi - lo) * h; };

    svg << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << w << "\" height=\"" << h
        << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double tv = tmin + (tmax - tmin) * i / 4.0;
        const double vv = lo + (hi - lo) * i / 4.0;
        svg << "<text x=\"" << px(tv) << "\" y=\"" << y0 + h + 16
            << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt_tick(tv) << "</text>\n";
        svg << "<text x=\"" << x0 - 6 << "\" y=\"" << py(vv) + 4
            << "\" font-size=\"11\" text-anchor=\"end\">" << fmt_tick(vv) << "</text>\n";
        svg << "<line x1=\"" << x0 << "\" x2=\"" << x0 + w << "\" y1=\"" << py(vv) << "\" y2=\""
            << py(vv) << "\" stroke=\"#ddd\"/>\n";
    }
    svg << "<text x=\"" << x0 + 4 << "\" y=\"" << y0 - 6 << "\" font-size=\"12\">" << ylabel
        << "</text>\n";

    const std::size_t stride = std::max<std::size_t>(1, t.size() / kMaxPolylinePoints);
    for (std::size_t s = 0; s < series.size(); ++s) {
        svg << "<polyline fill=\"none\" stroke-width=\"1\" stroke=\""
            << kPalette[s % std::size(kPalette)] << "\" points=\"";
        for (std::size_t k = 0; k < t.size(); k += stride) {
            if (!std::isfinite(series[s].y[k])) continue;
            svg << fmt_tick(px(t[k])) << ',' << fmt_tick(py(series[s].y[k])) << ' ';
        }
        svg << "\"/>\n";
        svg << "<text x=\"" << x0 + w - 6 << "\" y=\"" << y0 + 14 + 14.0 * s
            << "\" font-size=\"11\" text-anchor=\"end\" fill=\"" << kPalette[s % std::size(kPalette)]
            << "\">" << series[s].label << "</text>\n";
    }
}

}  // namespace

void write_trajectory_svg(const std::filesystem::path& path, const Trajectory& traj,
                          const std::string& title, std::optional<double> optimal_value,
                          bool log_y) {
    if (traj.size() == 0) throw ArgumentError("write_trajectory_svg: empty trajectory");
    const double W = 820, H = 620, left = 70, width = 720, ph = 230;
    std::vector<Series> thetas;
    for (std::size_t i = 0; i < traj.dim(); ++i) {
        Series s{"theta_" + std::to_string(i + 1), {}};
        s.y.reserve(traj.size());
        for (const auto& th : traj.theta) s.y.push_back(th[i]);
        thetas.push_back(std::move(s));
    }
    Series out{"y", traj.y};
    std::string ylabel = "y(t)";
    if (log_y && optimal_value) {
        out.label = "log10|y - J*|";
        ylabel = "log10 |y(t) - J*|";
        for (auto& v : out.y) {
            const double e = std::abs(v - *optimal_value);
            v = e > 0 ? std::log10(e) : std::numeric_limits<double>::quiet_NaN();
        }
    }

    auto svg = open_out(path);
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" font-family=\"sans-serif\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << W / 2 << "\" y=\"22\" font-size=\"15\" text-anchor=\"middle\">" << title
        << "</text>\n";
    panel(svg, left, 50, width, ph, traj.times, thetas, "theta(t)");
    panel(svg, left, 50 + ph + 60, width, ph, traj.times, {out}, ylabel);
    svg << "<text x=\"" << left + width / 2 << "\" y=\"" << H - 8
        << "\" font-size=\"12\" text-anchor=\"middle\">t</text>\n";
    svg << "</svg>\n";
}

}  // namespace ueslab
