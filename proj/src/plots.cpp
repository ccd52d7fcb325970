#include "ofudiff/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>

namespace ofudiff {
namespace {

constexpr double kW = 640, kH = 420;
constexpr double kL = 70, kR = 20, kT = 40, kB = 50;
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Axis {
    double lo = 0, hi = 1;
    bool log = false;
    double map(double v, double pix_lo, double pix_hi) const {
        double t = log ? (std::log(v) - std::log(lo)) / (std::log(hi) - std::log(lo))
                       : (v - lo) / (hi - lo);
        return pix_lo + t * (pix_hi - pix_lo);
    }
};

Axis fit_axis(const std::vector<PlotSeries>& series, bool take_x, bool log) {
    Axis ax;
    ax.log = log;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& s : series)
        for (double v : (take_x ? s.x : s.y)) {
            if (!std::isfinite(v) || (log && v <= 0.0)) continue;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (!std::isfinite(lo)) {
        lo = log ? 0.1 : 0.0;
        hi = 1.0;
    }
    if (lo == hi) {
        lo = log ? lo * 0.5 : lo - 1.0;
        hi = log ? hi * 2.0 : hi + 1.0;
    }
    if (!log) {
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    } else {
        lo *= 0.8;
        hi *= 1.25;
    }
    ax.lo = lo;
    ax.hi = hi;
    return ax;
}

void svg_header(std::ofstream& f, const std::string& title) {
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" "
         "font-family=\"sans-serif\">"
      << title << "</text>\n";
}

}  // namespace

void write_scatter_svg(const std::string& path, const std::string& title,
                       const std::string& xlabel, const std::string& ylabel,
                       const std::vector<PlotSeries>& series, bool log_x, bool log_y) {
    std::ofstream f(path);
    require(f.good(), "write_scatter_svg: cannot open " + path);
    svg_header(f, title);
    Axis ax = fit_axis(series, true, log_x);
    Axis ay = fit_axis(series, false, log_y);
    f << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kW - kL - kR << "\" height=\""
      << kH - kT - kB << "\" fill=\"none\" stroke=\"#333\"/>\n";
    f << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 12
      << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" << xlabel
      << "</text>\n";
    f << "<text x=\"16\" y=\"" << kH / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\" transform=\"rotate(-90 "
         "16 "
      << kH / 2 << ")\">" << ylabel << "</text>\n";
    // Corner tick labels only; the data carries the message.
    f << "<text x=\"" << kL << "\" y=\"" << kH - kB + 16
      << "\" font-size=\"10\" font-family=\"sans-serif\">" << fmt(ax.lo) << "</text>\n";
    f << "<text x=\"" << kW - kR << "\" y=\"" << kH - kB + 16
      << "\" text-anchor=\"end\" font-size=\"10\" font-family=\"sans-serif\">" << fmt(ax.hi)
      << "</text>\n";
    f << "<text x=\"" << kL - 4 << "\" y=\"" << kH - kB
      << "\" text-anchor=\"end\" font-size=\"10\" font-family=\"sans-serif\">" << fmt(ay.lo)
      << "</text>\n";
    f << "<text x=\"" << kL - 4 << "\" y=\"" << kT + 10
      << "\" text-anchor=\"end\" font-size=\"10\" font-family=\"sans-serif\">" << fmt(ay.hi)
      << "</text>\n";

    int ci = 0;
    double ly = kT + 14;
    for (const auto& s : series) {
        const char* color = kColors[ci % 6];
        std::string pts;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if ((ax.log && s.x[i] <= 0) || (ay.log && s.y[i] <= 0)) continue;
            const double px = ax.map(s.x[i], kL, kW - kR);
            const double py = ay.map(s.y[i], kH - kB, kT);
            pts += fmt(px) + "," + fmt(py) + " ";
            f << "<circle cx=\"" << fmt(px) << "\" cy=\"" << fmt(py) << "\" r=\"3\" fill=\""
              << color << "\"/>\n";
        }
        if (!pts.empty())
            f << "<polyline points=\"" << pts << "\" fill=\"none\" stroke=\"" << color
              << "\" stroke-width=\"1\"/>\n";
        f << "<text x=\"" << kW - kR - 6 << "\" y=\"" << ly
          << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\" fill=\"" << color
          << "\">" << s.label << "</text>\n";
        ly += 14;
        ++ci;
    }
    f << "</svg>\n";
}

void write_bar_svg(const std::string& path, const std::string& title,
                   const std::vector<std::string>& labels, const std::vector<double>& values) {
    std::ofstream f(path);
    require(f.good(), "write_bar_svg: cannot open " + path);
    svg_header(f, title);
    const std::size_t n = std::min(labels.size(), values.size());
    double hi = 1.0;
    for (double v : values) hi = std::max(hi, v);
    const double band = (kW - kL - kR) / std::max<std::size_t>(n, 1);
    f << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kW - kL - kR << "\" height=\""
      << kH - kT - kB << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (std::size_t i = 0; i < n; ++i) {
        const double h = (kH - kT - kB) * values[i] / hi;
        const double x = kL + band * i + band * 0.15;
        f << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(kH - kB - h) << "\" width=\""
          << fmt(band * 0.7) << "\" height=\"" << fmt(h) << "\" fill=\"#1f77b4\"/>\n";
        f << "<text x=\"" << fmt(x + band * 0.35) << "\" y=\"" << kH - kB + 14
          << "\" text-anchor=\"middle\" font-size=\"9\" font-family=\"sans-serif\">" << labels[i]
          << "</text>\n";
        f << "<text x=\"" << fmt(x + band * 0.35) << "\" y=\"" << fmt(kH - kB - h - 4)
          << "\" text-anchor=\"middle\" font-size=\"9\" font-family=\"sans-serif\">"
          << fmt(values[i]) << "</text>\n";
    }
    f << "</svg>\n";
}

std::vector<std::string> emit_plots(const std::vector<SweepRow>& rows, const std::string& out_dir) {
    require(!rows.empty(), "emit_plots: empty table");
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> written;

    const auto summary = summarize(rows);
    std::set<double> eps_set, t_set;
    for (const auto& s : summary) {
        eps_set.insert(s.epsilon);
        t_set.insert(s.horizon);
    }

    // Median regret vs horizon, one series per epsilon, log-log.
    {
        std::vector<PlotSeries> series;
        for (double e : eps_set) {
            PlotSeries s;
            s.label = "eps=" + fmt(e);
            for (const auto& row : summary)
                if (row.epsilon == e) {
                    s.x.push_back(row.horizon);
                    s.y.push_back(row.regret_median);
                }
            if (s.x.size() >= 2) series.push_back(std::move(s));
        }
        if (!series.empty()) {
            const std::string p = out_dir + "/regret_vs_horizon.svg";
            write_scatter_svg(p, "median regret vs horizon", "horizon T", "regret", series, true,
                              true);
            written.push_back(p);
        }
    }
    // Median regret rate vs epsilon at the largest horizon.
    if (eps_set.size() >= 2) {
        const double t_max = *t_set.rbegin();
        PlotSeries s;
        s.label = "T=" + fmt(t_max);
        for (const auto& row : summary)
            if (row.horizon == t_max) {
                s.x.push_back(row.epsilon);
                s.y.push_back(row.regret_rate_median);
            }
        const std::string p = out_dir + "/regret_rate_vs_epsilon.svg";
        write_scatter_svg(p, "median regret/T vs epsilon", "epsilon", "regret/T", {s}, false,
                          false);
        written.push_back(p);
    }
    // Coverage frequency per cell.
    {
        std::vector<std::string> labels;
        std::vector<double> freq;
        for (const auto& s : summary) {
            const int ok_runs = s.runs - s.failures;
            if (ok_runs <= 0) continue;
            labels.push_back("e" + fmt(s.epsilon) + "/T" + fmt(s.horizon));
            freq.push_back(1.0 - static_cast<double>(s.coverage_violations) / ok_runs);
        }
        if (!labels.empty()) {
            const std::string p = out_dir + "/coverage_frequency.svg";
            write_bar_svg(p, "coverage frequency per cell", labels, freq);
            written.push_back(p);
        }
    }
    // Gain gap |rho_bar* - rho*| vs epsilon.
    if (eps_set.size() >= 2) {
        PlotSeries s;
        s.label = "gap";
        std::map<double, double> gap;
        for (const auto& row : summary) gap[row.epsilon] = row.gain_gap;
        for (const auto& [e, g] : gap) {
            s.x.push_back(e);
            s.y.push_back(g);
        }
        const std::string p = out_dir + "/gain_gap_vs_epsilon.svg";
        write_scatter_svg(p, "|diffusive - jump| optimal gain vs epsilon", "epsilon", "gap", {s},
                          true, true);
        written.push_back(p);
    }
    return written;
}

}  // namespace ofudiff
