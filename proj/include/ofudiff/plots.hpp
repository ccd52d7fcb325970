#pragma once

#include "ofudiff/sweep.hpp"

#include <string>
#include <vector>

namespace ofudiff {

struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
};

// Hand-rolled SVG output: deterministic byte-for-byte (no timestamps), data
// points pass through untouched.
void write_scatter_svg(const std::string& path, const std::string& title,
                       const std::string& xlabel, const std::string& ylabel,
                       const std::vector<PlotSeries>& series, bool log_x, bool log_y);
void write_bar_svg(const std::string& path, const std::string& title,
                   const std::vector<std::string>& labels, const std::vector<double>& values);

// Standard study plots from a result table: regret vs horizon (log-log),
// regret rate vs epsilon, coverage frequency bars, |rho_bar* - rho*| vs
// epsilon.  Series without data are omitted.  Returns written paths.
std::vector<std::string> emit_plots(const std::vector<SweepRow>& rows, const std::string& out_dir);

}  // namespace ofudiff
