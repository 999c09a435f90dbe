#pragma once

#include <string>
#include <vector>

namespace hsx::cli {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotOptions {
    std::string title;
    std::string xlabel = "x";
    std::string ylabel = "y";
    bool loglog = false;
};

/// Standalone SVG line plot. Points with non-positive coordinates are dropped
/// on log axes.
std::string render_svg(const std::vector<Series>& series, const PlotOptions& opts);
void write_svg(const std::string& path, const std::vector<Series>& series, const PlotOptions& opts);

} // namespace hsx::cli
