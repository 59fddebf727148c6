#pragma once

#include <string>
#include <vector>

namespace vanspec::cli {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
    bool steps = false;  // x holds bin edges, one more than y
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    std::vector<Series> series;
};

/// Standalone SVG line plot with axes, ticks and a legend.  Non-finite points
/// (and non-positive ones on a log axis) break the line.
std::string render_svg(const Plot& plot);

}  // namespace vanspec::cli
