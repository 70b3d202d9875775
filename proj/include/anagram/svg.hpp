#pragma once

// Minimal static SVG line charts (polylines + axis ticks), byte-deterministic
// for fixed input. No plotting dependency on purpose.

#include <optional>
#include <string>
#include <vector>

namespace anagram {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
};

/// Log-scale charts skip non-positive values point by point.
std::string line_chart_svg(const std::string& title, const std::string& xlabel,
                           const std::string& ylabel, const std::vector<PlotSeries>& series,
                           bool log_y, std::optional<double> hline = std::nullopt,
                           const std::string& hline_label = "");

}  // namespace anagram
