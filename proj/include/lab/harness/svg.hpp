#pragma once

#include <string>
#include <vector>

namespace lab::harness {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

// Minimal polyline line chart (axes, ticks, legend) written as a standalone
// SVG file; enough for visual inspection of MI and entropy curves.
void write_svg_lines(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series);

}  // namespace lab::harness
