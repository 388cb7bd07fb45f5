#pragma once

#include <string>
#include <vector>

namespace granulyzer {

// Minimal scatter plot for quick inspection; no styling guarantees.
struct SvgSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

void write_scatter_svg(const std::string& path, const std::string& title,
                       const std::string& x_label, const std::string& y_label,
                       const std::vector<SvgSeries>& series, bool log_x, bool log_y);

} // namespace granulyzer
