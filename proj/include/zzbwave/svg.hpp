#pragma once

#include <string>
#include <vector>

namespace zzbwave {

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Standalone SVG line chart (polyline axes, optional log10 y scale).
// Nonpositive y values are dropped in log mode.
void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<SvgSeries>& series, bool log_y);

} // namespace zzbwave
