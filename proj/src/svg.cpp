#include "granulyzer/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "granulyzer/errors.hpp"

namespace granulyzer {

namespace {

const char* series_colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

double transform(double v, bool log_scale) {
    return log_scale ? std::log10(v) : v;
}

} // namespace

void write_scatter_svg(const std::string& path, const std::string& title,
                       const std::string& x_label, const std::string& y_label,
                       const std::vector<SvgSeries>& series, bool log_x, bool log_y) {
    const double width = 720, height = 480;
    const double ml = 70, mr = 160, mt = 40, mb = 50;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (log_x && !(x > 0)) continue;
            if (log_y && !(y > 0)) continue;
            xmin = std::min(xmin, transform(x, log_x));
            xmax = std::max(xmax, transform(x, log_x));
            ymin = std::min(ymin, transform(y, log_y));
            ymax = std::max(ymax, transform(y, log_y));
        }
    }
    if (!(xmin <= xmax)) {
        xmin = 0;
        xmax = 1;
    }
    if (!(ymin <= ymax)) {
        ymin = 0;
        ymax = 1;
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;

    auto sx = [&](double x) {
        return ml + (transform(x, log_x) - xmin) / (xmax - xmin) * (width - ml - mr);
    };
    auto sy = [&](double y) {
        return height - mb - (transform(y, log_y) - ymin) / (ymax - ymin) * (height - mt - mb);
    };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << width / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
        << "</text>\n";
    out << "<line x1='" << ml << "' y1='" << height - mb << "' x2='" << width - mr << "' y2='"
        << height - mb << "' stroke='black'/>\n";
    out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << height - mb
        << "' stroke='black'/>\n";
    out << "<text x='" << (ml + width - mr) / 2 << "' y='" << height - 12
        << "' text-anchor='middle' font-size='12'>" << x_label << (log_x ? " (log)" : "")
        << "</text>\n";
    out << "<text x='16' y='" << (mt + height - mb) / 2 << "' font-size='12' transform='rotate(-90 16 "
        << (mt + height - mb) / 2 << ")' text-anchor='middle'>" << y_label << (log_y ? " (log)" : "")
        << "</text>\n";

    std::size_t color_idx = 0;
    double legend_y = mt + 10;
    for (const auto& s : series) {
        const char* color = series_colors[color_idx % 8];
        ++color_idx;
        for (const auto& [x, y] : s.points) {
            if (log_x && !(x > 0)) continue;
            if (log_y && !(y > 0)) continue;
            out << "<circle cx='" << sx(x) << "' cy='" << sy(y) << "' r='3' fill='" << color
                << "'/>\n";
        }
        out << "<circle cx='" << width - mr + 16 << "' cy='" << legend_y << "' r='4' fill='" << color
            << "'/>\n";
        out << "<text x='" << width - mr + 26 << "' y='" << legend_y + 4 << "' font-size='12'>"
            << s.label << "</text>\n";
        legend_y += 18;
    }
    out << "</svg>\n";
    if (!out) throw io_error("write failed for '" + path + "'");
}

} // namespace granulyzer
