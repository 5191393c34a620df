#include "zzbwave/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "zzbwave/errors.hpp"

namespace zzbwave {

namespace {

constexpr double kW = 800, kH = 520;
constexpr double kL = 80, kR = 30, kT = 50, kB = 60;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

std::vector<double> linear_ticks(double lo, double hi, int target = 6) {
    const double span = hi - lo;
    if (!(span > 0.0)) return {lo};
    double step = std::pow(10.0, std::floor(std::log10(span / target)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (span / (step * m) <= target) {
            step *= m;
            break;
        }
    }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step)
        ticks.push_back(t);
    return ticks;
}

} // namespace

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<SvgSeries>& series, bool log_y) {
    if (series.empty()) throw ArgumentError("write_line_chart: no series");

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw ArgumentError("write_line_chart: series length mismatch");
        for (size_t i = 0; i < s.x.size(); ++i) {
            const double y = s.y[i];
            if (log_y && !(y > 0.0)) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            const double yt = log_y ? std::log10(y) : y;
            ymin = std::min(ymin, yt);
            ymax = std::max(ymax, yt);
        }
    }
    if (!(xmin <= xmax)) throw ArgumentError("write_line_chart: no drawable points");
    if (xmin == xmax) { xmin -= 0.5; xmax += 0.5; }
    if (ymin == ymax) { ymin -= 0.5; ymax += 0.5; }
    const double ypad = 0.04 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto sx = [&](double v) { return kL + (v - xmin) / (xmax - xmin) * (kW - kL - kR); };
    auto sy = [&](double v) { return kH - kB - (v - ymin) / (ymax - ymin) * (kH - kT - kB); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kW << " " << kH
        << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
    svg << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << esc(title) << "</text>\n";

    svg << "<polyline fill=\"none\" stroke=\"black\" points=\"" << fmt(kL) << "," << fmt(kT)
        << " " << fmt(kL) << "," << fmt(kH - kB) << " " << fmt(kW - kR) << ","
        << fmt(kH - kB) << "\"/>\n";

    for (double t : linear_ticks(xmin, xmax)) {
        const double px = sx(t);
        svg << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(kH - kB) << "\" x2=\"" << fmt(px)
            << "\" y2=\"" << fmt(kH - kB + 5) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(kH - kB + 20)
            << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
    }
    std::vector<double> yticks;
    if (log_y) {
        for (int p = static_cast<int>(std::floor(ymin)); p <= static_cast<int>(std::ceil(ymax)); ++p)
            if (p >= ymin && p <= ymax) yticks.push_back(p);
        if (yticks.size() < 2) yticks = linear_ticks(ymin, ymax);
    } else {
        yticks = linear_ticks(ymin, ymax);
    }
    for (double t : yticks) {
        const double py = sy(t);
        svg << "<line x1=\"" << fmt(kL - 5) << "\" y1=\"" << fmt(py) << "\" x2=\"" << fmt(kL)
            << "\" y2=\"" << fmt(py) << "\" stroke=\"black\"/>\n";
        std::string label = log_y ? ("1e" + fmt(t)) : fmt(t);
        svg << "<text x=\"" << fmt(kL - 8) << "\" y=\"" << fmt(py + 4)
            << "\" text-anchor=\"end\">" << label << "</text>\n";
        svg << "<line x1=\"" << fmt(kL) << "\" y1=\"" << fmt(py) << "\" x2=\"" << fmt(kW - kR)
            << "\" y2=\"" << fmt(py) << "\" stroke=\"#dddddd\"/>\n";
    }

    svg << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 15
        << "\" text-anchor=\"middle\">" << esc(x_label) << "</text>\n";
    svg << "<text x=\"20\" y=\"" << kH / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
        << kH / 2 << ")\">" << esc(y_label) << "</text>\n";

    for (size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
        for (size_t i = 0; i < s.x.size(); ++i) {
            const double y = s.y[i];
            if (log_y && !(y > 0.0)) continue;
            svg << fmt(sx(s.x[i])) << "," << fmt(sy(log_y ? std::log10(y) : y)) << " ";
        }
        svg << "\"/>\n";
        const double ly = kT + 18.0 * static_cast<double>(si);
        svg << "<line x1=\"" << fmt(kW - kR - 150) << "\" y1=\"" << fmt(ly) << "\" x2=\""
            << fmt(kW - kR - 125) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << fmt(kW - kR - 118) << "\" y=\"" << fmt(ly + 4) << "\">"
            << esc(s.label) << "</text>\n";
    }
    svg << "</svg>\n";

    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot open for writing: " + path);
    out << svg.str();
    if (!out) throw ArgumentError("write failed: " + path);
}

} // namespace zzbwave
