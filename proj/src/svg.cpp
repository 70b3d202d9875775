#include "anagram/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace anagram {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 78, kRight = 24, kTop = 46, kBottom = 58;

std::string num(double v, const char* fmt = "%.2f") {
    char buf[48];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

std::string tick_label(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    bool valid() const { return lo <= hi; }
};

}  // namespace

std::string line_chart_svg(const std::string& title, const std::string& xlabel,
                           const std::string& ylabel, const std::vector<PlotSeries>& series,
                           bool log_y, std::optional<double> hline,
                           const std::string& hline_label) {
    Range xr, yr;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double y = s.y[i];
            if (log_y && y <= 0.0) continue;
            xr.add(s.x[i]);
            yr.add(log_y ? std::log10(y) : y);
        }
    if (hline && (!log_y || *hline > 0.0)) yr.add(log_y ? std::log10(*hline) : *hline);
    if (!xr.valid()) { xr.lo = 0; xr.hi = 1; }
    if (!yr.valid()) { yr.lo = 0; yr.hi = 1; }
    if (xr.hi == xr.lo) { xr.lo -= 0.5; xr.hi += 0.5; }
    if (yr.hi == yr.lo) { yr.lo -= 0.5; yr.hi += 0.5; }

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
    const auto sy = [&](double y) {
        const double v = log_y ? std::log10(y) : y;
        return kTop + (yr.hi - v) / (yr.hi - yr.lo) * plot_h;
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

    // Axes box.
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";

    // X ticks: five evenly spaced.
    for (int i = 0; i <= 4; ++i) {
        const double xv = xr.lo + (xr.hi - xr.lo) * i / 4.0;
        const double px = sx(xv);
        svg << "<line x1=\"" << num(px) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\""
            << num(px) << "\" y2=\"" << num(kTop + plot_h + 5) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << num(px) << "\" y=\"" << num(kTop + plot_h + 20)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_label(xv) << "</text>\n";
    }
    // Y ticks: decades in log mode, five even in linear mode.
    std::vector<double> ticks;
    if (log_y) {
        const int dlo = static_cast<int>(std::ceil(yr.lo - 1e-9));
        const int dhi = static_cast<int>(std::floor(yr.hi + 1e-9));
        int step = std::max(1, (dhi - dlo) / 8 + ((dhi - dlo) % 8 ? 1 : 0));
        for (int d = dlo; d <= dhi; d += step) ticks.push_back(std::pow(10.0, d));
        if (ticks.empty()) ticks.push_back(std::pow(10.0, 0.5 * (yr.lo + yr.hi)));
    } else {
        for (int i = 0; i <= 4; ++i) ticks.push_back(yr.lo + (yr.hi - yr.lo) * i / 4.0);
    }
    for (double tv : ticks) {
        const double py = sy(tv);
        svg << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py) << "\" x2=\""
            << num(kLeft) << "\" y2=\"" << num(py) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_label(tv) << "</text>\n";
    }

    svg << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << xlabel
        << "</text>\n";
    svg << "<text x=\"20\" y=\"" << kTop + plot_h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 20 " << num(kTop + plot_h / 2) << ")\">" << ylabel
        << "</text>\n";

    if (hline && (!log_y || *hline > 0.0)) {
        const double py = sy(*hline);
        svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py) << "\" x2=\""
            << num(kLeft + plot_w) << "\" y2=\"" << num(py)
            << "\" stroke=\"#555555\" stroke-dasharray=\"6 3\"/>\n";
        if (!hline_label.empty())
            svg << "<text x=\"" << num(kLeft + plot_w - 6) << "\" y=\"" << num(py - 5)
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" "
                << "fill=\"#555555\">" << hline_label << "</text>\n";
    }

    int legend_i = 0;
    for (const auto& s : series) {
        std::ostringstream pts;
        bool open = false;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (log_y && s.y[i] <= 0.0) continue;
            if (open) pts << ' ';
            pts << num(sx(s.x[i])) << ',' << num(sy(s.y[i]));
            open = true;
        }
        if (open)
            svg << "<polyline fill=\"none\" stroke=\"" << s.color
                << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
        const double ly = kTop + 14 + 16 * legend_i;
        svg << "<line x1=\"" << num(kLeft + plot_w - 120) << "\" y1=\"" << num(ly) << "\" x2=\""
            << num(kLeft + plot_w - 96) << "\" y2=\"" << num(ly) << "\" stroke=\"" << s.color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << num(kLeft + plot_w - 90) << "\" y=\"" << num(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
        ++legend_i;
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace anagram
