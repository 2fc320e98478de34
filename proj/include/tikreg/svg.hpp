#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace tikreg {

/// Minimal dependency-free line plot: axes with ticks, a legend, and up to a
/// handful of polyline curves. Output is a standalone SVG string.
class SvgPlot {
public:
    SvgPlot(std::string title, std::string xlabel, std::string ylabel)
        : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

    void add_curve(std::string name, const std::vector<double>& x, const std::vector<double>& y,
                   std::string color, bool dashed = false) {
        curves_.push_back({std::move(name), x, y, std::move(color), dashed});
    }

    std::string render(double width = 720.0, double height = 480.0) const {
        const double left = 64, right = 20, top = 36, bottom = 48;
        const double pw = width - left - right, ph = height - top - bottom;

        double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
        double ymin = xmin, ymax = -xmin;
        for (const auto& c : curves_) {
            for (double v : c.x) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
            for (double v : c.y) {
                if (std::isfinite(v)) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
            }
        }
        if (!(xmax > xmin)) { xmin = 0; xmax = 1; }
        if (!(ymax > ymin)) { ymin -= 0.5; ymax += 0.5; }
        const double ypad = 0.05 * (ymax - ymin);
        ymin -= ypad;
        ymax += ypad;

        auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
        auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

        std::ostringstream s;
        s << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
          << "' viewBox='0 0 " << width << " " << height << "'>\n";
        s << "<rect width='" << width << "' height='" << height << "' fill='white'/>\n";
        s << "<text x='" << width / 2 << "' y='20' text-anchor='middle' font-size='15'>"
          << title_ << "</text>\n";

        // axes + ticks
        s << "<line x1='" << left << "' y1='" << top << "' x2='" << left << "' y2='"
          << top + ph << "' stroke='black'/>\n";
        s << "<line x1='" << left << "' y1='" << top + ph << "' x2='" << left + pw << "' y2='"
          << top + ph << "' stroke='black'/>\n";
        const int nticks = 5;
        for (int i = 0; i <= nticks; ++i) {
            const double fx = xmin + (xmax - xmin) * i / nticks;
            const double fy = ymin + (ymax - ymin) * i / nticks;
            s << "<line x1='" << px(fx) << "' y1='" << top + ph << "' x2='" << px(fx) << "' y2='"
              << top + ph + 5 << "' stroke='black'/>\n";
            s << "<text x='" << px(fx) << "' y='" << top + ph + 18
              << "' text-anchor='middle' font-size='11'>" << fmt(fx) << "</text>\n";
            s << "<line x1='" << left - 5 << "' y1='" << py(fy) << "' x2='" << left << "' y2='"
              << py(fy) << "' stroke='black'/>\n";
            s << "<text x='" << left - 8 << "' y='" << py(fy) + 4
              << "' text-anchor='end' font-size='11'>" << fmt(fy) << "</text>\n";
        }
        s << "<text x='" << left + pw / 2 << "' y='" << height - 8
          << "' text-anchor='middle' font-size='12'>" << xlabel_ << "</text>\n";
        s << "<text x='16' y='" << top + ph / 2
          << "' text-anchor='middle' font-size='12' transform='rotate(-90 16 " << top + ph / 2
          << ")'>" << ylabel_ << "</text>\n";

        for (const auto& c : curves_) {
            s << "<polyline fill='none' stroke='" << c.color << "' stroke-width='1.5'";
            if (c.dashed) s << " stroke-dasharray='6,4'";
            s << " points='";
            const std::size_t n = std::min(c.x.size(), c.y.size());
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::isfinite(c.y[i])) continue;
                s << px(c.x[i]) << "," << py(c.y[i]) << " ";
            }
            s << "'/>\n";
        }

        // legend, top-right
        double ly = top + 10;
        for (const auto& c : curves_) {
            const double lx = left + pw - 150;
            s << "<line x1='" << lx << "' y1='" << ly << "' x2='" << lx + 28 << "' y2='" << ly
              << "' stroke='" << c.color << "' stroke-width='2'"
              << (c.dashed ? " stroke-dasharray='6,4'" : "") << "/>\n";
            s << "<text x='" << lx + 34 << "' y='" << ly + 4 << "' font-size='12'>" << c.name
              << "</text>\n";
            ly += 18;
        }
        s << "</svg>\n";
        return s.str();
    }

private:
    struct Curve {
        std::string name;
        std::vector<double> x, y;
        std::string color;
        bool dashed;
    };

    static std::string fmt(double v) {
        std::ostringstream o;
        o.precision(3);
        o << v;
        return o.str();
    }

    std::string title_, xlabel_, ylabel_;
    std::vector<Curve> curves_;
};

} // namespace tikreg
