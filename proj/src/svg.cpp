#include "ringlaser/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

#include "ringlaser/error.hpp"

namespace ringlaser {

namespace {

// viridis anchor colors
constexpr std::array<std::array<double, 3>, 5> palette{{
    {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37},
}};

std::string color(double f) {
    f = std::clamp(f, 0.0, 1.0) * (palette.size() - 1);
    const auto k = std::min(static_cast<std::size_t>(f), palette.size() - 2);
    const double t = f - static_cast<double>(k);
    char buf[8];
    int rgb[3];
    for (int c = 0; c < 3; ++c) {
        rgb[c] = static_cast<int>(std::lround(palette[k][c] + t * (palette[k + 1][c] - palette[k][c])));
    }
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}

std::string label(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

} // namespace

std::string render_heatmap(const CsvTable& table, const HeatmapOptions& options) {
    const auto xs = table.column(options.x_column);
    const auto ys = table.column(options.y_column);
    const auto vs = table.column(options.value_column);

    std::map<double, std::size_t> xi;
    std::map<double, std::size_t> yi;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (std::isnan(xs[k]) || std::isnan(ys[k])) continue;
        xi.emplace(xs[k], 0);
        yi.emplace(ys[k], 0);
    }
    if (xi.empty()) fail(ErrorKind::invalid_parameter, "no grid points to draw");
    std::size_t n = 0;
    for (auto& [x, idx] : xi) idx = n++;
    n = 0;
    for (auto& [y, idx] : yi) idx = n++;

    auto scaled = [&](double v) {
        if (std::isnan(v)) return v;
        if (options.log_scale) return v > 0.0 ? std::log10(v) : std::nan("");
        return v;
    };
    double lo = INFINITY;
    double hi = -INFINITY;
    for (double v : vs) {
        const double s = scaled(v);
        if (std::isfinite(s)) {
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
    }
    if (!(lo <= hi)) fail(ErrorKind::invalid_parameter, "no finite values to draw");
    const double span = hi > lo ? hi - lo : 1.0;

    const int cell = std::max(1, options.cell_pixels);
    const int margin = 60;
    const int plot_w = static_cast<int>(xi.size()) * cell;
    const int plot_h = static_cast<int>(yi.size()) * cell;
    const int bar_x = margin + plot_w + 20;
    const int width = bar_x + 90;
    const int height = plot_h + 2 * margin;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!options.title.empty()) {
        svg << "<text x=\"" << margin << "\" y=\"" << margin / 2 << "\" font-size=\"13\">"
            << options.title << "</text>\n";
    }
    for (std::size_t k = 0; k < vs.size(); ++k) {
        if (std::isnan(xs[k]) || std::isnan(ys[k])) continue;
        const double s = scaled(vs[k]);
        const int px = margin + static_cast<int>(xi[xs[k]]) * cell;
        // y grows upwards
        const int py = margin + plot_h - static_cast<int>(yi[ys[k]] + 1) * cell;
        svg << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << cell << "\" height=\""
            << cell << "\" fill=\"" << (std::isfinite(s) ? color((s - lo) / span) : "#cccccc")
            << "\"/>\n";
    }
    svg << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";

    // axis ticks at both ends and the middle
    const double x0 = xi.begin()->first;
    const double x1 = xi.rbegin()->first;
    const double y0 = yi.begin()->first;
    const double y1 = yi.rbegin()->first;
    for (int t = 0; t <= 2; ++t) {
        const double f = t / 2.0;
        const int px = margin + static_cast<int>(f * plot_w);
        const int py = margin + plot_h - static_cast<int>(f * plot_h);
        svg << "<text x=\"" << px << "\" y=\"" << margin + plot_h + 15
            << "\" text-anchor=\"middle\">" << label(x0 + f * (x1 - x0)) << "</text>\n";
        svg << "<text x=\"" << margin - 5 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">"
            << label(y0 + f * (y1 - y0)) << "</text>\n";
    }
    svg << "<text x=\"" << margin + plot_w / 2 << "\" y=\"" << margin + plot_h + 35
        << "\" text-anchor=\"middle\">" << options.x_column << "</text>\n";
    svg << "<text x=\"15\" y=\"" << margin + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
        << margin + plot_h / 2 << ")\">" << options.y_column << "</text>\n";

    // colorbar
    const int steps = 64;
    for (int k = 0; k < steps; ++k) {
        const double f = (k + 0.5) / steps;
        const int py = margin + plot_h - static_cast<int>((k + 1) * plot_h / steps);
        svg << "<rect x=\"" << bar_x << "\" y=\"" << py << "\" width=\"15\" height=\""
            << plot_h / steps + 1 << "\" fill=\"" << color(f) << "\"/>\n";
    }
    const std::string prefix = options.log_scale ? "1e" : "";
    svg << "<text x=\"" << bar_x + 20 << "\" y=\"" << margin + plot_h << "\">" << prefix
        << label(lo) << "</text>\n";
    svg << "<text x=\"" << bar_x + 20 << "\" y=\"" << margin + 10 << "\">" << prefix << label(hi)
        << "</text>\n";
    svg << "<text x=\"" << bar_x << "\" y=\"" << margin - 8 << "\">" << options.value_column
        << (options.log_scale ? " (log10)" : "") << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

} // namespace ringlaser
