#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

namespace pfcycle::tools {

namespace {

constexpr double kWidth = 800, kHeight = 480, kMargin = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

struct Frame {
    double x0, x1, y0, y1;

    double px(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); }
    double py(double y) const { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin); }
};

Frame padded(double x0, double x1, double y0, double y1) {
    if (!(x1 > x0)) x1 = x0 + 1.0;
    if (!(y1 > y0)) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double pad = 0.05 * (y1 - y0);
    return {x0, x1, y0 - pad, y1 + pad};
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

void header(std::ostream& out, const Frame& f, const std::string& title, const char* xlabel, const char* ylabel) {
    out << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">)", kWidth,
                       kHeight, kWidth, kHeight)
        << '\n';
    out << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n';
    out << fmt::format(R"(<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>)",
                       kWidth / 2, escape(title))
        << '\n';
    out << fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>)", kMargin, kMargin,
                       kWidth - 2 * kMargin, kHeight - 2 * kMargin)
        << '\n';
    for (int i = 0; i <= 4; ++i) {
        const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
        const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
        out << fmt::format(R"(<text x="{:.1f}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{:.4g}</text>)",
                           f.px(xv), kHeight - kMargin + 16, xv)
            << '\n';
        out << fmt::format(R"(<text x="{}" y="{:.1f}" font-family="sans-serif" font-size="11" text-anchor="end">{:.4g}</text>)",
                           kMargin - 6, f.py(yv) + 4, yv)
            << '\n';
    }
    out << fmt::format(R"(<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>)",
                       kWidth / 2, kHeight - 18, xlabel)
        << '\n';
    out << fmt::format(
               R"svg(<text x="18" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>)svg",
               kHeight / 2, kHeight / 2, ylabel)
        << '\n';
}

}  // namespace

void write_trajectory_svg(std::ostream& out, std::span<const Trajectory> runs, const PhaseCorridor* corridor,
                          const std::string& title) {
    double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
    std::int64_t nmax = 1;
    for (const auto& t : runs) {
        nmax = std::max(nmax, t.steps());
        for (double v : t.values) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    const Frame f = padded(0.0, static_cast<double>(nmax), std::min(ymin, 0.0), ymax);
    header(out, f, title, "n", "x_n");

    for (std::size_t r = 0; r < runs.size(); ++r) {
        out << R"(<polyline fill="none" stroke-width="0.8" stroke=")" << kPalette[r % std::size(kPalette)]
            << R"(" points=")";
        const auto& v = runs[r].values;
        for (std::size_t n = 0; n < v.size(); ++n) out << fmt::format("{:.2f},{:.2f} ", f.px(double(n)), f.py(v[n]));
        out << "\"/>\n";
    }
    if (corridor) {
        for (const auto& p : corridor->phases)
            for (double y : {p.lo, p.hi})
                out << fmt::format(
                           R"(<line x1="{}" x2="{}" y1="{:.2f}" y2="{:.2f}" stroke="black" stroke-dasharray="4 3" stroke-width="0.7"/>)",
                           kMargin, kWidth - kMargin, f.py(y), f.py(y))
                    << '\n';
    }
    out << "</svg>\n";
}

void write_bifurcation_svg(std::ostream& out, const BifurcationGrid& grid, const std::string& title) {
    double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
    for (const auto& c : grid.cells)
        for (double v : c.samples) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    if (!std::isfinite(ymin)) ymin = ymax = 0.0;
    const double lo = std::min(grid.sweep.from, grid.sweep.to);
    const double hi = std::max(grid.sweep.from, grid.sweep.to);
    const Frame f = padded(lo, hi, std::min(ymin, 0.0), ymax);
    header(out, f, title, to_string(grid.sweep.param), "x");
    out << R"(<g fill="black">)" << '\n';
    for (const auto& c : grid.cells)
        for (double v : c.samples)
            out << fmt::format(R"(<rect x="{:.2f}" y="{:.2f}" width="1" height="1"/>)", f.px(c.param), f.py(v)) << '\n';
    out << "</g>\n</svg>\n";
}

}  // namespace pfcycle::tools
