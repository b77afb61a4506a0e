#include "saccade/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>

#include "saccade/errors.hpp"

namespace saccade {

namespace {

constexpr double kCanvas = 600.0;
constexpr double kMargin = 0.05 * kCanvas;

std::string fmt2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

struct Scaler {
    double lo = 0.0, hi = 1.0, out_lo = 0.0, out_hi = 1.0;
    double operator()(double v) const {
        if (hi == lo) return 0.5 * (out_lo + out_hi); // all points coincide
        return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo);
    }
};

} // namespace

std::string render_scatter_svg(const Embedding2D& embedding, const std::vector<int>& labels) {
    if (labels.size() != embedding.points.size()) {
        throw ValidationError("label count " + std::to_string(labels.size()) +
                              " does not match point count " + std::to_string(embedding.points.size()));
    }
    if (embedding.points.empty()) throw ValidationError("cannot render an empty embedding");

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& [x, y] : embedding.points) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    const Scaler sx{xmin, xmax, kMargin, kCanvas - kMargin};
    // SVG y grows downward; flip so larger y plots higher.
    const Scaler sy{ymin, ymax, kCanvas - kMargin, kMargin};

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 600 600\">\n";
    out += "<rect width=\"600\" height=\"600\" fill=\"#ffffff\"/>\n";
    for (std::size_t i = 0; i < embedding.points.size(); ++i) {
        const char* color = labels[i] == 0 ? "#d62728" : "#1f77b4";
        out += "<circle cx=\"" + fmt2(sx(embedding.points[i].first)) + "\" cy=\"" +
               fmt2(sy(embedding.points[i].second)) + "\" r=\"2\" fill=\"" + color + "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

void emit_scatter_svg(const Embedding2D& embedding, const std::vector<int>& labels,
                      const std::string& path) {
    const std::string svg = render_scatter_svg(embedding, labels);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write SVG file: " + path);
    f << svg;
}

std::string render_line_svg(const std::vector<double>& values) {
    if (values.size() < 2) throw ValidationError("line plot needs at least two values");
    const double w = 600.0, h = 300.0;
    const double margin_x = 0.05 * w, margin_y = 0.05 * h;
    double vmin = *std::min_element(values.begin(), values.end());
    double vmax = *std::max_element(values.begin(), values.end());
    const Scaler sx{0.0, static_cast<double>(values.size() - 1), margin_x, w - margin_x};
    const Scaler sy{vmin, vmax, h - margin_y, margin_y};

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 600 300\">\n";
    out += "<rect width=\"600\" height=\"300\" fill=\"#ffffff\"/>\n";
    out += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += " ";
        out += fmt2(sx(static_cast<double>(i))) + "," + fmt2(sy(values[i]));
    }
    out += "\"/>\n</svg>\n";
    return out;
}

void emit_line_svg(const std::vector<double>& values, const std::string& path) {
    const std::string svg = render_line_svg(values);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write SVG file: " + path);
    f << svg;
}

} // namespace saccade
