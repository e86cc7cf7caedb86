#include "dsm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace dsm {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string rgb_hex(double r, double g, double b) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(std::lround(r * 255.0)),
                  static_cast<int>(std::lround(g * 255.0)),
                  static_cast<int>(std::lround(b * 255.0)));
    return buf;
}

std::string hsv_hex(double h, double s, double v) {
    h = std::fmod(std::fmod(h, 360.0) + 360.0, 360.0);
    const double c = v * s;
    const double x = c * (1.0 - std::abs(std::fmod(h / 60.0, 2.0) - 1.0));
    const double m = v - c;
    double r = 0, g = 0, b = 0;
    if (h < 60) { r = c; g = x; }
    else if (h < 120) { r = x; g = c; }
    else if (h < 180) { g = c; b = x; }
    else if (h < 240) { g = x; b = c; }
    else if (h < 300) { r = x; b = c; }
    else { r = c; b = x; }
    return rgb_hex(r + m, g + m, b + m);
}

void open_svg(std::ostringstream& ss, double w, double h) {
    ss << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w) << "\" height=\""
       << fmt(h) << "\" viewBox=\"0 0 " << fmt(w) << " " << fmt(h) << "\">\n";
}

void path_element(std::ostringstream& ss, const std::vector<Point2>& pts,
                  const std::string& color, double width) {
    if (pts.empty()) return;
    ss << "  <path d=\"M " << fmt(pts[0].x) << " " << fmt(pts[0].y);
    for (size_t i = 1; i < pts.size(); ++i) ss << " L " << fmt(pts[i].x) << " " << fmt(pts[i].y);
    ss << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << fmt(width)
       << "\" stroke-linecap=\"round\" stroke-linejoin=\"round\"/>\n";
}

} // namespace

std::string color_for_index(int index) {
    // golden-angle hue stepping keeps neighboring ids distinguishable
    return hsv_hex(137.508 * index, 0.65, 0.85);
}

std::string sketch_to_svg(const Sketch& k, double stroke_width) {
    std::ostringstream ss;
    open_svg(ss, k.canvas_width, k.canvas_height);
    for (const auto& s : k.strokes) path_element(ss, s.points, "#000000", stroke_width);
    ss << "</svg>\n";
    return ss.str();
}

std::string groups_to_svg(const Sketch& k, const std::vector<int>& group_of_stroke,
                          double stroke_width) {
    std::ostringstream ss;
    open_svg(ss, k.canvas_width, k.canvas_height);
    for (size_t i = 0; i < k.strokes.size(); ++i) {
        std::string color = i < group_of_stroke.size() && group_of_stroke[i] >= 0
                                ? color_for_index(group_of_stroke[i])
                                : "#000000";
        path_element(ss, k.strokes[i].points, color, stroke_width);
    }
    ss << "</svg>\n";
    return ss.str();
}

std::string order_colormap_svg(const Sketch& k, double stroke_width) {
    std::ostringstream ss;
    open_svg(ss, k.canvas_width, k.canvas_height);
    const size_t n = k.strokes.size();
    for (const auto& s : k.strokes) {
        double rank = n > 1 ? static_cast<double>(s.order) / static_cast<double>(n - 1) : 0.0;
        path_element(ss, s.points, hsv_hex(240.0 * (1.0 - rank), 0.9, 0.9), stroke_width);
    }
    ss << "</svg>\n";
    return ss.str();
}

std::string histogram_svg(const LengthHistogram& h) {
    const double bar_w = 16.0, gap = 2.0, plot_h = 200.0, margin = 10.0;
    const double w = margin * 2 + static_cast<double>(h.counts.size()) * (bar_w + gap);
    const double hh = plot_h + margin * 2;
    long max_count = 1;
    for (long c : h.counts) max_count = std::max(max_count, c);
    std::ostringstream ss;
    open_svg(ss, std::max(w, 64.0), hh);
    for (size_t i = 0; i < h.counts.size(); ++i) {
        const double bh = plot_h * static_cast<double>(h.counts[i]) / static_cast<double>(max_count);
        ss << "  <rect x=\"" << fmt(margin + static_cast<double>(i) * (bar_w + gap)) << "\" y=\""
           << fmt(margin + plot_h - bh) << "\" width=\"" << fmt(bar_w) << "\" height=\""
           << fmt(bh) << "\" fill=\"#4878a8\"/>\n";
    }
    ss << "</svg>\n";
    return ss.str();
}

std::string temporal_matrix_svg(const TemporalMatrix& m) {
    const double cell = 8.0, margin = 10.0;
    size_t max_cols = 1;
    for (const auto& r : m.rows) max_cols = std::max(max_cols, r.codes.size());
    const double w = margin * 2 + static_cast<double>(max_cols) * cell;
    const double h = margin * 2 + static_cast<double>(m.rows.size()) * cell;
    std::ostringstream ss;
    open_svg(ss, std::max(w, 64.0), std::max(h, 64.0));
    for (size_t r = 0; r < m.rows.size(); ++r)
        for (size_t c = 0; c < m.rows[r].codes.size(); ++c)
            ss << "  <rect x=\"" << fmt(margin + static_cast<double>(c) * cell) << "\" y=\""
               << fmt(margin + static_cast<double>(r) * cell) << "\" width=\"" << fmt(cell)
               << "\" height=\"" << fmt(cell) << "\" fill=\""
               << (m.rows[r].codes[c] ? "#f2d338" : "#3ab6c4") << "\"/>\n";
    ss << "</svg>\n";
    return ss.str();
}

std::string model_montage_svg(const DeformableStrokeModel& m, double stroke_width) {
    const int n = static_cast<int>(m.clusters.size());
    const int cols = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))));
    const int rows = (n + cols - 1) / cols;
    const double cw = m.canvas_width, ch = m.canvas_height, pad = 8.0;
    std::ostringstream ss;
    open_svg(ss, cols * (cw + pad) + pad, rows * (ch + pad) + pad);
    for (int i = 0; i < n; ++i) {
        const double ox = pad + (i % cols) * (cw + pad);
        const double oy = pad + (i / cols) * (ch + pad);
        ss << "  <rect x=\"" << fmt(ox) << "\" y=\"" << fmt(oy) << "\" width=\"" << fmt(cw)
           << "\" height=\"" << fmt(ch) << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
        const auto& cl = m.clusters[static_cast<size_t>(i)];
        for (size_t e = 0; e < cl.exemplars.size(); ++e)
            for (const auto& pl : cl.exemplars[e].polylines) {
                std::vector<Point2> shifted;
                shifted.reserve(pl.size());
                for (auto p : pl) shifted.push_back({p.x + ox, p.y + oy});
                path_element(ss, shifted, color_for_index(static_cast<int>(e)), stroke_width);
            }
    }
    ss << "</svg>\n";
    return ss.str();
}

std::string overlay_svg(const EdgeMap& em, const Sketch& placed, double stroke_width) {
    std::ostringstream ss;
    open_svg(ss, static_cast<double>(em.width), static_cast<double>(em.height));
    for (const auto& ep : em.points)
        ss << "  <circle cx=\"" << fmt(ep.p.x) << "\" cy=\"" << fmt(ep.p.y)
           << "\" r=\"0.5\" fill=\"#bbbbbb\"/>\n";
    for (const auto& s : placed.strokes)
        path_element(ss, s.points, color_for_index(s.order), stroke_width);
    ss << "</svg>\n";
    return ss.str();
}

} // namespace dsm
