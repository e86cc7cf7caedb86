#include "dsm/geometry.hpp"

#include <algorithm>
#include <unordered_set>

#include "dsm/errors.hpp"

namespace dsm {

double polyline_length(const std::vector<Point2>& pts) {
    double len = 0.0;
    for (size_t i = 1; i < pts.size(); ++i) len += distance(pts[i - 1], pts[i]);
    return len;
}

double stroke_length(const Stroke& s) { return polyline_length(s.points); }

namespace {

// Walks the polyline and emits interpolated points at the requested arc
// positions. Positions must be sorted ascending within [0, L].
std::vector<Point2> points_at_arcs(const std::vector<Point2>& pts,
                                   const std::vector<double>& arcs) {
    std::vector<Point2> out;
    out.reserve(arcs.size());
    size_t seg = 1;
    double seg_start = 0.0;
    double seg_len = pts.size() > 1 ? distance(pts[0], pts[1]) : 0.0;
    for (double a : arcs) {
        while (seg + 1 < pts.size() && seg_start + seg_len < a) {
            seg_start += seg_len;
            ++seg;
            seg_len = distance(pts[seg - 1], pts[seg]);
        }
        if (seg_len <= 0.0) {
            out.push_back(pts[seg]);
        } else {
            double t = std::clamp((a - seg_start) / seg_len, 0.0, 1.0);
            out.push_back(pts[seg - 1] + t * (pts[seg] - pts[seg - 1]));
        }
    }
    return out;
}

} // namespace

std::vector<Point2> resample_polyline(const std::vector<Point2>& pts, double spacing) {
    if (spacing <= 0.0) throw InvalidArgument("resample spacing must be > 0");
    if (pts.size() < 2) return pts;
    const double len = polyline_length(pts);
    if (len <= 0.0) return {pts.front(), pts.back()};
    const double eps = 1e-9 * std::max(1.0, len);
    std::vector<double> arcs;
    for (double a = 0.0; a < len - eps; a += spacing) arcs.push_back(a);
    arcs.push_back(len);
    return points_at_arcs(pts, arcs);
}

Stroke resample_stroke(const Stroke& s, double spacing) {
    Stroke out = s;
    out.points = resample_polyline(s.points, spacing);
    return out;
}

std::vector<Point2> sample_polyline(const std::vector<Point2>& pts, int n) {
    if (n < 2) throw InvalidArgument("sample count must be >= 2");
    if (pts.size() < 2) return pts;
    const double len = polyline_length(pts);
    if (len <= 0.0) return std::vector<Point2>(static_cast<size_t>(n), pts.front());
    std::vector<double> arcs(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) arcs[static_cast<size_t>(i)] = len * i / (n - 1);
    return points_at_arcs(pts, arcs);
}

Point2 point_at_arc(const std::vector<Point2>& pts, double arc) {
    if (pts.empty()) throw InvalidArgument("point_at_arc on empty polyline");
    arc = std::clamp(arc, 0.0, polyline_length(pts));
    return points_at_arcs(pts, {arc}).front();
}

std::vector<Stroke> cut_stroke(const Stroke& s, double max_len) {
    if (max_len <= 0.0) throw InvalidArgument("cut max_len must be > 0");
    const double len = stroke_length(s);
    const int n = std::max(1, static_cast<int>(std::ceil(len / max_len - 1e-12)));
    if (n == 1 || len <= 0.0) return {s};

    std::vector<Stroke> out;
    out.reserve(static_cast<size_t>(n));
    Stroke cur;
    cur.id = s.id;
    cur.order = s.order;
    cur.points.push_back(s.points.front());
    double walked = 0.0;
    int frag = 1;
    double next_cut = len * frag / n;
    for (size_t i = 1; i < s.points.size(); ++i) {
        double seg_len = distance(s.points[i - 1], s.points[i]);
        double seg_start = walked;
        while (frag < n && seg_len > 0.0 && seg_start + seg_len >= next_cut - 1e-12) {
            double t = std::clamp((next_cut - seg_start) / seg_len, 0.0, 1.0);
            Point2 cut_pt = s.points[i - 1] + t * (s.points[i] - s.points[i - 1]);
            if (distance(cur.points.back(), cut_pt) > 1e-12) cur.points.push_back(cut_pt);
            if (cur.points.size() < 2) cur.points.push_back(cut_pt);
            out.push_back(std::move(cur));
            cur = Stroke{s.id, s.order, {cut_pt}};
            ++frag;
            next_cut = len * frag / n;
        }
        walked += seg_len;
        if (distance(cur.points.back(), s.points[i]) > 1e-12 || i + 1 == s.points.size())
            cur.points.push_back(s.points[i]);
    }
    if (cur.points.size() < 2) cur.points.push_back(s.points.back());
    out.push_back(std::move(cur));
    return out;
}

std::pair<Stroke, Stroke> split_stroke_at_arc(const Stroke& s, double arc_pos) {
    const double len = stroke_length(s);
    arc_pos = std::clamp(arc_pos, 0.0, len);
    Stroke head{s.id, s.order, {}};
    Stroke tail{s.id, s.order, {}};
    Point2 cut = points_at_arcs(s.points, {arc_pos}).front();
    double walked = 0.0;
    bool in_head = true;
    head.points.push_back(s.points.front());
    for (size_t i = 1; i < s.points.size(); ++i) {
        double seg_len = distance(s.points[i - 1], s.points[i]);
        if (in_head && walked + seg_len >= arc_pos - 1e-12) {
            if (distance(head.points.back(), cut) > 1e-12) head.points.push_back(cut);
            tail.points.push_back(cut);
            in_head = false;
        }
        walked += seg_len;
        auto& dst = in_head ? head : tail;
        if (distance(dst.points.back(), s.points[i]) > 1e-12) dst.points.push_back(s.points[i]);
    }
    if (head.points.size() < 2) head.points.push_back(cut);
    if (tail.points.empty()) tail.points.push_back(cut);
    if (tail.points.size() < 2) tail.points.push_back(s.points.back());
    return {head, tail};
}

Sketch flip_horizontal(const Sketch& k) {
    Sketch out = k;
    for (auto& s : out.strokes)
        for (auto& p : s.points) p.x = k.canvas_width - p.x;
    return out;
}

Point2 centroid(const std::vector<Point2>& pts) {
    Point2 c;
    if (pts.empty()) return c;
    for (const auto& p : pts) {
        c.x += p.x;
        c.y += p.y;
    }
    c.x /= static_cast<double>(pts.size());
    c.y /= static_cast<double>(pts.size());
    return c;
}

BoundingBox bounding_box(const std::vector<Point2>& pts) {
    BoundingBox b;
    if (pts.empty()) return b;
    b.min_x = b.max_x = pts[0].x;
    b.min_y = b.max_y = pts[0].y;
    for (const auto& p : pts) {
        b.min_x = std::min(b.min_x, p.x);
        b.max_x = std::max(b.max_x, p.x);
        b.min_y = std::min(b.min_y, p.y);
        b.max_y = std::max(b.max_y, p.y);
    }
    return b;
}

void validate_sketch(const Sketch& k) {
    if (k.canvas_width <= 0.0 || k.canvas_height <= 0.0)
        throw InvalidArgument("sketch canvas dimensions must be positive");
    std::unordered_set<int> orders;
    for (const auto& s : k.strokes) {
        if (s.points.size() < 2)
            throw InvalidArgument("stroke " + std::to_string(s.id) + " has fewer than 2 points");
        if (stroke_length(s) <= 0.0)
            throw InvalidArgument("stroke " + std::to_string(s.id) + " has zero arc length");
        if (s.order < 0 || s.order >= static_cast<int>(k.strokes.size()) ||
            !orders.insert(s.order).second)
            throw InvalidArgument("stroke orders must form a permutation of 0..n-1");
        for (const auto& p : s.points)
            if (!std::isfinite(p.x) || !std::isfinite(p.y))
                throw InvalidArgument("stroke points must be finite");
    }
}

void clamp_to_canvas(Sketch& k) {
    for (auto& s : k.strokes)
        for (auto& p : s.points) {
            p.x = std::clamp(p.x, 0.0, k.canvas_width);
            p.y = std::clamp(p.y, 0.0, k.canvas_height);
        }
}

} // namespace dsm
