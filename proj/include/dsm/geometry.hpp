#pragma once

#include <cmath>
#include <vector>

namespace dsm {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

// One pen-down-to-pen-up polyline. `order` is the drawing-order index T(s);
// fragments produced by cutting keep the parent's order.
struct Stroke {
    int id = 0;
    int order = 0;
    std::vector<Point2> points;
};

struct Sketch {
    double canvas_width = 0.0;
    double canvas_height = 0.0;
    std::vector<Stroke> strokes;
};

// Arc length P(s) in pixels: sum of Euclidean segment lengths.
double stroke_length(const Stroke& s);
double polyline_length(const std::vector<Point2>& pts);

// Uniform arc-length resampling: points at arc positions 0, spacing,
// 2*spacing, ... plus the final endpoint. Order index is preserved.
Stroke resample_stroke(const Stroke& s, double spacing);
std::vector<Point2> resample_polyline(const std::vector<Point2>& pts, double spacing);

// Exactly n points at arc positions i*L/(n-1), endpoints included.
std::vector<Point2> sample_polyline(const std::vector<Point2>& pts, int n);

// Interpolated point at one arc position (clamped to [0, L]).
Point2 point_at_arc(const std::vector<Point2>& pts, double arc);

// Splits s into ceil(P/max_len) fragments of equal arc length; all fragments
// inherit the parent's order index and id. Concatenation reproduces s.
std::vector<Stroke> cut_stroke(const Stroke& s, double max_len);

// Splits at one arc position; both fragments share the interpolated cut point.
std::pair<Stroke, Stroke> split_stroke_at_arc(const Stroke& s, double arc_pos);

// Mirrors every point across the vertical centerline: (x, y) -> (width - x, y).
Sketch flip_horizontal(const Sketch& k);

Point2 centroid(const std::vector<Point2>& pts);

struct BoundingBox {
    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
    Point2 center() const { return {(min_x + max_x) / 2.0, (min_y + max_y) / 2.0}; }
};

BoundingBox bounding_box(const std::vector<Point2>& pts);

// Validates the load-time invariants: >=2 points and positive arc length per
// stroke, orders forming a permutation of 0..n-1. Throws InvalidArgument.
void validate_sketch(const Sketch& k);

// Clamps all stroke points into [0, width] x [0, height].
void clamp_to_canvas(Sketch& k);

} // namespace dsm
