#pragma once

#include <array>
#include <vector>

#include "dsm/geometry.hpp"

namespace dsm {

// Modified Hausdorff distance: max of the two directed mean nearest-point
// distances. Both sets must be non-empty.
double mhd(const std::vector<Point2>& a, const std::vector<Point2>& b);

// Log-polar histogram descriptor over arc-length-uniform sample points.
// Radial bins are normalized by the mean pairwise sample distance, which
// makes the descriptor translation- and scale-invariant; rotation is
// deliberately retained.
struct ShapeContextDescriptor {
    int radial_bins = 0;
    int angle_bins = 0;
    std::vector<Point2> sample_points;
    std::vector<std::vector<double>> histograms;  // one per sample, radial*angle entries
};

ShapeContextDescriptor shape_context(const std::vector<Point2>& pts, int n_samples = 30,
                                     int radial_bins = 5, int angle_bins = 12);
ShapeContextDescriptor shape_context(const Stroke& s, int n_samples = 30, int radial_bins = 5,
                                     int angle_bins = 12);

// Shape-context matching cost K: mean chi-square histogram distance under
// the optimal one-to-one sample assignment. Symmetric, K(x,x) = 0.
double sc_cost(const ShapeContextDescriptor& d1, const ShapeContextDescriptor& d2);

// Chi-square distance between two histograms, 1/2 sum (a-b)^2/(a+b).
double chi_square(const std::vector<double>& a, const std::vector<double>& b);

// Exact minimum-total-cost one-to-one assignment of an n x n matrix
// (Kuhn-Munkres). Returns assignment[i] = column matched to row i.
std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost,
                                  double* total_cost = nullptr);

struct OrientedEdgePoint {
    Point2 p;
    double orientation = 0.0;  // tangent direction in [0, pi)
};

// Per-orientation-channel exact Euclidean distance transforms of an edge
// map. Channel c covers orientations in [c*pi/n, (c+1)*pi/n). Channels with
// no edge points are filled with the raster diagonal.
struct OrientedDistanceField {
    int width = 0;
    int height = 0;
    int n_channels = 0;
    std::vector<std::vector<double>> channels;  // row-major rasters
    std::vector<OrientedEdgePoint> edge_points;
    double oob_penalty = 0.0;  // cost for template points outside the raster

    double at(int channel, int x, int y) const {
        return channels[static_cast<size_t>(channel)]
                       [static_cast<size_t>(y) * static_cast<size_t>(width) +
                        static_cast<size_t>(x)];
    }
    bool inside(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

// Maps an orientation (any real) to its channel in [0, n).
int orientation_channel(double orientation, int n_channels);
double normalize_orientation(double theta);

// Edge points are rasterized to their nearest pixel; points that round
// outside the raster are rejected. oob_penalty defaults to diagonal/4.
OrientedDistanceField build_odf(const std::vector<OrientedEdgePoint>& edge_points, int width,
                                int height, int n_channels, double oob_penalty = -1.0);

// Translation-only chamfer template: integer offsets relative to the sample
// centroid plus the orientation channel of the local chord.
struct ChamferTemplate {
    struct TplPoint {
        int dx = 0;
        int dy = 0;
        int channel = 0;
    };
    std::vector<TplPoint> points;
    Point2 anchor;  // centroid of the resampled template points
};

ChamferTemplate make_chamfer_template(const std::vector<std::vector<Point2>>& polylines,
                                      double spacing, int n_channels);
ChamferTemplate make_chamfer_template(const Stroke& s, double spacing, int n_channels);

// Mean distance-field lookup over the template points translated so the
// anchor lands on `location` (rounded to the pixel grid). Out-of-raster
// lookups contribute odf.oob_penalty.
double chamfer_cost(const ChamferTemplate& tpl, Point2 location, const OrientedDistanceField& odf);
double chamfer_cost(const Stroke& tpl, Point2 location, const OrientedDistanceField& odf,
                    double spacing = 4.0);

struct Rect {
    double x = 0, y = 0, w = 0, h = 0;
};

// Exhaustive integer-grid scan of `region` (clipped to the raster):
// locations with chamfer cost <= threshold, sorted by (cost, y, x).
std::vector<std::pair<Point2, double>> fdcm_candidates(const ChamferTemplate& tpl,
                                                       const OrientedDistanceField& odf,
                                                       const Rect& region, double threshold,
                                                       int stride = 1, int threads = 1);
std::vector<std::pair<Point2, double>> fdcm_candidates(const Stroke& tpl,
                                                       const OrientedDistanceField& odf,
                                                       const Rect& region, double threshold,
                                                       double spacing = 4.0);

} // namespace dsm
