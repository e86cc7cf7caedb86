#pragma once

#include <utility>
#include <vector>

#include "dsm/geometry.hpp"

namespace dsm {

// 2D Gaussian over parent-child location offsets, stored as mean plus the
// three free entries of the symmetric covariance.
struct Gaussian2 {
    Point2 mean;
    double cov_xx = 1.0;
    double cov_xy = 0.0;
    double cov_yy = 1.0;

    double det() const { return cov_xx * cov_yy - cov_xy * cov_xy; }

    // -log N(d | mean, cov) = 1/2 (d-mu)^T Sigma^-1 (d-mu) + 1/2 log((2*pi)^2 |Sigma|)
    double neg_log_density(Point2 d) const;
    double mahalanobis_sq(Point2 d) const;
    bool is_spd() const { return cov_xx > 0.0 && det() > 0.0; }
};

// One semantic-stroke exemplar: the member polylines of a semantic group in
// model-canvas coordinates, plus the anchor (centroid of the arc-uniform
// sample points) that placement translates onto a candidate location.
struct ExemplarStroke {
    std::vector<std::vector<Point2>> polylines;
    Point2 anchor;
};

struct ClusterEntry {
    std::vector<ExemplarStroke> exemplars;
    Point2 bbox_center;   // mean member centroid
    double bbox_width = 0.0;   // mean member bounding-box size
    double bbox_height = 0.0;
    double total_member_length = 0.0;
};

// Tree-structured deformable stroke model: clusters of exemplars, spanning
// tree edges (canonical i < j) and one offset Gaussian per edge over
// l_i - l_j.
struct DeformableStrokeModel {
    double canvas_width = 0.0;
    double canvas_height = 0.0;
    std::vector<ClusterEntry> clusters;
    std::vector<std::pair<int, int>> edges;
    std::vector<Gaussian2> offsets;  // parallel to edges
    int root = 0;
};

// Throws InvalidModel unless the edges form a spanning tree, every
// covariance is SPD and every cluster has at least one exemplar.
void validate_model(const DeformableStrokeModel& m);

} // namespace dsm
