#pragma once

#include <vector>

#include "dsm/geometry.hpp"
#include "dsm/grouping.hpp"
#include "dsm/model.hpp"

namespace dsm {

struct LearningParams {
    double exemplar_fraction = 0.25;  // kept members per cluster (ceil of fraction)
    int n_rotations = 2;              // rotated copies per kept exemplar
    double max_rotation_deg = 10.0;
    double ridge = 1.0;               // covariance ridge, px^2
    bool normalize_facing = true;     // flip sketches to the majority x-skew sign
    bool mirror_augment = false;      // add horizontally flipped copies to the pool
    int local_scale_k = 7;            // neighbor index for the self-tuning scale
    double resample_spacing = 4.0;
    int sc_samples = 30;
    int sc_radial_bins = 5;
    int sc_angle_bins = 12;
    int kmeans_max_iters = 100;
    int threads = 1;
};

// One pooled semantic stroke: the member polylines of a group within one
// training sketch, plus cached geometry.
struct SemanticStrokeItem {
    int sketch_index = 0;  // index in the (augmented) training pool
    int group_id = 0;
    std::vector<std::vector<Point2>> polylines;
    std::vector<Point2> samples;  // merged resampled points
    Point2 location;              // centroid of samples
    double length = 0.0;
    BoundingBox bbox;
};

SemanticStrokeItem make_semantic_stroke(const Sketch& k, const SemanticGroup& group,
                                        int sketch_index, double resample_spacing);

// Affinity between two pooled strokes: exp(-K * |l_i - l_j| / (rho_i rho_j)).
double affinity(double k_cost, Point2 l_i, Point2 l_j, double rho_i, double rho_j);

// Self-tuning local scale per item: sqrt of the k-th smallest K*distance
// product to the other items (floored away from zero).
std::vector<double> local_scales(const std::vector<std::vector<double>>& k_costs,
                                 const std::vector<Point2>& locations, int k_neighbor);

// Normalized-cut spectral clustering: symmetric-normalized Laplacian of the
// affinity matrix, top-k eigenvector embedding with row normalization, then
// deterministic farthest-first-seeded k-means. Returns k non-empty clusters.
std::vector<int> spectral_cluster(const std::vector<std::vector<double>>& affinity_matrix, int k,
                                  int kmeans_max_iters = 100);

// Members with the lowest mean shape-context cost to the rest of the
// cluster, plus rotation variants about each stroke centroid.
std::vector<ExemplarStroke> select_exemplars(const std::vector<SemanticStrokeItem>& members,
                                             const std::vector<std::vector<double>>& k_costs,
                                             const std::vector<int>& member_indices,
                                             double fraction, int n_rotations,
                                             double max_rotation_deg);

// Kruskal over additive (log-domain) edge weights; returns canonical (i<j)
// edges of the minimum spanning tree.
std::vector<std::pair<int, int>> minimum_spanning_tree(
    int n, const std::vector<std::vector<double>>& weights);

// Log-domain cluster edge weights: sum over same-sketch member pairs of
// log(max(|l_i - l_j| / max(height, width), 1e-6)); pairs missing entirely
// give log(1) = 0.
std::vector<std::vector<double>> cluster_log_edge_weights(
    const std::vector<SemanticStrokeItem>& items, const std::vector<int>& cluster_of, int n_clusters,
    double max_dim);

std::vector<std::pair<int, int>> mst_structure(const std::vector<SemanticStrokeItem>& items,
                                               const std::vector<int>& cluster_of, int n_clusters,
                                               double max_dim);

// Gaussian MLE of per-edge location offsets l_i - l_j over same-sketch
// pairs (covariance divided by m, plus ridge*I). Throws InvalidModel when
// an edge has no same-sketch pair.
Gaussian2 fit_offset(const std::vector<Point2>& offsets, double ridge);
std::vector<Gaussian2> fit_offsets(const std::vector<std::pair<int, int>>& edges,
                                   const std::vector<SemanticStrokeItem>& items,
                                   const std::vector<int>& cluster_of, double ridge);

// Full pipeline over per-sketch semantic groups: pooling (with facing
// normalization / mirror augmentation), spectral clustering with
// k = round(mean groups per sketch), exemplar selection, MST and offsets.
// The root is the cluster with the greatest total member length.
DeformableStrokeModel learn_model(const std::vector<Sketch>& sketches,
                                  const std::vector<std::vector<SemanticGroup>>& groups,
                                  const LearningParams& params);

} // namespace dsm
