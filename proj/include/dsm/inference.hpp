#pragma once

#include <vector>

#include "dsm/edge_map.hpp"
#include "dsm/geometry.hpp"
#include "dsm/matching.hpp"
#include "dsm/model.hpp"

namespace dsm {

struct InferenceParams {
    double sampling_threshold = 10.0;  // chamfer cutoff for candidate sampling
    double relaxed_threshold = 20.0;   // higher cutoff for energy minimization
    int f = 10;                        // configurations sampled from the root marginal
    double margin_factor = 0.25;       // region growth, fraction of the model canvas diagonal
    double shift_radius = 5.0;         // aesthetic-refinement grid radius
    int max_candidates = 300;          // per-cluster candidate cap
    int candidate_stride = 1;          // scan stride inside sampling regions
    double template_spacing = 4.0;     // chamfer template resampling step
    int n_channels = 8;                // orientation channels
    bool refine = true;                // refine the winning configuration
    bool refine_per_sample = false;    // refine every sample before selection
    double label_overlap_radius = 3.0;
    double label_cut_fraction = 0.20;
    int threads = 1;
};

struct Candidate {
    int exemplar = 0;
    Point2 location;
    double chamfer = 0.0;
};

struct CandidateSet {
    std::vector<std::vector<Candidate>> per_cluster;
};

struct Placement {
    int exemplar = 0;
    Point2 location;
    double chamfer = 0.0;
};

// One placed exemplar per cluster; energy is the sum of chamfer costs plus
// the -log Gaussian deformation cost over the tree edges.
struct Configuration {
    std::vector<Placement> placements;
    double energy = 0.0;
};

double configuration_energy(const DeformableStrokeModel& model,
                            const std::vector<Placement>& placements);

// The sampling region of a cluster: its mean training bounding box grown by
// margin_factor * canvas diagonal on each side.
Rect cluster_region(const DeformableStrokeModel& model, int cluster, double margin_factor);

// FDCM candidates for every exemplar of every cluster within its region,
// merged, sorted by (cost, exemplar, y, x) and capped at max_candidates.
CandidateSet sample_candidates(const DeformableStrokeModel& model,
                               const OrientedDistanceField& odf, const InferenceParams& params);

// Log-domain root marginals: sum-product messages up the tree with
// p(I|s,l) = exp(-chamfer) and the edge Gaussians. One value per root
// candidate. Throws DetectionInfeasible when any cluster has no candidates.
std::vector<double> root_marginals(const DeformableStrokeModel& model,
                                   const CandidateSet& candidates);

// Top-f root candidates by marginal, each completed by max-product
// backtracking over the remaining clusters.
std::vector<Configuration> sample_configurations(const DeformableStrokeModel& model,
                                                 const CandidateSet& candidates, int f);

// Min-sum tree DP: selects one candidate per cluster minimizing total
// energy. Exemplar identities come from the candidate entries.
Configuration minimize_over_candidates(const DeformableStrokeModel& model,
                                       const CandidateSet& candidates);

// Re-selects locations for the configuration's exemplars from fresh FDCM
// candidate lists at the relaxed threshold (the current location is always
// kept as a candidate, so energy never increases).
Configuration minimize_energy(const DeformableStrokeModel& model, const Configuration& config,
                              const OrientedDistanceField& odf, const InferenceParams& params);

// Deformation-only re-minimization over integer shifts within shift_radius
// of each location. When odf is given, chamfer terms of the result are
// recomputed at the new locations for reporting; they do not enter the DP.
Configuration refine_aesthetic(const DeformableStrokeModel& model, const Configuration& config,
                               const InferenceParams& params,
                               const OrientedDistanceField* odf = nullptr);

// Full detection: sample f configurations, minimize each, return the lowest
// energy (ties to the earlier sample), optionally refined.
Configuration detect(const DeformableStrokeModel& model, const OrientedDistanceField& odf,
                     const InferenceParams& params);

// Placed exemplars as a sketch on the model canvas, strokes ordered by
// cluster index.
Sketch configuration_to_sketch(const DeformableStrokeModel& model, const Configuration& config,
                               double template_spacing = 4.0);

// Cluster labels for raw strokes against a fitted configuration: maximum
// point overlap within label_overlap_radius, ties and zero overlap by
// minimum MHD. Strokes split at least label_cut_fraction/label_cut_fraction
// across two exemplars are cut at the transition. Returned strokes carry
// fresh sequential ids aligned with `labels`.
struct LabelResult {
    std::vector<Stroke> strokes;
    std::vector<int> labels;
};

LabelResult label_strokes(const DeformableStrokeModel& model, const Configuration& config,
                          const std::vector<Stroke>& strokes, const InferenceParams& params);

} // namespace dsm
