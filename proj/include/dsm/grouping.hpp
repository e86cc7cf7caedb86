#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "dsm/geometry.hpp"

namespace dsm {

struct GroupingParams {
    // term weights and adjustment factors
    double w_pro = 0.33;
    double w_con = 0.33;
    double w_len = 0.33;
    double w_sim = 0.33;
    double mu_temp = 0.33;
    double mu_mod = 0.33;

    double sigma = 0.0;    // similarity scale; <= 0 self-tunes to the median pairwise K
    double tau = 0.0;      // semantic length scale; <= 0 auto: 0.9 * max stroke length
    double eta_sem = 1.0;  // strokes per semantic part estimate
    double h = 1.0;        // stop threshold on the minimum pair error
    double eta_avg = 0.0;  // previous-iteration average semantic count; <= 0: stroke count

    // working resolution
    double endpoint_inset = 10.0;  // arc distance of the continuity inward points
    double sample_spacing = 4.0;   // resampling step for MHD point sets
    int sc_samples = 30;
    int sc_radial_bins = 5;
    int sc_angle_bins = 12;
    int threads = 1;
};

struct SemanticGroup {
    int group_id = 0;
    std::vector<int> members;  // stroke ids, sorted
    double total_length = 0.0;
};

// Scales derived per sketch from the params: eps_pro = sqrt(area/eta_avg)/2,
// eps_con = eps_pro/4, lambda = tau*eta_sem, delta = eta_all/eta_avg.
struct GroupingScales {
    double eps_pro = 1.0;
    double eps_con = 1.0;
    double lambda = 1.0;
    double delta = 1.0;
};

GroupingScales derive_grouping_scales(const Sketch& k, const GroupingParams& params);

// Proximity: MHD of the resampled point sets over eps_pro.
double d_pro(const Stroke& a, const Stroke& b, double eps_pro, double sample_spacing = 4.0);

// Continuity: gap between the closest endpoints times (1 + facing angle),
// over eps_con. The facing angle is between (x - x') and (y' - y), so a
// smooth collinear continuation scores 0.
double d_con(const Stroke& a, const Stroke& b, double eps_con, double inset = 10.0);

// Length cost over effective lengths (group totals where grouped).
double d_len(double len_a, double len_b, double lambda);

// Similarity bonus exp(-K^2/sigma^2).
double b_sim(double k_cost, double sigma);

// Temporal factor: 1 -/+ mu_temp for order gaps below/eq-above delta.
double f_temp(int order_a, int order_b, double delta, double mu_temp);

// Model-label factor; 1 when either label is absent.
double f_mod(std::optional<int> label_a, std::optional<int> label_b, double mu_mod);

// Eq-style combination of precomputed terms.
double pair_error(double pro, double con, double len, double sim, double temp, double mod,
                  const GroupingParams& params);

// Greedy minimum-error merger. Strokes are expected to be pre-cut so none
// exceeds the long-stroke threshold. Labels (stroke id -> cluster id) are
// optional and only consulted from the second training iteration on.
std::vector<SemanticGroup> group_sketch(const Sketch& k, const GroupingParams& params,
                                        const std::unordered_map<int, int>* labels = nullptr);

// Convenience: group id per stroke id (index = stroke id).
std::vector<int> group_assignment(const std::vector<SemanticGroup>& groups, int n_strokes);

} // namespace dsm
