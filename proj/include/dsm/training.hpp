#pragma once

#include <string>
#include <vector>

#include "dsm/config.hpp"
#include "dsm/grouping.hpp"
#include "dsm/model.hpp"

namespace dsm {

struct IterationRecord {
    int iteration = 0;                            // 1-based
    std::vector<int> counts;                      // semantic strokes per sketch
    double variance = 0.0;                        // population variance of counts
    std::vector<std::vector<SemanticGroup>> groups;
    DeformableStrokeModel model;                  // model learned from these groups
};

// Population variance (divide by N).
double count_variance(const std::vector<int>& counts);

struct TrainResult {
    DeformableStrokeModel model;  // relearned from the selected iteration's groups
    std::vector<IterationRecord> records;
    int selected_iteration = 0;   // 1-based, minimal variance (earliest on ties)
    // working strokes per sketch at the selected iteration (post-cutting)
    std::vector<std::vector<Stroke>> working_strokes;
};

// The iterative loop: perceptual grouping, model learning, then model
// matching and stroke labeling on the training sketches feeding the next
// round of grouping. Stops at max_iters or after two consecutive
// non-improving variances; the final model comes from the minimum-variance
// iteration.
TrainResult train_iterative(const std::vector<Sketch>& sketches, const SynthConfig& config,
                            int max_iters);

std::string train_records_json(const TrainResult& result);

} // namespace dsm
