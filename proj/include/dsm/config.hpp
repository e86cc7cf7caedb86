#pragma once

#include <string>

#include "dsm/grouping.hpp"
#include "dsm/inference.hpp"
#include "dsm/learning.hpp"

namespace dsm {

// One configuration object for the whole pipeline, loadable from a single
// JSON file with dotted-key overrides (e.g. "grouping.tau=1800").
struct SynthConfig {
    GroupingParams grouping;
    LearningParams learning;
    InferenceParams inference;

    // analysis
    double hist_bin_width = 100.0;
    double short_max = 1000.0;
    double long_min = 2000.0;

    // preprocessing: strokes longer than this are cut before grouping
    double cut_max_len = 2000.0;

    // edge extraction and rendering
    double edge_threshold = 64.0;
    double stroke_width = 2.0;

    // training loop
    int max_iters = 5;

    int threads = 1;  // 0 = available parallelism; fanned out to all stages
};

SynthConfig default_config();

SynthConfig parse_config(const std::string& json_text);
SynthConfig load_config(const std::string& path);
std::string config_to_json(const SynthConfig& cfg);
void save_config(const SynthConfig& cfg, const std::string& path);

// Applies "section.key=value" (value parsed as JSON scalar) to the config.
void apply_override(SynthConfig& cfg, const std::string& key, const std::string& value);

} // namespace dsm
