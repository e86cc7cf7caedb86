#pragma once

#include <string>
#include <vector>

#include "dsm/analytics.hpp"
#include "dsm/edge_map.hpp"
#include "dsm/geometry.hpp"
#include "dsm/model.hpp"

namespace dsm {

// All writers return a complete standalone SVG document. Coordinates are
// printed with three decimals so identical inputs yield identical bytes.

std::string sketch_to_svg(const Sketch& k, double stroke_width = 2.0);

// One color per group id; ungrouped ids fall back to black.
std::string groups_to_svg(const Sketch& k, const std::vector<int>& group_of_stroke,
                          double stroke_width = 2.0);

// Drawing order encoded blue (first) to red (last).
std::string order_colormap_svg(const Sketch& k, double stroke_width = 2.0);

std::string histogram_svg(const LengthHistogram& h);
std::string temporal_matrix_svg(const TemporalMatrix& m);

// Cluster montage: one cell per cluster showing its exemplars.
std::string model_montage_svg(const DeformableStrokeModel& m, double stroke_width = 2.0);

// Placed strokes over the edge map's points.
std::string overlay_svg(const EdgeMap& em, const Sketch& placed, double stroke_width = 2.0);

std::string color_for_index(int index);

} // namespace dsm
