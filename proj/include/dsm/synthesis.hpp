#pragma once

#include <optional>
#include <string>

#include "dsm/config.hpp"
#include "dsm/edge_map.hpp"
#include "dsm/inference.hpp"
#include "dsm/model.hpp"

namespace dsm {

struct BBox {
    double x = 0, y = 0, w = 0, h = 0;
};

// Image-sketch synthesis: the bbox region of the edge map (whole image when
// absent) is mapped onto the model canvas with a uniform, centered,
// letterboxed scale; detection runs there and the placed exemplars are
// mapped back to image coordinates.
struct SynthesisResult {
    Configuration configuration;  // model-frame placements
    Sketch sketch;                // image-frame strokes, ordered by cluster
    Sketch sketch_model_frame;
    BBox bbox;                    // clipped bbox actually used
    double scale = 1.0;           // image -> model frame
    Point2 offset;                // model-frame letterbox offset
};

SynthesisResult synthesize(const DeformableStrokeModel& model, const EdgeMap& edges,
                           const std::optional<BBox>& bbox, const SynthConfig& config);

// Detection report: energy plus per-cluster exemplar index, model-frame and
// image-frame locations and chamfer costs.
std::string synthesis_to_json(const SynthesisResult& result);

} // namespace dsm
