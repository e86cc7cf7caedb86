#include "dsm/synthesis.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "dsm/errors.hpp"

namespace dsm {

using nlohmann::json;

SynthesisResult synthesize(const DeformableStrokeModel& model, const EdgeMap& edges,
                           const std::optional<BBox>& bbox, const SynthConfig& config) {
    validate_model(model);
    if (edges.width < 1 || edges.height < 1)
        throw InvalidArgument("synthesize needs a non-empty edge map");

    BBox box = bbox.value_or(BBox{0.0, 0.0, static_cast<double>(edges.width),
                                  static_cast<double>(edges.height)});
    const double x0 = std::clamp(box.x, 0.0, static_cast<double>(edges.width));
    const double y0 = std::clamp(box.y, 0.0, static_cast<double>(edges.height));
    const double x1 = std::clamp(box.x + box.w, 0.0, static_cast<double>(edges.width));
    const double y1 = std::clamp(box.y + box.h, 0.0, static_cast<double>(edges.height));
    box = {x0, y0, x1 - x0, y1 - y0};
    if (box.w <= 0.0 || box.h <= 0.0) throw InvalidArgument("bounding box does not intersect the image");

    // uniform scale, centered letterbox onto the model canvas
    const double scale = std::min(model.canvas_width / box.w, model.canvas_height / box.h);
    const Point2 offset{(model.canvas_width - scale * box.w) / 2.0,
                        (model.canvas_height - scale * box.h) / 2.0};

    EdgeMap mapped;
    mapped.width = std::max(1, static_cast<int>(std::lround(model.canvas_width)));
    mapped.height = std::max(1, static_cast<int>(std::lround(model.canvas_height)));
    for (const auto& ep : edges.points) {
        if (ep.p.x < box.x || ep.p.x > box.x + box.w || ep.p.y < box.y || ep.p.y > box.y + box.h)
            continue;
        Point2 q{scale * (ep.p.x - box.x) + offset.x, scale * (ep.p.y - box.y) + offset.y};
        q.x = std::clamp(q.x, 0.0, static_cast<double>(mapped.width - 1));
        q.y = std::clamp(q.y, 0.0, static_cast<double>(mapped.height - 1));
        mapped.points.push_back({q, ep.orientation});  // uniform scaling keeps orientations
    }

    const auto odf = build_odf(mapped, config.inference.n_channels);
    SynthesisResult result;
    result.configuration = detect(model, odf, config.inference);
    result.bbox = box;
    result.scale = scale;
    result.offset = offset;
    result.sketch_model_frame =
        configuration_to_sketch(model, result.configuration, config.inference.template_spacing);

    result.sketch = result.sketch_model_frame;
    result.sketch.canvas_width = static_cast<double>(edges.width);
    result.sketch.canvas_height = static_cast<double>(edges.height);
    for (auto& s : result.sketch.strokes)
        for (auto& p : s.points)
            p = {(p.x - offset.x) / scale + box.x, (p.y - offset.y) / scale + box.y};
    return result;
}

std::string synthesis_to_json(const SynthesisResult& result) {
    json j;
    j["energy"] = result.configuration.energy;
    j["bbox"] = json::array({result.bbox.x, result.bbox.y, result.bbox.w, result.bbox.h});
    j["scale"] = result.scale;
    json placements = json::array();
    for (size_t c = 0; c < result.configuration.placements.size(); ++c) {
        const auto& p = result.configuration.placements[c];
        const Point2 img{(p.location.x - result.offset.x) / result.scale + result.bbox.x,
                         (p.location.y - result.offset.y) / result.scale + result.bbox.y};
        placements.push_back({{"cluster", static_cast<int>(c)},
                              {"exemplar", p.exemplar},
                              {"location", json::array({p.location.x, p.location.y})},
                              {"location_image", json::array({img.x, img.y})},
                              {"chamfer", p.chamfer}});
    }
    j["placements"] = placements;
    return j.dump(2) + "\n";
}

} // namespace dsm
