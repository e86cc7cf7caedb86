#pragma once

#include <string>

#include "dsm/geometry.hpp"
#include "dsm/model.hpp"

namespace dsm {

// Sketch file schema:
//   {"canvas":{"width":W,"height":H},
//    "strokes":[{"order":k,"points":[[x,y],...]},...]}
// Unknown keys are ignored. Stroke ids are positions in the strokes array.
// Points are clamped into the canvas at load time and the invariants of
// validate_sketch are enforced.
Sketch load_sketch(const std::string& path);
Sketch parse_sketch(const std::string& json_text);
void save_sketch(const Sketch& k, const std::string& path);
std::string sketch_to_json(const Sketch& k);

// Model file schema:
//   {"canvas":{"width":W,"height":H},
//    "root":r,
//    "clusters":[{"exemplars":[{"polylines":[[[x,y],...],...],
//                               "anchor":[x,y]},...],
//                 "bbox":{"center":[x,y],"size":[w,h]},
//                 "total_member_length":L},...],
//    "edges":[[i,j],...],
//    "offsets":[{"mean":[mx,my],"cov":[[a,b],[b,d]]},...]}
DeformableStrokeModel load_model(const std::string& path);
DeformableStrokeModel parse_model(const std::string& json_text);
void save_model(const DeformableStrokeModel& m, const std::string& path);
std::string model_to_json(const DeformableStrokeModel& m);

// Small file helpers shared by the IO paths.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace dsm
