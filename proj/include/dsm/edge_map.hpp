#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dsm/geometry.hpp"
#include "dsm/matching.hpp"

namespace dsm {

struct EdgeMap {
    int width = 0;
    int height = 0;
    std::vector<OrientedEdgePoint> points;
};

struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels;  // row-major

    uint8_t at(int x, int y) const {
        return pixels[static_cast<size_t>(y) * static_cast<size_t>(width) + static_cast<size_t>(x)];
    }
};

// 8-bit grayscale loaders; format chosen by magic bytes (P2/P5 PGM, PNG).
GrayImage load_gray_image(const std::string& path);

// Sobel gradient extraction: magnitude > threshold marks an edge point at
// the pixel center; orientation is the gradient direction rotated 90
// degrees (the local tangent), in [0, pi). The 1-pixel border is skipped.
EdgeMap extract_edges(const GrayImage& img, double threshold);

// Edge map JSON schema: {"width":W,"height":H,"points":[[x,y,theta],...]}
// with theta the tangent orientation in [0, pi).
EdgeMap parse_edge_map(const std::string& json_text);
EdgeMap load_edge_map_json(const std::string& path);
std::string edge_map_to_json(const EdgeMap& em);

// Treats a raster as a precomputed edge map: pixel > threshold is an edge
// point, orientation from the Sobel gradient of the same raster.
EdgeMap load_edge_map_image(const std::string& path, double threshold);

// Rasterizes strokes at 1-pixel resolution; orientations come from the
// local chord, so no gradient estimation is involved.
EdgeMap edge_map_from_strokes(const std::vector<Stroke>& strokes, double canvas_width,
                              double canvas_height);
EdgeMap edge_map_from_sketch(const Sketch& k);

OrientedDistanceField build_odf(const EdgeMap& em, int n_channels, double oob_penalty = -1.0);

} // namespace dsm
