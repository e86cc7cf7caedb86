#include "dsm/edge_map.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>
#include <png.h>

#include "dsm/errors.hpp"
#include "dsm/sketch_io.hpp"

namespace dsm {

using nlohmann::json;

namespace {

GrayImage load_pgm(const std::string& text, const std::string& path) {
    std::istringstream in(text);
    std::string magic;
    in >> magic;
    auto next_token = [&](int& value) {
        // skips whitespace and '#' comment lines
        while (true) {
            int c = in.peek();
            if (c == '#') {
                std::string line;
                std::getline(in, line);
            } else if (std::isspace(c)) {
                in.get();
            } else {
                break;
            }
        }
        if (!(in >> value)) throw IoError("truncated PGM header: " + path);
    };
    int w = 0, h = 0, maxval = 0;
    next_token(w);
    next_token(h);
    next_token(maxval);
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255)
        throw IoError("unsupported PGM header (need 8-bit): " + path);

    GrayImage img;
    img.width = w;
    img.height = h;
    img.pixels.resize(static_cast<size_t>(w) * static_cast<size_t>(h));
    if (magic == "P5") {
        in.get();  // single whitespace after maxval
        in.read(reinterpret_cast<char*>(img.pixels.data()),
                static_cast<std::streamsize>(img.pixels.size()));
        if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
            throw IoError("truncated PGM data: " + path);
    } else {
        for (auto& px : img.pixels) {
            int v = 0;
            if (!(in >> v)) throw IoError("truncated PGM data: " + path);
            px = static_cast<uint8_t>(v);
        }
    }
    return img;
}

GrayImage load_png(const std::string& path) {
    FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw IoError("cannot open image: " + path);
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw IoError("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw IoError("failed to decode PNG: " + path);
    }
    png_init_io(png, fp);
    png_read_info(png, info);

    png_set_strip_16(png);
    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    png_set_strip_alpha(png);
    const int color_type = png_get_color_type(png, info);
    if (color_type == PNG_COLOR_TYPE_RGB || color_type == PNG_COLOR_TYPE_RGB_ALPHA ||
        color_type == PNG_COLOR_TYPE_PALETTE)
        png_set_rgb_to_gray(png, 1, -1.0, -1.0);
    png_read_update_info(png, info);

    GrayImage img;
    img.width = static_cast<int>(png_get_image_width(png, info));
    img.height = static_cast<int>(png_get_image_height(png, info));
    img.pixels.resize(static_cast<size_t>(img.width) * static_cast<size_t>(img.height));
    std::vector<png_bytep> rows(static_cast<size_t>(img.height));
    for (int y = 0; y < img.height; ++y)
        rows[static_cast<size_t>(y)] = img.pixels.data() + static_cast<size_t>(y) * static_cast<size_t>(img.width);
    png_read_image(png, rows.data());
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    return img;
}

} // namespace

GrayImage load_gray_image(const std::string& path) {
    std::string head = read_text_file(path);
    if (head.size() >= 2 && head[0] == 'P' && (head[1] == '2' || head[1] == '5'))
        return load_pgm(head, path);
    if (head.size() >= 4 && static_cast<unsigned char>(head[0]) == 0x89 && head[1] == 'P' &&
        head[2] == 'N' && head[3] == 'G')
        return load_png(path);
    throw IoError("unrecognized image format (expect PGM or PNG): " + path);
}

EdgeMap extract_edges(const GrayImage& img, double threshold) {
    EdgeMap em;
    em.width = img.width;
    em.height = img.height;
    const double half_pi = std::numbers::pi / 2.0;
    for (int y = 1; y + 1 < img.height; ++y) {
        for (int x = 1; x + 1 < img.width; ++x) {
            const double gx = -img.at(x - 1, y - 1) + img.at(x + 1, y - 1) - 2.0 * img.at(x - 1, y) +
                              2.0 * img.at(x + 1, y) - img.at(x - 1, y + 1) + img.at(x + 1, y + 1);
            const double gy = -img.at(x - 1, y - 1) - 2.0 * img.at(x, y - 1) - img.at(x + 1, y - 1) +
                              img.at(x - 1, y + 1) + 2.0 * img.at(x, y + 1) + img.at(x + 1, y + 1);
            const double mag = std::hypot(gx, gy);
            if (mag > threshold)
                em.points.push_back({{static_cast<double>(x), static_cast<double>(y)},
                                     normalize_orientation(std::atan2(gy, gx) + half_pi)});
        }
    }
    return em;
}

EdgeMap parse_edge_map(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw InvalidArgument("malformed edge map JSON");
    EdgeMap em;
    em.width = j.value("width", 0);
    em.height = j.value("height", 0);
    if (em.width <= 0 || em.height <= 0) throw InvalidArgument("edge map needs positive dimensions");
    for (const auto& pj : j.value("points", json::array())) {
        if (!pj.is_array() || pj.size() < 3)
            throw InvalidArgument("edge map point must be [x,y,theta]");
        em.points.push_back({{pj[0].get<double>(), pj[1].get<double>()},
                             normalize_orientation(pj[2].get<double>())});
    }
    return em;
}

EdgeMap load_edge_map_json(const std::string& path) { return parse_edge_map(read_text_file(path)); }

std::string edge_map_to_json(const EdgeMap& em) {
    json j;
    j["width"] = em.width;
    j["height"] = em.height;
    json pts = json::array();
    for (const auto& ep : em.points) pts.push_back(json::array({ep.p.x, ep.p.y, ep.orientation}));
    j["points"] = pts;
    return j.dump() + "\n";
}

EdgeMap load_edge_map_image(const std::string& path, double threshold) {
    GrayImage img = load_gray_image(path);
    // gradient orientations from the raster itself, edge mask from intensity
    EdgeMap grads = extract_edges(img, 0.0);
    std::vector<std::vector<double>> orient(
        static_cast<size_t>(img.height), std::vector<double>(static_cast<size_t>(img.width), 0.0));
    for (const auto& ep : grads.points)
        orient[static_cast<size_t>(ep.p.y)][static_cast<size_t>(ep.p.x)] = ep.orientation;
    EdgeMap em;
    em.width = img.width;
    em.height = img.height;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if (img.at(x, y) > threshold)
                em.points.push_back({{static_cast<double>(x), static_cast<double>(y)},
                                     orient[static_cast<size_t>(y)][static_cast<size_t>(x)]});
    return em;
}

EdgeMap edge_map_from_strokes(const std::vector<Stroke>& strokes, double canvas_width,
                              double canvas_height) {
    EdgeMap em;
    em.width = std::max(1, static_cast<int>(std::lround(canvas_width)));
    em.height = std::max(1, static_cast<int>(std::lround(canvas_height)));
    std::set<std::tuple<int, int, int>> seen;  // (px, py, fine orientation bin)
    for (const auto& s : strokes) {
        if (s.points.size() < 2 || stroke_length(s) <= 0.0) continue;
        auto rs = resample_polyline(s.points, 0.5);
        for (size_t i = 0; i < rs.size(); ++i) {
            const size_t prev = i > 0 ? i - 1 : 0;
            const size_t next = i + 1 < rs.size() ? i + 1 : rs.size() - 1;
            Point2 chord = rs[next] - rs[prev];
            if (std::abs(chord.x) + std::abs(chord.y) < 1e-12) continue;
            const double theta = normalize_orientation(std::atan2(chord.y, chord.x));
            const int px = std::clamp(static_cast<int>(std::lround(rs[i].x)), 0, em.width - 1);
            const int py = std::clamp(static_cast<int>(std::lround(rs[i].y)), 0, em.height - 1);
            const int fine = static_cast<int>(theta * 256.0 / std::numbers::pi);
            if (seen.insert({px, py, fine}).second)
                em.points.push_back({{static_cast<double>(px), static_cast<double>(py)}, theta});
        }
    }
    return em;
}

EdgeMap edge_map_from_sketch(const Sketch& k) {
    return edge_map_from_strokes(k.strokes, k.canvas_width, k.canvas_height);
}

OrientedDistanceField build_odf(const EdgeMap& em, int n_channels, double oob_penalty) {
    return build_odf(em.points, em.width, em.height, n_channels, oob_penalty);
}

} // namespace dsm
