#include "dsm/sketch_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dsm/errors.hpp"

namespace dsm {

using nlohmann::json;

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

namespace {

json parse_json(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw InvalidArgument("malformed JSON in " + what);
    return j;
}

Point2 point_from_json(const json& j) {
    if (!j.is_array() || j.size() < 2) throw InvalidArgument("point must be [x,y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json point_to_json(Point2 p) { return json::array({p.x, p.y}); }

std::vector<Point2> polyline_from_json(const json& j) {
    std::vector<Point2> pts;
    pts.reserve(j.size());
    for (const auto& pj : j) pts.push_back(point_from_json(pj));
    return pts;
}

json polyline_to_json(const std::vector<Point2>& pts) {
    json arr = json::array();
    for (const auto& p : pts) arr.push_back(point_to_json(p));
    return arr;
}

} // namespace

Sketch parse_sketch(const std::string& text) {
    json j = parse_json(text, "sketch");
    Sketch k;
    if (!j.contains("canvas")) throw InvalidArgument("sketch is missing canvas");
    k.canvas_width = j["canvas"].value("width", 0.0);
    k.canvas_height = j["canvas"].value("height", 0.0);
    if (j.contains("strokes")) {
        int id = 0;
        for (const auto& sj : j["strokes"]) {
            Stroke s;
            s.id = id++;
            if (!sj.contains("order")) throw InvalidArgument("stroke is missing order");
            s.order = sj["order"].get<int>();
            s.points = polyline_from_json(sj.value("points", json::array()));
            k.strokes.push_back(std::move(s));
        }
    }
    clamp_to_canvas(k);
    validate_sketch(k);
    return k;
}

Sketch load_sketch(const std::string& path) { return parse_sketch(read_text_file(path)); }

std::string sketch_to_json(const Sketch& k) {
    json j;
    j["canvas"] = {{"width", k.canvas_width}, {"height", k.canvas_height}};
    json strokes = json::array();
    for (const auto& s : k.strokes)
        strokes.push_back({{"order", s.order}, {"points", polyline_to_json(s.points)}});
    j["strokes"] = strokes;
    return j.dump(2) + "\n";
}

void save_sketch(const Sketch& k, const std::string& path) {
    write_text_file(path, sketch_to_json(k));
}

DeformableStrokeModel parse_model(const std::string& text) {
    json j = parse_json(text, "model");
    DeformableStrokeModel m;
    if (!j.contains("canvas") || !j.contains("clusters"))
        throw InvalidModel("model is missing canvas or clusters");
    m.canvas_width = j["canvas"].value("width", 0.0);
    m.canvas_height = j["canvas"].value("height", 0.0);
    m.root = j.value("root", 0);
    for (const auto& cj : j["clusters"]) {
        ClusterEntry c;
        for (const auto& ej : cj.value("exemplars", json::array())) {
            ExemplarStroke e;
            for (const auto& pj : ej.value("polylines", json::array()))
                e.polylines.push_back(polyline_from_json(pj));
            e.anchor = point_from_json(ej.value("anchor", json::array({0.0, 0.0})));
            c.exemplars.push_back(std::move(e));
        }
        if (cj.contains("bbox")) {
            c.bbox_center = point_from_json(cj["bbox"].value("center", json::array({0.0, 0.0})));
            auto size = cj["bbox"].value("size", json::array({0.0, 0.0}));
            c.bbox_width = size[0].get<double>();
            c.bbox_height = size[1].get<double>();
        }
        c.total_member_length = cj.value("total_member_length", 0.0);
        m.clusters.push_back(std::move(c));
    }
    for (const auto& ej : j.value("edges", json::array()))
        m.edges.emplace_back(ej[0].get<int>(), ej[1].get<int>());
    for (const auto& oj : j.value("offsets", json::array())) {
        Gaussian2 g;
        g.mean = point_from_json(oj.value("mean", json::array({0.0, 0.0})));
        auto cov = oj.value("cov", json::array({json::array({1.0, 0.0}), json::array({0.0, 1.0})}));
        g.cov_xx = cov[0][0].get<double>();
        g.cov_xy = cov[0][1].get<double>();
        g.cov_yy = cov[1][1].get<double>();
        m.offsets.push_back(g);
    }
    validate_model(m);
    return m;
}

DeformableStrokeModel load_model(const std::string& path) {
    return parse_model(read_text_file(path));
}

std::string model_to_json(const DeformableStrokeModel& m) {
    json j;
    j["canvas"] = {{"width", m.canvas_width}, {"height", m.canvas_height}};
    j["root"] = m.root;
    json clusters = json::array();
    for (const auto& c : m.clusters) {
        json cj;
        json exemplars = json::array();
        for (const auto& e : c.exemplars) {
            json pj = json::array();
            for (const auto& pl : e.polylines) pj.push_back(polyline_to_json(pl));
            exemplars.push_back({{"polylines", pj}, {"anchor", point_to_json(e.anchor)}});
        }
        cj["exemplars"] = exemplars;
        cj["bbox"] = {{"center", point_to_json(c.bbox_center)},
                      {"size", json::array({c.bbox_width, c.bbox_height})}};
        cj["total_member_length"] = c.total_member_length;
        clusters.push_back(std::move(cj));
    }
    j["clusters"] = clusters;
    json edges = json::array();
    for (const auto& [a, b] : m.edges) edges.push_back(json::array({a, b}));
    j["edges"] = edges;
    json offsets = json::array();
    for (const auto& g : m.offsets)
        offsets.push_back({{"mean", point_to_json(g.mean)},
                           {"cov", json::array({json::array({g.cov_xx, g.cov_xy}),
                                                json::array({g.cov_xy, g.cov_yy})})}});
    j["offsets"] = offsets;
    return j.dump(2) + "\n";
}

void save_model(const DeformableStrokeModel& m, const std::string& path) {
    write_text_file(path, model_to_json(m));
}

} // namespace dsm
