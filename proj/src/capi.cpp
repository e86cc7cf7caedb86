#include "dsm/dsm_c.h"

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "dsm/analytics.hpp"
#include "dsm/config.hpp"
#include "dsm/edge_map.hpp"
#include "dsm/errors.hpp"
#include "dsm/grouping.hpp"
#include "dsm/sketch_io.hpp"
#include "dsm/svg.hpp"
#include "dsm/synthesis.hpp"
#include "dsm/training.hpp"

using nlohmann::json;

struct dsm_config {
    dsm::SynthConfig cfg;
};
struct dsm_sketch {
    dsm::Sketch sk;
};
struct dsm_sketch_list {
    std::vector<dsm::Sketch> sketches;
};
struct dsm_model {
    dsm::DeformableStrokeModel model;
};
struct dsm_edge_map {
    dsm::EdgeMap em;
};
struct dsm_grouping {
    dsm::Sketch sketch;
    std::vector<dsm::SemanticGroup> groups;
};
struct dsm_train_result {
    dsm::TrainResult result;
    std::vector<dsm::Sketch> sketches;
};
struct dsm_detection {
    dsm::SynthesisResult result;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
dsm_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return DSM_OK;
    } catch (const dsm::InvalidArgument& e) {
        set_error(e.what());
        return DSM_INVALID_ARGUMENT;
    } catch (const dsm::IoError& e) {
        set_error(e.what());
        return DSM_IO_ERROR;
    } catch (const dsm::DetectionInfeasible& e) {
        set_error(e.what());
        return DSM_DETECTION_INFEASIBLE;
    } catch (const dsm::InvalidModel& e) {
        set_error(e.what());
        return DSM_INVALID_MODEL;
    } catch (const std::exception& e) {
        set_error(e.what());
        return DSM_ERROR;
    } catch (...) {
        set_error("unknown failure");
        return DSM_ERROR;
    }
}

dsm_status require(bool ok, const char* what) {
    if (ok) return DSM_OK;
    set_error(std::string("null argument: ") + what);
    return DSM_INVALID_ARGUMENT;
}

} // namespace

extern "C" {

const char* dsm_version(void) { return "0.1.0"; }

const char* dsm_last_error(void) { return g_last_error.c_str(); }

/* ---- configuration ---- */

dsm_status dsm_config_create(dsm_config** out) {
    if (auto s = require(out, "out")) return s;
    return guarded([&] { *out = new dsm_config{dsm::default_config()}; });
}

dsm_status dsm_config_load(const char* path, dsm_config** out) {
    if (auto s = require(path && out, "path/out")) return s;
    return guarded([&] { *out = new dsm_config{dsm::load_config(path)}; });
}

dsm_status dsm_config_save(const dsm_config* cfg, const char* path) {
    if (auto s = require(cfg && path, "cfg/path")) return s;
    return guarded([&] { dsm::save_config(cfg->cfg, path); });
}

dsm_status dsm_config_set(dsm_config* cfg, const char* key, const char* value) {
    if (auto s = require(cfg && key && value, "cfg/key/value")) return s;
    return guarded([&] { dsm::apply_override(cfg->cfg, key, value); });
}

dsm_status dsm_config_get(const dsm_config* cfg, const char* key, char* buf, size_t buf_len) {
    if (auto s = require(cfg && key && buf && buf_len > 0, "cfg/key/buf")) return s;
    return guarded([&] {
        json j = json::parse(dsm::config_to_json(cfg->cfg));
        std::string pointer = std::string("/") + key;
        for (auto& ch : pointer)
            if (ch == '.') ch = '/';
        const json::json_pointer jp(pointer);
        if (!j.contains(jp)) throw dsm::InvalidArgument(std::string("unknown config key: ") + key);
        const json& v = j.at(jp);
        const std::string text = v.is_string() ? v.get<std::string>() : v.dump();
        if (text.size() + 1 > buf_len)
            throw dsm::InvalidArgument("config value does not fit the buffer");
        std::copy(text.begin(), text.end(), buf);
        buf[text.size()] = '\0';
    });
}

void dsm_config_free(dsm_config* cfg) { delete cfg; }

/* ---- sketches ---- */

dsm_status dsm_sketch_load(const char* path, dsm_sketch** out) {
    if (auto s = require(path && out, "path/out")) return s;
    return guarded([&] { *out = new dsm_sketch{dsm::load_sketch(path)}; });
}

dsm_status dsm_sketch_save(const dsm_sketch* sk, const char* path) {
    if (auto s = require(sk && path, "sketch/path")) return s;
    return guarded([&] { dsm::save_sketch(sk->sk, path); });
}

dsm_status dsm_sketch_save_svg(const dsm_sketch* sk, const char* path, double stroke_width) {
    if (auto s = require(sk && path, "sketch/path")) return s;
    return guarded([&] { dsm::write_text_file(path, dsm::sketch_to_svg(sk->sk, stroke_width)); });
}

size_t dsm_sketch_stroke_count(const dsm_sketch* sk) { return sk ? sk->sk.strokes.size() : 0; }

dsm_status dsm_sketch_flip_horizontal(const dsm_sketch* sk, dsm_sketch** out) {
    if (auto s = require(sk && out, "sketch/out")) return s;
    return guarded([&] { *out = new dsm_sketch{dsm::flip_horizontal(sk->sk)}; });
}

void dsm_sketch_free(dsm_sketch* sk) { delete sk; }

dsm_status dsm_sketch_list_create(dsm_sketch_list** out) {
    if (auto s = require(out, "out")) return s;
    return guarded([&] { *out = new dsm_sketch_list{}; });
}

dsm_status dsm_sketch_list_append(dsm_sketch_list* list, const dsm_sketch* sk) {
    if (auto s = require(list && sk, "list/sketch")) return s;
    return guarded([&] { list->sketches.push_back(sk->sk); });
}

size_t dsm_sketch_list_size(const dsm_sketch_list* list) {
    return list ? list->sketches.size() : 0;
}

void dsm_sketch_list_free(dsm_sketch_list* list) { delete list; }

/* ---- analysis ---- */

dsm_status dsm_analyze(const dsm_sketch_list* sketches, const dsm_config* cfg,
                       const char* json_out_path, const char* svg_dir) {
    if (auto s = require(sketches && cfg && json_out_path, "sketches/cfg/json_out")) return s;
    return guarded([&] {
        const auto& c = cfg->cfg;
        dsm::write_text_file(json_out_path,
                             dsm::analysis_report_json(sketches->sketches, c.hist_bin_width,
                                                       c.short_max, c.long_min));
        if (svg_dir) {
            const std::filesystem::path dir(svg_dir);
            std::filesystem::create_directories(dir);
            dsm::write_text_file((dir / "histogram.svg").string(),
                                 dsm::histogram_svg(dsm::length_histogram(sketches->sketches,
                                                                          c.hist_bin_width)));
            dsm::write_text_file((dir / "temporal.svg").string(),
                                 dsm::temporal_matrix_svg(dsm::temporal_matrix(sketches->sketches)));
            for (size_t i = 0; i < sketches->sketches.size(); ++i)
                dsm::write_text_file((dir / ("order_" + std::to_string(i) + ".svg")).string(),
                                     dsm::order_colormap_svg(sketches->sketches[i], c.stroke_width));
        }
    });
}

/* ---- grouping ---- */

dsm_status dsm_group(const dsm_sketch* sk, const dsm_config* cfg, dsm_grouping** out) {
    if (auto s = require(sk && cfg && out, "sketch/cfg/out")) return s;
    return guarded([&] {
        auto groups = dsm::group_sketch(sk->sk, cfg->cfg.grouping);
        *out = new dsm_grouping{sk->sk, std::move(groups)};
    });
}

size_t dsm_grouping_count(const dsm_grouping* g) { return g ? g->groups.size() : 0; }

dsm_status dsm_grouping_save_json(const dsm_grouping* g, const char* path) {
    if (auto s = require(g && path, "grouping/path")) return s;
    return guarded([&] {
        json j = json::object();
        for (const auto& grp : g->groups)
            for (int id : grp.members) j[std::to_string(id)] = grp.group_id;
        dsm::write_text_file(path, j.dump(2) + "\n");
    });
}

dsm_status dsm_grouping_save_svg(const dsm_grouping* g, const char* path, double stroke_width) {
    if (auto s = require(g && path, "grouping/path")) return s;
    return guarded([&] {
        const auto assign =
            dsm::group_assignment(g->groups, static_cast<int>(g->sketch.strokes.size()));
        dsm::write_text_file(path, dsm::groups_to_svg(g->sketch, assign, stroke_width));
    });
}

void dsm_grouping_free(dsm_grouping* g) { delete g; }

/* ---- training ---- */

dsm_status dsm_train(const dsm_sketch_list* sketches, const dsm_config* cfg,
                     dsm_train_result** out) {
    if (auto s = require(sketches && cfg && out, "sketches/cfg/out")) return s;
    return guarded([&] {
        auto result = dsm::train_iterative(sketches->sketches, cfg->cfg, cfg->cfg.max_iters);
        *out = new dsm_train_result{std::move(result), sketches->sketches};
    });
}

dsm_status dsm_train_result_model(const dsm_train_result* t, dsm_model** out) {
    if (auto s = require(t && out, "train_result/out")) return s;
    return guarded([&] { *out = new dsm_model{t->result.model}; });
}

dsm_status dsm_train_result_save_records(const dsm_train_result* t, const char* path) {
    if (auto s = require(t && path, "train_result/path")) return s;
    return guarded([&] { dsm::write_text_file(path, dsm::train_records_json(t->result)); });
}

dsm_status dsm_train_result_save_snapshots(const dsm_train_result* t, const char* dir,
                                           double stroke_width) {
    if (auto s = require(t && dir, "train_result/dir")) return s;
    return guarded([&] {
        const std::filesystem::path base(dir);
        std::filesystem::create_directories(base);
        for (const auto& rec : t->result.records) {
            for (size_t i = 0; i < rec.groups.size(); ++i) {
                // grouping snapshots are drawn over the original sketches
                const auto& sk = t->sketches[i];
                std::vector<int> assign(sk.strokes.size(), -1);
                for (const auto& g : rec.groups[i])
                    for (int id : g.members)
                        if (id >= 0 && id < static_cast<int>(assign.size()))
                            assign[static_cast<size_t>(id)] = g.group_id;
                const auto name =
                    "iter" + std::to_string(rec.iteration) + "_sketch" + std::to_string(i) + ".svg";
                dsm::write_text_file((base / name).string(),
                                     dsm::groups_to_svg(sk, assign, stroke_width));
            }
        }
    });
}

void dsm_train_result_free(dsm_train_result* t) { delete t; }

/* ---- models ---- */

dsm_status dsm_model_load(const char* path, dsm_model** out) {
    if (auto s = require(path && out, "path/out")) return s;
    return guarded([&] { *out = new dsm_model{dsm::load_model(path)}; });
}

dsm_status dsm_model_save(const dsm_model* m, const char* path) {
    if (auto s = require(m && path, "model/path")) return s;
    return guarded([&] { dsm::save_model(m->model, path); });
}

size_t dsm_model_cluster_count(const dsm_model* m) { return m ? m->model.clusters.size() : 0; }

dsm_status dsm_model_save_montage_svg(const dsm_model* m, const char* path, double stroke_width) {
    if (auto s = require(m && path, "model/path")) return s;
    return guarded([&] { dsm::write_text_file(path, dsm::model_montage_svg(m->model, stroke_width)); });
}

void dsm_model_free(dsm_model* m) { delete m; }

/* ---- edge maps ---- */

dsm_status dsm_edge_map_from_image(const char* path, double threshold, dsm_edge_map** out) {
    if (auto s = require(path && out, "path/out")) return s;
    return guarded([&] {
        const auto img = dsm::load_gray_image(path);
        const double t = threshold >= 0.0 ? threshold : dsm::default_config().edge_threshold;
        *out = new dsm_edge_map{dsm::extract_edges(img, t)};
    });
}

dsm_status dsm_edge_map_from_edge_image(const char* path, double threshold, dsm_edge_map** out) {
    if (auto s = require(path && out, "path/out")) return s;
    return guarded([&] {
        const double t = threshold >= 0.0 ? threshold : 127.0;
        *out = new dsm_edge_map{dsm::load_edge_map_image(path, t)};
    });
}

dsm_status dsm_edge_map_load_json(const char* path, dsm_edge_map** out) {
    if (auto s = require(path && out, "path/out")) return s;
    return guarded([&] { *out = new dsm_edge_map{dsm::load_edge_map_json(path)}; });
}

dsm_status dsm_edge_map_from_sketch(const dsm_sketch* sk, dsm_edge_map** out) {
    if (auto s = require(sk && out, "sketch/out")) return s;
    return guarded([&] { *out = new dsm_edge_map{dsm::edge_map_from_sketch(sk->sk)}; });
}

size_t dsm_edge_map_point_count(const dsm_edge_map* em) { return em ? em->em.points.size() : 0; }

void dsm_edge_map_free(dsm_edge_map* em) { delete em; }

/* ---- detection / synthesis ---- */

dsm_status dsm_synthesize(const dsm_model* m, const dsm_edge_map* em, const double* bbox,
                          const dsm_config* cfg, dsm_detection** out) {
    if (auto s = require(m && em && cfg && out, "model/edges/cfg/out")) return s;
    return guarded([&] {
        std::optional<dsm::BBox> box;
        if (bbox) box = dsm::BBox{bbox[0], bbox[1], bbox[2], bbox[3]};
        *out = new dsm_detection{dsm::synthesize(m->model, em->em, box, cfg->cfg)};
    });
}

double dsm_detection_energy(const dsm_detection* d) {
    return d ? d->result.configuration.energy : 0.0;
}

dsm_status dsm_detection_save_json(const dsm_detection* d, const char* path) {
    if (auto s = require(d && path, "detection/path")) return s;
    return guarded([&] { dsm::write_text_file(path, dsm::synthesis_to_json(d->result)); });
}

dsm_status dsm_detection_to_sketch(const dsm_detection* d, dsm_sketch** out) {
    if (auto s = require(d && out, "detection/out")) return s;
    return guarded([&] { *out = new dsm_sketch{d->result.sketch}; });
}

dsm_status dsm_detection_save_overlay_svg(const dsm_detection* d, const dsm_edge_map* em,
                                          const char* path, double stroke_width) {
    if (auto s = require(d && em && path, "detection/edges/path")) return s;
    return guarded([&] {
        dsm::write_text_file(path, dsm::overlay_svg(em->em, d->result.sketch, stroke_width));
    });
}

void dsm_detection_free(dsm_detection* d) { delete d; }

} // extern "C"
