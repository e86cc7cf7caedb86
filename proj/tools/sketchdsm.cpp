// Command-line front end. Everything goes through the shared library's C
// API (dsm/dsm_c.h); exit codes mirror dsm_status values.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dsm/dsm_c.h"

namespace fs = std::filesystem;

namespace {

struct ConfigDeleter {
    void operator()(dsm_config* p) const { dsm_config_free(p); }
};
struct SketchDeleter {
    void operator()(dsm_sketch* p) const { dsm_sketch_free(p); }
};
struct ListDeleter {
    void operator()(dsm_sketch_list* p) const { dsm_sketch_list_free(p); }
};
struct ModelDeleter {
    void operator()(dsm_model* p) const { dsm_model_free(p); }
};
struct EdgeMapDeleter {
    void operator()(dsm_edge_map* p) const { dsm_edge_map_free(p); }
};
struct GroupingDeleter {
    void operator()(dsm_grouping* p) const { dsm_grouping_free(p); }
};
struct TrainDeleter {
    void operator()(dsm_train_result* p) const { dsm_train_result_free(p); }
};
struct DetectionDeleter {
    void operator()(dsm_detection* p) const { dsm_detection_free(p); }
};

using ConfigPtr = std::unique_ptr<dsm_config, ConfigDeleter>;
using SketchPtr = std::unique_ptr<dsm_sketch, SketchDeleter>;
using ListPtr = std::unique_ptr<dsm_sketch_list, ListDeleter>;
using ModelPtr = std::unique_ptr<dsm_model, ModelDeleter>;
using EdgeMapPtr = std::unique_ptr<dsm_edge_map, EdgeMapDeleter>;
using GroupingPtr = std::unique_ptr<dsm_grouping, GroupingDeleter>;
using TrainPtr = std::unique_ptr<dsm_train_result, TrainDeleter>;
using DetectionPtr = std::unique_ptr<dsm_detection, DetectionDeleter>;

[[noreturn]] void fail(dsm_status status) {
    std::fprintf(stderr, "error: %s\n", dsm_last_error());
    std::exit(static_cast<int>(status));
}

void check(dsm_status status) {
    if (status != DSM_OK) fail(status);
}

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
    int threads = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "Configuration JSON file");
    cmd->add_option("--set", opts.overrides, "Override a config key, e.g. --set grouping.tau=1800");
    cmd->add_option("--threads", opts.threads, "Worker threads (0 = all cores)");
}

ConfigPtr make_config(const CommonOpts& opts) {
    dsm_config* cfg = nullptr;
    if (!opts.config_path.empty())
        check(dsm_config_load(opts.config_path.c_str(), &cfg));
    else
        check(dsm_config_create(&cfg));
    ConfigPtr ptr(cfg);
    for (const auto& kv : opts.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
            std::exit(2);
        }
        check(dsm_config_set(ptr.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
    }
    if (opts.threads >= 0)
        check(dsm_config_set(ptr.get(), "threads", std::to_string(opts.threads).c_str()));
    return ptr;
}

// Inputs may be sketch JSON files or directories of them; directory
// contents are sorted by filename for reproducible ordering.
std::vector<std::string> gather_sketch_files(const std::vector<std::string>& inputs) {
    std::vector<std::string> files;
    for (const auto& in : inputs) {
        if (fs::is_directory(in)) {
            std::vector<std::string> dir_files;
            for (const auto& entry : fs::directory_iterator(in))
                if (entry.is_regular_file() && entry.path().extension() == ".json")
                    dir_files.push_back(entry.path().string());
            std::sort(dir_files.begin(), dir_files.end());
            files.insert(files.end(), dir_files.begin(), dir_files.end());
        } else {
            files.push_back(in);
        }
    }
    if (files.empty()) {
        std::fprintf(stderr, "error: no input sketch files\n");
        std::exit(3);
    }
    return files;
}

ListPtr load_sketch_list(const std::vector<std::string>& inputs) {
    dsm_sketch_list* list = nullptr;
    check(dsm_sketch_list_create(&list));
    ListPtr ptr(list);
    for (const auto& file : gather_sketch_files(inputs)) {
        dsm_sketch* sk = nullptr;
        check(dsm_sketch_load(file.c_str(), &sk));
        SketchPtr sp(sk);
        check(dsm_sketch_list_append(ptr.get(), sp.get()));
    }
    return ptr;
}

bool parse_bbox(const std::string& text, double out[4]) {
    return std::sscanf(text.c_str(), "%lf,%lf,%lf,%lf", &out[0], &out[1], &out[2], &out[3]) == 4;
}

double config_num(const dsm_config* cfg, const char* key) {
    char buf[64] = {0};
    check(dsm_config_get(cfg, key, buf, sizeof(buf)));
    return std::atof(buf);
}

// Edge input dispatch: .json files carry explicit orientations; rasters go
// through Sobel extraction (edge_image: intensity mask + Sobel orientation).
EdgeMapPtr load_edges(const std::string& path, bool edge_image, double threshold) {
    dsm_edge_map* em = nullptr;
    if (fs::path(path).extension() == ".json")
        check(dsm_edge_map_load_json(path.c_str(), &em));
    else if (edge_image)
        check(dsm_edge_map_from_edge_image(path.c_str(), threshold, &em));
    else
        check(dsm_edge_map_from_image(path.c_str(), threshold, &em));
    return EdgeMapPtr(em);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deformable stroke models: stroke analysis, grouping, training and synthesis"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Stroke statistics reports for sketches");
    CommonOpts analyze_opts;
    std::vector<std::string> analyze_inputs;
    std::string analyze_out, analyze_svg;
    double bin_width = -1, short_max = -1, long_min = -1;
    analyze->add_option("--input", analyze_inputs, "Sketch JSON files or directories")->required();
    analyze->add_option("--out", analyze_out, "Report JSON path")->required();
    analyze->add_option("--svg", analyze_svg, "Directory for SVG figures");
    analyze->add_option("--bin-width", bin_width, "Histogram bin width in pixels");
    analyze->add_option("--short-max", short_max, "Short/medium threshold in pixels");
    analyze->add_option("--long-min", long_min, "Medium/long threshold in pixels");
    add_common(analyze, analyze_opts);

    // group
    auto* group = app.add_subcommand("group", "Perceptual grouping of one sketch");
    CommonOpts group_opts;
    std::string group_input, group_out, group_svg;
    group->add_option("--input", group_input, "Sketch JSON file")->required();
    group->add_option("--out", group_out, "Group assignment JSON path")->required();
    group->add_option("--svg", group_svg, "Color-coded SVG path");
    add_common(group, group_opts);

    // train
    auto* train = app.add_subcommand("train", "Learn a deformable stroke model");
    CommonOpts train_opts;
    std::vector<std::string> train_inputs;
    std::string train_out, train_records, train_snapshots, train_montage;
    train->add_option("--input", train_inputs, "Sketch JSON files or directories")->required();
    train->add_option("--out", train_out, "Model JSON path")->required();
    train->add_option("--records", train_records, "Per-iteration record JSON path");
    train->add_option("--snapshots", train_snapshots, "Directory for per-iteration grouping SVGs");
    train->add_option("--montage", train_montage, "Cluster montage SVG path");
    add_common(train, train_opts);

    // fit
    auto* fit = app.add_subcommand("fit", "Fit a model to an edge map");
    CommonOpts fit_opts;
    std::string fit_model, fit_input, fit_out, fit_svg, fit_bbox;
    bool fit_edge_image = false;
    fit->add_option("--model", fit_model, "Model JSON file")->required();
    fit->add_option("--input", fit_input, "Edge map (JSON, PGM or PNG)")->required();
    fit->add_option("--out", fit_out, "Configuration JSON path")->required();
    fit->add_option("--svg", fit_svg, "Overlay SVG path");
    fit->add_option("--bbox", fit_bbox, "Object bounding box X,Y,W,H");
    fit->add_flag("--edge-image", fit_edge_image,
                  "Treat a raster input as a precomputed edge map instead of extracting edges");
    add_common(fit, fit_opts);

    // synth
    auto* synth = app.add_subcommand("synth", "Synthesize a sketch for an image");
    CommonOpts synth_opts;
    std::string synth_model, synth_image, synth_out, synth_json, synth_bbox;
    bool synth_edge_image = false;
    synth->add_option("--model", synth_model, "Model JSON file")->required();
    synth->add_option("--image", synth_image, "Grayscale image (PGM/PNG) or edge map JSON")->required();
    synth->add_option("--out", synth_out, "Output sketch SVG path")->required();
    synth->add_option("--json", synth_json, "Also write the sketch as JSON");
    synth->add_option("--bbox", synth_bbox, "Object bounding box X,Y,W,H (default: whole image)");
    synth->add_flag("--edge-map", synth_edge_image,
                    "Treat a raster input as a precomputed edge map instead of extracting edges");
    add_common(synth, synth_opts);

    // render
    auto* render = app.add_subcommand("render", "Render a sketch JSON to SVG");
    CommonOpts render_opts;
    std::string render_input, render_out;
    double render_width = -1.0;
    render->add_option("--input", render_input, "Sketch JSON file")->required();
    render->add_option("--out", render_out, "SVG path")->required();
    render->add_option("--width", render_width, "Stroke width in pixels");
    add_common(render, render_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (analyze->parsed()) {
        auto cfg = make_config(analyze_opts);
        if (bin_width > 0)
            check(dsm_config_set(cfg.get(), "analysis.hist_bin_width", std::to_string(bin_width).c_str()));
        if (short_max > 0)
            check(dsm_config_set(cfg.get(), "analysis.short_max", std::to_string(short_max).c_str()));
        if (long_min > 0)
            check(dsm_config_set(cfg.get(), "analysis.long_min", std::to_string(long_min).c_str()));
        auto list = load_sketch_list(analyze_inputs);
        check(dsm_analyze(list.get(), cfg.get(), analyze_out.c_str(),
                          analyze_svg.empty() ? nullptr : analyze_svg.c_str()));
        std::printf("analyzed %zu sketches -> %s\n", dsm_sketch_list_size(list.get()),
                    analyze_out.c_str());
    } else if (group->parsed()) {
        auto cfg = make_config(group_opts);
        dsm_sketch* sk = nullptr;
        check(dsm_sketch_load(group_input.c_str(), &sk));
        SketchPtr sp(sk);
        dsm_grouping* g = nullptr;
        check(dsm_group(sp.get(), cfg.get(), &g));
        GroupingPtr gp(g);
        check(dsm_grouping_save_json(gp.get(), group_out.c_str()));
        if (!group_svg.empty())
            check(dsm_grouping_save_svg(gp.get(), group_svg.c_str(),
                                        config_num(cfg.get(), "render.stroke_width")));
        std::printf("%zu strokes -> %zu semantic groups\n", dsm_sketch_stroke_count(sp.get()),
                    dsm_grouping_count(gp.get()));
    } else if (train->parsed()) {
        auto cfg = make_config(train_opts);
        auto list = load_sketch_list(train_inputs);
        dsm_train_result* tr = nullptr;
        check(dsm_train(list.get(), cfg.get(), &tr));
        TrainPtr tp(tr);
        dsm_model* model = nullptr;
        check(dsm_train_result_model(tp.get(), &model));
        ModelPtr mp(model);
        check(dsm_model_save(mp.get(), train_out.c_str()));
        if (!train_records.empty())
            check(dsm_train_result_save_records(tp.get(), train_records.c_str()));
        const double tw = config_num(cfg.get(), "render.stroke_width");
        if (!train_snapshots.empty())
            check(dsm_train_result_save_snapshots(tp.get(), train_snapshots.c_str(), tw));
        if (!train_montage.empty())
            check(dsm_model_save_montage_svg(mp.get(), train_montage.c_str(), tw));
        std::printf("trained model with %zu clusters -> %s\n",
                    dsm_model_cluster_count(mp.get()), train_out.c_str());
    } else if (fit->parsed() || synth->parsed()) {
        const bool is_fit = fit->parsed();
        auto cfg = make_config(is_fit ? fit_opts : synth_opts);
        dsm_model* model = nullptr;
        check(dsm_model_load((is_fit ? fit_model : synth_model).c_str(), &model));
        ModelPtr mp(model);
        auto edges = load_edges(is_fit ? fit_input : synth_image,
                                is_fit ? fit_edge_image : synth_edge_image,
                                config_num(cfg.get(), "edges.threshold"));
        const std::string& bbox_text = is_fit ? fit_bbox : synth_bbox;
        double bbox[4] = {0, 0, 0, 0};
        bool has_bbox = false;
        if (!bbox_text.empty()) {
            if (!parse_bbox(bbox_text, bbox)) {
                std::fprintf(stderr, "error: --bbox expects X,Y,W,H\n");
                return 2;
            }
            has_bbox = true;
        }
        dsm_detection* det = nullptr;
        check(dsm_synthesize(mp.get(), edges.get(), has_bbox ? bbox : nullptr, cfg.get(), &det));
        DetectionPtr dp(det);
        const double sw = config_num(cfg.get(), "render.stroke_width");
        if (is_fit) {
            check(dsm_detection_save_json(dp.get(), fit_out.c_str()));
            if (!fit_svg.empty())
                check(dsm_detection_save_overlay_svg(dp.get(), edges.get(), fit_svg.c_str(), sw));
        } else {
            dsm_sketch* sk = nullptr;
            check(dsm_detection_to_sketch(dp.get(), &sk));
            SketchPtr sp(sk);
            check(dsm_sketch_save_svg(sp.get(), synth_out.c_str(), sw));
            if (!synth_json.empty()) check(dsm_sketch_save(sp.get(), synth_json.c_str()));
        }
        std::printf("detection energy %.6f\n", dsm_detection_energy(dp.get()));
    } else if (render->parsed()) {
        auto cfg = make_config(render_opts);
        dsm_sketch* sk = nullptr;
        check(dsm_sketch_load(render_input.c_str(), &sk));
        SketchPtr sp(sk);
        check(dsm_sketch_save_svg(sp.get(), render_out.c_str(),
                                  render_width > 0 ? render_width
                                                   : config_num(cfg.get(), "render.stroke_width")));
    }
    return 0;
}
