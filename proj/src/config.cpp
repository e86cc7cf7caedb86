#include "dsm/config.hpp"

#include <json.hpp>

#include "dsm/errors.hpp"
#include "dsm/sketch_io.hpp"
#include "parallel.hpp"

namespace dsm {

using nlohmann::json;

SynthConfig default_config() { return SynthConfig{}; }

namespace {

json config_json(const SynthConfig& c) {
    json j;
    j["grouping"] = {{"w_pro", c.grouping.w_pro},
                     {"w_con", c.grouping.w_con},
                     {"w_len", c.grouping.w_len},
                     {"w_sim", c.grouping.w_sim},
                     {"mu_temp", c.grouping.mu_temp},
                     {"mu_mod", c.grouping.mu_mod},
                     {"sigma", c.grouping.sigma},
                     {"tau", c.grouping.tau},
                     {"eta_sem", c.grouping.eta_sem},
                     {"h", c.grouping.h},
                     {"eta_avg", c.grouping.eta_avg},
                     {"endpoint_inset", c.grouping.endpoint_inset},
                     {"sample_spacing", c.grouping.sample_spacing},
                     {"sc_samples", c.grouping.sc_samples},
                     {"sc_radial_bins", c.grouping.sc_radial_bins},
                     {"sc_angle_bins", c.grouping.sc_angle_bins}};
    j["learning"] = {{"exemplar_fraction", c.learning.exemplar_fraction},
                     {"n_rotations", c.learning.n_rotations},
                     {"max_rotation_deg", c.learning.max_rotation_deg},
                     {"ridge", c.learning.ridge},
                     {"normalize_facing", c.learning.normalize_facing},
                     {"mirror_augment", c.learning.mirror_augment},
                     {"local_scale_k", c.learning.local_scale_k},
                     {"resample_spacing", c.learning.resample_spacing},
                     {"sc_samples", c.learning.sc_samples},
                     {"sc_radial_bins", c.learning.sc_radial_bins},
                     {"sc_angle_bins", c.learning.sc_angle_bins},
                     {"kmeans_max_iters", c.learning.kmeans_max_iters}};
    j["inference"] = {{"sampling_threshold", c.inference.sampling_threshold},
                      {"relaxed_threshold", c.inference.relaxed_threshold},
                      {"f", c.inference.f},
                      {"margin_factor", c.inference.margin_factor},
                      {"shift_radius", c.inference.shift_radius},
                      {"max_candidates", c.inference.max_candidates},
                      {"candidate_stride", c.inference.candidate_stride},
                      {"template_spacing", c.inference.template_spacing},
                      {"n_channels", c.inference.n_channels},
                      {"refine", c.inference.refine},
                      {"refine_per_sample", c.inference.refine_per_sample},
                      {"label_overlap_radius", c.inference.label_overlap_radius},
                      {"label_cut_fraction", c.inference.label_cut_fraction}};
    j["analysis"] = {{"hist_bin_width", c.hist_bin_width},
                     {"short_max", c.short_max},
                     {"long_min", c.long_min}};
    j["pipeline"] = {{"cut_max_len", c.cut_max_len}, {"max_iters", c.max_iters}};
    j["edges"] = {{"threshold", c.edge_threshold}};
    j["render"] = {{"stroke_width", c.stroke_width}};
    j["threads"] = c.threads;
    return j;
}

template <typename T>
void pick(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j[key].get<T>();
}

void config_from_json(const json& j, SynthConfig& c) {
    if (j.contains("grouping")) {
        const auto& g = j["grouping"];
        pick(g, "w_pro", c.grouping.w_pro);
        pick(g, "w_con", c.grouping.w_con);
        pick(g, "w_len", c.grouping.w_len);
        pick(g, "w_sim", c.grouping.w_sim);
        pick(g, "mu_temp", c.grouping.mu_temp);
        pick(g, "mu_mod", c.grouping.mu_mod);
        pick(g, "sigma", c.grouping.sigma);
        pick(g, "tau", c.grouping.tau);
        pick(g, "eta_sem", c.grouping.eta_sem);
        pick(g, "h", c.grouping.h);
        pick(g, "eta_avg", c.grouping.eta_avg);
        pick(g, "endpoint_inset", c.grouping.endpoint_inset);
        pick(g, "sample_spacing", c.grouping.sample_spacing);
        pick(g, "sc_samples", c.grouping.sc_samples);
        pick(g, "sc_radial_bins", c.grouping.sc_radial_bins);
        pick(g, "sc_angle_bins", c.grouping.sc_angle_bins);
    }
    if (j.contains("learning")) {
        const auto& l = j["learning"];
        pick(l, "exemplar_fraction", c.learning.exemplar_fraction);
        pick(l, "n_rotations", c.learning.n_rotations);
        pick(l, "max_rotation_deg", c.learning.max_rotation_deg);
        pick(l, "ridge", c.learning.ridge);
        pick(l, "normalize_facing", c.learning.normalize_facing);
        pick(l, "mirror_augment", c.learning.mirror_augment);
        pick(l, "local_scale_k", c.learning.local_scale_k);
        pick(l, "resample_spacing", c.learning.resample_spacing);
        pick(l, "sc_samples", c.learning.sc_samples);
        pick(l, "sc_radial_bins", c.learning.sc_radial_bins);
        pick(l, "sc_angle_bins", c.learning.sc_angle_bins);
        pick(l, "kmeans_max_iters", c.learning.kmeans_max_iters);
    }
    if (j.contains("inference")) {
        const auto& i = j["inference"];
        pick(i, "sampling_threshold", c.inference.sampling_threshold);
        pick(i, "relaxed_threshold", c.inference.relaxed_threshold);
        pick(i, "f", c.inference.f);
        pick(i, "margin_factor", c.inference.margin_factor);
        pick(i, "shift_radius", c.inference.shift_radius);
        pick(i, "max_candidates", c.inference.max_candidates);
        pick(i, "candidate_stride", c.inference.candidate_stride);
        pick(i, "template_spacing", c.inference.template_spacing);
        pick(i, "n_channels", c.inference.n_channels);
        pick(i, "refine", c.inference.refine);
        pick(i, "refine_per_sample", c.inference.refine_per_sample);
        pick(i, "label_overlap_radius", c.inference.label_overlap_radius);
        pick(i, "label_cut_fraction", c.inference.label_cut_fraction);
    }
    if (j.contains("analysis")) {
        const auto& a = j["analysis"];
        pick(a, "hist_bin_width", c.hist_bin_width);
        pick(a, "short_max", c.short_max);
        pick(a, "long_min", c.long_min);
    }
    if (j.contains("pipeline")) {
        const auto& p = j["pipeline"];
        pick(p, "cut_max_len", c.cut_max_len);
        pick(p, "max_iters", c.max_iters);
    }
    if (j.contains("edges")) pick(j["edges"], "threshold", c.edge_threshold);
    if (j.contains("render")) pick(j["render"], "stroke_width", c.stroke_width);
    pick(j, "threads", c.threads);

    const int threads = resolve_threads(c.threads);
    c.grouping.threads = threads;
    c.learning.threads = threads;
    c.inference.threads = threads;
}

} // namespace

SynthConfig parse_config(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw InvalidArgument("malformed config JSON");
    SynthConfig c;
    config_from_json(j, c);
    return c;
}

SynthConfig load_config(const std::string& path) { return parse_config(read_text_file(path)); }

std::string config_to_json(const SynthConfig& cfg) { return config_json(cfg).dump(2) + "\n"; }

void save_config(const SynthConfig& cfg, const std::string& path) {
    write_text_file(path, config_to_json(cfg));
}

void apply_override(SynthConfig& cfg, const std::string& key, const std::string& value) {
    json j = config_json(cfg);
    std::string pointer = "/" + key;
    for (auto& ch : pointer)
        if (ch == '.') ch = '/';
    json parsed = json::parse(value, nullptr, false);
    if (parsed.is_discarded()) parsed = value;  // plain strings stay strings
    try {
        j[json::json_pointer(pointer)] = parsed;
    } catch (const json::exception&) {
        throw InvalidArgument("bad config key: " + key);
    }
    config_from_json(j, cfg);
}

} // namespace dsm
