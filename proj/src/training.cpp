#include "dsm/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "dsm/edge_map.hpp"
#include "dsm/errors.hpp"
#include "dsm/inference.hpp"
#include "dsm/learning.hpp"

namespace dsm {

using nlohmann::json;

double count_variance(const std::vector<int>& counts) {
    if (counts.empty()) throw InvalidArgument("count_variance on empty list");
    double mean = 0.0;
    for (int c : counts) mean += c;
    mean /= static_cast<double>(counts.size());
    double var = 0.0;
    for (int c : counts) var += (c - mean) * (c - mean);
    return var / static_cast<double>(counts.size());
}

namespace {

std::vector<Stroke> precut_strokes(const Sketch& k, double max_len) {
    std::vector<Stroke> out;
    for (const auto& s : k.strokes)
        for (auto& frag : cut_stroke(s, max_len)) out.push_back(std::move(frag));
    for (size_t i = 0; i < out.size(); ++i) out[i].id = static_cast<int>(i);
    return out;
}

} // namespace

TrainResult train_iterative(const std::vector<Sketch>& sketches, const SynthConfig& config,
                            int max_iters) {
    if (sketches.size() < 2) throw InvalidArgument("training needs >= 2 sketches");
    if (max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
    const size_t n = sketches.size();

    std::vector<std::vector<Stroke>> work(n);
    double eta_avg = 0.0;
    for (size_t i = 0; i < n; ++i) {
        work[i] = precut_strokes(sketches[i], config.cut_max_len);
        eta_avg += static_cast<double>(work[i].size());
    }
    eta_avg /= static_cast<double>(n);  // average raw stroke count seeds iteration 1

    TrainResult result;
    std::vector<std::unordered_map<int, int>> labels(n);
    std::vector<std::vector<std::vector<Stroke>>> stroke_snapshots;
    double best_var = std::numeric_limits<double>::infinity();
    int non_improving = 0;

    for (int iter = 1; iter <= max_iters; ++iter) {
        IterationRecord rec;
        rec.iteration = iter;
        rec.groups.resize(n);
        GroupingParams gp = config.grouping;
        gp.eta_avg = eta_avg;
        for (size_t i = 0; i < n; ++i) {
            Sketch view{sketches[i].canvas_width, sketches[i].canvas_height, work[i]};
            rec.groups[i] = group_sketch(view, gp, iter > 1 ? &labels[i] : nullptr);
            rec.counts.push_back(static_cast<int>(rec.groups[i].size()));
        }
        rec.variance = count_variance(rec.counts);

        std::vector<Sketch> views;
        views.reserve(n);
        for (size_t i = 0; i < n; ++i)
            views.push_back({sketches[i].canvas_width, sketches[i].canvas_height, work[i]});
        try {
            rec.model = learn_model(views, rec.groups, config.learning);
        } catch (const InvalidModel& e) {
            throw InvalidModel("iteration " + std::to_string(iter) + ": " + e.what());
        }
        stroke_snapshots.push_back(work);
        result.records.push_back(rec);

        if (rec.variance < best_var) {
            best_var = rec.variance;
            result.selected_iteration = iter;
            non_improving = 0;
        } else {
            ++non_improving;
        }
        if (non_improving >= 2 || iter == max_iters) break;

        // match the current model back onto the training sketches; the labels
        // (and any label-driven cuts) feed the next grouping round
        eta_avg = 0.0;
        for (int c : rec.counts) eta_avg += c;
        eta_avg /= static_cast<double>(n);
        for (size_t i = 0; i < n; ++i) {
            try {
                const EdgeMap em = edge_map_from_strokes(work[i], sketches[i].canvas_width,
                                                         sketches[i].canvas_height);
                const auto odf = build_odf(em, config.inference.n_channels);
                const Configuration det = detect(rec.model, odf, config.inference);
                LabelResult lr = label_strokes(rec.model, det, work[i], config.inference);
                work[i] = std::move(lr.strokes);
                labels[i].clear();
                for (size_t s = 0; s < work[i].size(); ++s)
                    labels[i][work[i][s].id] = lr.labels[s];
            } catch (const DetectionInfeasible& e) {
                throw DetectionInfeasible("sketch " + std::to_string(i) + ": " + e.what());
            }
        }
    }

    const size_t sel = static_cast<size_t>(result.selected_iteration - 1);
    // deterministic pipeline: relearning from the selected iteration's groups
    // reproduces that iteration's model
    result.model = result.records[sel].model;
    result.working_strokes = stroke_snapshots[sel];
    return result;
}

std::string train_records_json(const TrainResult& result) {
    json j;
    json iters = json::array();
    for (const auto& rec : result.records) {
        json gj = json::array();
        for (const auto& sketch_groups : rec.groups) {
            json sj = json::object();
            for (const auto& g : sketch_groups)
                for (int id : g.members) sj[std::to_string(id)] = g.group_id;
            gj.push_back(sj);
        }
        iters.push_back({{"iteration", rec.iteration},
                         {"counts", rec.counts},
                         {"variance", rec.variance},
                         {"groups", gj}});
    }
    j["iterations"] = iters;
    j["selected_iteration"] = result.selected_iteration;
    return j.dump(2) + "\n";
}

} // namespace dsm
