#include "dsm/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "dsm/errors.hpp"
#include "parallel.hpp"

namespace dsm {

namespace {

struct RootedTree {
    std::vector<int> parent;                 // -1 at the root
    std::vector<std::vector<int>> children;  // ascending child indices
    std::vector<int> bottom_up;              // children always precede parents
    std::vector<int> edge_of;                // node -> model edge index to its parent
    std::vector<bool> forward;               // stored edge is (parent, child)
};

RootedTree root_tree(const DeformableStrokeModel& m) {
    const int n = static_cast<int>(m.clusters.size());
    RootedTree t;
    t.parent.assign(static_cast<size_t>(n), -1);
    t.children.resize(static_cast<size_t>(n));
    t.edge_of.assign(static_cast<size_t>(n), -1);
    t.forward.assign(static_cast<size_t>(n), true);

    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<size_t>(n));  // (neighbor, edge idx)
    for (size_t e = 0; e < m.edges.size(); ++e) {
        adj[static_cast<size_t>(m.edges[e].first)].emplace_back(m.edges[e].second, static_cast<int>(e));
        adj[static_cast<size_t>(m.edges[e].second)].emplace_back(m.edges[e].first, static_cast<int>(e));
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());

    std::vector<int> order;
    std::vector<char> seen(static_cast<size_t>(n), 0);
    order.push_back(m.root);
    seen[static_cast<size_t>(m.root)] = 1;
    for (size_t head = 0; head < order.size(); ++head) {
        const int u = order[head];
        for (const auto& [v, e] : adj[static_cast<size_t>(u)]) {
            if (seen[static_cast<size_t>(v)]) continue;
            seen[static_cast<size_t>(v)] = 1;
            t.parent[static_cast<size_t>(v)] = u;
            t.children[static_cast<size_t>(u)].push_back(v);
            t.edge_of[static_cast<size_t>(v)] = e;
            t.forward[static_cast<size_t>(v)] = m.edges[static_cast<size_t>(e)].first == u;
            order.push_back(v);
        }
    }
    t.bottom_up.assign(order.rbegin(), order.rend());
    return t;
}

// -log p of the child location given the parent location on the stored edge
double deformation_cost(const DeformableStrokeModel& m, const RootedTree& t, int child,
                        Point2 parent_loc, Point2 child_loc) {
    const auto& g = m.offsets[static_cast<size_t>(t.edge_of[static_cast<size_t>(child)])];
    const Point2 d = t.forward[static_cast<size_t>(child)] ? parent_loc - child_loc
                                                           : child_loc - parent_loc;
    return g.neg_log_density(d);
}

double log_sum_exp(const std::vector<double>& v) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double x : v) mx = std::max(mx, x);
    if (!std::isfinite(mx)) return mx;
    double s = 0.0;
    for (double x : v) s += std::exp(x - mx);
    return mx + std::log(s);
}

void require_candidates(const DeformableStrokeModel& model, const CandidateSet& candidates) {
    if (candidates.per_cluster.size() != model.clusters.size())
        throw InvalidArgument("candidate set does not match the model's clusters");
    std::string empty;
    for (size_t c = 0; c < candidates.per_cluster.size(); ++c)
        if (candidates.per_cluster[c].empty()) empty += (empty.empty() ? "" : ",") + std::to_string(c);
    if (!empty.empty())
        throw DetectionInfeasible("no candidates for cluster(s) " + empty);
}

} // namespace

double configuration_energy(const DeformableStrokeModel& model,
                            const std::vector<Placement>& placements) {
    double e = 0.0;
    for (const auto& p : placements) e += p.chamfer;
    for (size_t k = 0; k < model.edges.size(); ++k) {
        const auto& [i, j] = model.edges[k];
        e += model.offsets[k].neg_log_density(placements[static_cast<size_t>(i)].location -
                                              placements[static_cast<size_t>(j)].location);
    }
    return e;
}

Rect cluster_region(const DeformableStrokeModel& model, int cluster, double margin_factor) {
    const auto& c = model.clusters[static_cast<size_t>(cluster)];
    const double margin =
        margin_factor * std::hypot(model.canvas_width, model.canvas_height);
    return {c.bbox_center.x - c.bbox_width / 2.0 - margin,
            c.bbox_center.y - c.bbox_height / 2.0 - margin, c.bbox_width + 2.0 * margin,
            c.bbox_height + 2.0 * margin};
}

CandidateSet sample_candidates(const DeformableStrokeModel& model,
                               const OrientedDistanceField& odf, const InferenceParams& params) {
    const int n = static_cast<int>(model.clusters.size());
    CandidateSet set;
    set.per_cluster.resize(static_cast<size_t>(n));
    parallel_for(n, params.threads, [&](int c) {
        const Rect region = cluster_region(model, c, params.margin_factor);
        auto& out = set.per_cluster[static_cast<size_t>(c)];
        const auto& exemplars = model.clusters[static_cast<size_t>(c)].exemplars;
        for (size_t a = 0; a < exemplars.size(); ++a) {
            const auto tpl = make_chamfer_template(exemplars[a].polylines, params.template_spacing,
                                                   odf.n_channels);
            for (const auto& [loc, cost] :
                 fdcm_candidates(tpl, odf, region, params.sampling_threshold,
                                 params.candidate_stride))
                out.push_back({static_cast<int>(a), loc, cost});
        }
        std::sort(out.begin(), out.end(), [](const Candidate& x, const Candidate& y) {
            if (x.chamfer != y.chamfer) return x.chamfer < y.chamfer;
            if (x.exemplar != y.exemplar) return x.exemplar < y.exemplar;
            if (x.location.y != y.location.y) return x.location.y < y.location.y;
            return x.location.x < y.location.x;
        });
        if (static_cast<int>(out.size()) > params.max_candidates)
            out.resize(static_cast<size_t>(params.max_candidates));
    });
    return set;
}

std::vector<double> root_marginals(const DeformableStrokeModel& model,
                                   const CandidateSet& candidates) {
    require_candidates(model, candidates);
    const RootedTree tree = root_tree(model);
    const int n = static_cast<int>(model.clusters.size());

    // sum_msg[node][z] = log p(I | node's candidate z) plus children messages
    std::vector<std::vector<double>> local(static_cast<size_t>(n));
    std::vector<std::vector<double>> msg(static_cast<size_t>(n));  // to the parent, per parent candidate
    for (int u : tree.bottom_up) {
        const auto& cands = candidates.per_cluster[static_cast<size_t>(u)];
        auto& loc = local[static_cast<size_t>(u)];
        loc.assign(cands.size(), 0.0);
        for (size_t z = 0; z < cands.size(); ++z) {
            loc[z] = -cands[z].chamfer;
            for (int ch : tree.children[static_cast<size_t>(u)]) loc[z] += msg[static_cast<size_t>(ch)][z];
        }
        const int p = tree.parent[static_cast<size_t>(u)];
        if (p < 0) continue;
        const auto& pcands = candidates.per_cluster[static_cast<size_t>(p)];
        auto& up = msg[static_cast<size_t>(u)];
        up.assign(pcands.size(), 0.0);
        std::vector<double> terms(cands.size());
        for (size_t zp = 0; zp < pcands.size(); ++zp) {
            for (size_t z = 0; z < cands.size(); ++z)
                terms[z] = loc[z] - deformation_cost(model, tree, u, pcands[zp].location,
                                                     cands[z].location);
            up[zp] = log_sum_exp(terms);
        }
    }
    return local[static_cast<size_t>(model.root)];
}

namespace {

// Max-product tables: value per candidate plus the argmax child choice per
// parent candidate, for top-down completion given a root choice.
struct MaxTables {
    std::vector<std::vector<double>> value;      // node -> per own candidate
    std::vector<std::vector<int>> best_choice;   // node -> per parent candidate
};

MaxTables max_product(const DeformableStrokeModel& model, const CandidateSet& candidates,
                      const RootedTree& tree) {
    const int n = static_cast<int>(model.clusters.size());
    MaxTables t;
    t.value.resize(static_cast<size_t>(n));
    t.best_choice.resize(static_cast<size_t>(n));
    std::vector<std::vector<double>> msg(static_cast<size_t>(n));
    for (int u : tree.bottom_up) {
        const auto& cands = candidates.per_cluster[static_cast<size_t>(u)];
        auto& val = t.value[static_cast<size_t>(u)];
        val.assign(cands.size(), 0.0);
        for (size_t z = 0; z < cands.size(); ++z) {
            val[z] = -cands[z].chamfer;
            for (int ch : tree.children[static_cast<size_t>(u)]) val[z] += msg[static_cast<size_t>(ch)][z];
        }
        const int p = tree.parent[static_cast<size_t>(u)];
        if (p < 0) continue;
        const auto& pcands = candidates.per_cluster[static_cast<size_t>(p)];
        msg[static_cast<size_t>(u)].assign(pcands.size(), 0.0);
        t.best_choice[static_cast<size_t>(u)].assign(pcands.size(), 0);
        for (size_t zp = 0; zp < pcands.size(); ++zp) {
            double best = -std::numeric_limits<double>::infinity();
            int best_z = 0;
            for (size_t z = 0; z < cands.size(); ++z) {
                const double s = val[z] - deformation_cost(model, tree, u, pcands[zp].location,
                                                           cands[z].location);
                if (s > best) {
                    best = s;
                    best_z = static_cast<int>(z);
                }
            }
            msg[static_cast<size_t>(u)][zp] = best;
            t.best_choice[static_cast<size_t>(u)][zp] = best_z;
        }
    }
    return t;
}

Configuration assemble(const DeformableStrokeModel& model, const CandidateSet& candidates,
                       const RootedTree& tree, const std::vector<int>& chosen) {
    Configuration cfg;
    cfg.placements.resize(model.clusters.size());
    for (size_t c = 0; c < model.clusters.size(); ++c) {
        const auto& cand = candidates.per_cluster[c][static_cast<size_t>(chosen[c])];
        cfg.placements[c] = {cand.exemplar, cand.location, cand.chamfer};
    }
    (void)tree;
    cfg.energy = configuration_energy(model, cfg.placements);
    return cfg;
}

} // namespace

std::vector<Configuration> sample_configurations(const DeformableStrokeModel& model,
                                                 const CandidateSet& candidates, int f) {
    if (f < 1) throw InvalidArgument("sample_configurations needs f >= 1");
    require_candidates(model, candidates);
    const RootedTree tree = root_tree(model);

    const auto marginals = root_marginals(model, candidates);
    std::vector<int> order(marginals.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return marginals[static_cast<size_t>(a)] > marginals[static_cast<size_t>(b)];
    });
    const int take = std::min<int>(f, static_cast<int>(order.size()));

    const MaxTables tables = max_product(model, candidates, tree);
    std::vector<Configuration> out;
    out.reserve(static_cast<size_t>(take));
    for (int b = 0; b < take; ++b) {
        std::vector<int> chosen(model.clusters.size(), 0);
        chosen[static_cast<size_t>(model.root)] = order[static_cast<size_t>(b)];
        // top-down in BFS order: parents are always resolved first
        for (auto it = tree.bottom_up.rbegin(); it != tree.bottom_up.rend(); ++it) {
            const int u = *it;
            const int p = tree.parent[static_cast<size_t>(u)];
            if (p < 0) continue;
            chosen[static_cast<size_t>(u)] =
                tables.best_choice[static_cast<size_t>(u)][static_cast<size_t>(chosen[static_cast<size_t>(p)])];
        }
        out.push_back(assemble(model, candidates, tree, chosen));
    }
    return out;
}

Configuration minimize_over_candidates(const DeformableStrokeModel& model,
                                       const CandidateSet& candidates) {
    require_candidates(model, candidates);
    const RootedTree tree = root_tree(model);
    const int n = static_cast<int>(model.clusters.size());

    std::vector<std::vector<double>> q(static_cast<size_t>(n));       // node value per own candidate
    std::vector<std::vector<double>> qmsg(static_cast<size_t>(n));    // to parent, per parent candidate
    std::vector<std::vector<int>> best(static_cast<size_t>(n));       // argmin per parent candidate
    for (int u : tree.bottom_up) {
        const auto& cands = candidates.per_cluster[static_cast<size_t>(u)];
        auto& val = q[static_cast<size_t>(u)];
        val.assign(cands.size(), 0.0);
        for (size_t z = 0; z < cands.size(); ++z) {
            val[z] = cands[z].chamfer;
            for (int ch : tree.children[static_cast<size_t>(u)]) val[z] += qmsg[static_cast<size_t>(ch)][z];
        }
        const int p = tree.parent[static_cast<size_t>(u)];
        if (p < 0) continue;
        const auto& pcands = candidates.per_cluster[static_cast<size_t>(p)];
        qmsg[static_cast<size_t>(u)].assign(pcands.size(), 0.0);
        best[static_cast<size_t>(u)].assign(pcands.size(), 0);
        for (size_t zp = 0; zp < pcands.size(); ++zp) {
            double b = std::numeric_limits<double>::infinity();
            int bz = 0;
            for (size_t z = 0; z < cands.size(); ++z) {
                const double s = val[z] + deformation_cost(model, tree, u, pcands[zp].location,
                                                           cands[z].location);
                if (s < b) {
                    b = s;
                    bz = static_cast<int>(z);
                }
            }
            qmsg[static_cast<size_t>(u)][zp] = b;
            best[static_cast<size_t>(u)][zp] = bz;
        }
    }

    const auto& root_vals = q[static_cast<size_t>(model.root)];
    int root_z = 0;
    for (size_t z = 1; z < root_vals.size(); ++z)
        if (root_vals[z] < root_vals[static_cast<size_t>(root_z)]) root_z = static_cast<int>(z);

    std::vector<int> chosen(model.clusters.size(), 0);
    chosen[static_cast<size_t>(model.root)] = root_z;
    for (auto it = tree.bottom_up.rbegin(); it != tree.bottom_up.rend(); ++it) {
        const int u = *it;
        const int p = tree.parent[static_cast<size_t>(u)];
        if (p < 0) continue;
        chosen[static_cast<size_t>(u)] =
            best[static_cast<size_t>(u)][static_cast<size_t>(chosen[static_cast<size_t>(p)])];
    }
    return assemble(model, candidates, tree, chosen);
}

Configuration minimize_energy(const DeformableStrokeModel& model, const Configuration& config,
                              const OrientedDistanceField& odf, const InferenceParams& params) {
    if (config.placements.size() != model.clusters.size())
        throw InvalidArgument("configuration does not match the model");
    if (params.relaxed_threshold < params.sampling_threshold)
        throw InvalidArgument("relaxed threshold must be >= the sampling threshold");

    CandidateSet set;
    set.per_cluster.resize(model.clusters.size());
    const int n = static_cast<int>(model.clusters.size());
    parallel_for(n, params.threads, [&](int c) {
        const auto& place = config.placements[static_cast<size_t>(c)];
        const auto tpl = make_chamfer_template(
            model.clusters[static_cast<size_t>(c)].exemplars[static_cast<size_t>(place.exemplar)].polylines,
            params.template_spacing, odf.n_channels);
        auto& out = set.per_cluster[static_cast<size_t>(c)];
        // the current location always stays available, so the minimized
        // energy can never exceed the input energy
        out.push_back({place.exemplar, place.location, chamfer_cost(tpl, place.location, odf)});
        for (const auto& [loc, cost] :
             fdcm_candidates(tpl, odf, cluster_region(model, c, params.margin_factor),
                             params.relaxed_threshold, params.candidate_stride)) {
            if (std::lround(loc.x) == std::lround(place.location.x) &&
                std::lround(loc.y) == std::lround(place.location.y))
                continue;
            out.push_back({place.exemplar, loc, cost});
            if (static_cast<int>(out.size()) >= params.max_candidates) break;
        }
    });
    return minimize_over_candidates(model, set);
}

Configuration refine_aesthetic(const DeformableStrokeModel& model, const Configuration& config,
                               const InferenceParams& params, const OrientedDistanceField* odf) {
    if (config.placements.size() != model.clusters.size())
        throw InvalidArgument("configuration does not match the model");
    const int r = static_cast<int>(std::floor(params.shift_radius));

    CandidateSet set;
    set.per_cluster.resize(model.clusters.size());
    for (size_t c = 0; c < model.clusters.size(); ++c) {
        const auto& place = config.placements[c];
        auto& out = set.per_cluster[c];
        // appearance is switched off: all candidates carry zero cost, and the
        // current location comes first so exact ties keep the detection
        out.push_back({place.exemplar, place.location, 0.0});
        for (int dy = -r; dy <= r; ++dy)
            for (int dx = -r; dx <= r; ++dx) {
                if (dx == 0 && dy == 0) continue;
                out.push_back({place.exemplar,
                               {place.location.x + dx, place.location.y + dy}, 0.0});
            }
    }
    Configuration refined = minimize_over_candidates(model, set);
    for (size_t c = 0; c < refined.placements.size(); ++c) {
        if (odf) {
            const auto tpl = make_chamfer_template(
                model.clusters[c].exemplars[static_cast<size_t>(refined.placements[c].exemplar)].polylines,
                params.template_spacing, odf->n_channels);
            refined.placements[c].chamfer = chamfer_cost(tpl, refined.placements[c].location, *odf);
        } else {
            refined.placements[c].chamfer = config.placements[c].chamfer;
        }
    }
    refined.energy = configuration_energy(model, refined.placements);
    return refined;
}

Configuration detect(const DeformableStrokeModel& model, const OrientedDistanceField& odf,
                     const InferenceParams& params) {
    const CandidateSet candidates = sample_candidates(model, odf, params);
    auto samples = sample_configurations(model, candidates, params.f);

    std::vector<Configuration> minimized(samples.size());
    parallel_for(static_cast<int>(samples.size()), params.threads, [&](int i) {
        Configuration m = minimize_energy(model, samples[static_cast<size_t>(i)], odf, params);
        if (params.refine_per_sample) m = refine_aesthetic(model, m, params, &odf);
        minimized[static_cast<size_t>(i)] = std::move(m);
    });

    size_t winner = 0;
    for (size_t i = 1; i < minimized.size(); ++i)
        if (minimized[i].energy < minimized[winner].energy) winner = i;
    Configuration result = minimized[winner];
    if (params.refine && !params.refine_per_sample)
        result = refine_aesthetic(model, result, params, &odf);
    return result;
}

Sketch configuration_to_sketch(const DeformableStrokeModel& model, const Configuration& config,
                               double template_spacing) {
    Sketch out;
    out.canvas_width = model.canvas_width;
    out.canvas_height = model.canvas_height;
    int id = 0;
    for (size_t c = 0; c < config.placements.size(); ++c) {
        const auto& place = config.placements[c];
        const auto& ex = model.clusters[c].exemplars[static_cast<size_t>(place.exemplar)];
        // the chamfer template's sample centroid is the placement anchor
        const auto tpl = make_chamfer_template(ex.polylines, template_spacing, 1);
        const Point2 shift = place.location - tpl.anchor;
        for (const auto& pl : ex.polylines) {
            Stroke s;
            s.id = id;
            s.order = id;
            ++id;
            s.points.reserve(pl.size());
            for (auto p : pl) s.points.push_back(p + shift);
            out.strokes.push_back(std::move(s));
        }
    }
    return out;
}

LabelResult label_strokes(const DeformableStrokeModel& model, const Configuration& config,
                          const std::vector<Stroke>& strokes, const InferenceParams& params) {
    // placed exemplar point sets at 1 px resolution
    std::vector<std::vector<Point2>> placed(model.clusters.size());
    for (size_t c = 0; c < model.clusters.size(); ++c) {
        const auto& place = config.placements[c];
        const auto& ex = model.clusters[c].exemplars[static_cast<size_t>(place.exemplar)];
        const auto tpl = make_chamfer_template(ex.polylines, params.template_spacing, 1);
        const Point2 shift = place.location - tpl.anchor;
        for (const auto& pl : ex.polylines) {
            auto rs = resample_polyline(pl, 1.0);
            for (auto p : rs) placed[c].push_back(p + shift);
        }
    }

    auto nearest_cluster = [&](Point2 p, double* out_dist) {
        int best_c = -1;
        double best = std::numeric_limits<double>::infinity();
        for (size_t c = 0; c < placed.size(); ++c)
            for (const auto& q : placed[c]) {
                const double d = distance(p, q);
                if (d < best) {
                    best = d;
                    best_c = static_cast<int>(c);
                }
            }
        if (out_dist) *out_dist = best;
        return best_c;
    };

    auto base_label = [&](const Stroke& s) {
        const auto pts = resample_polyline(s.points, 1.0);
        std::vector<long> votes(model.clusters.size(), 0);
        for (const auto& p : pts) {
            double d = 0.0;
            const int c = nearest_cluster(p, &d);
            if (c >= 0 && d <= params.label_overlap_radius) ++votes[static_cast<size_t>(c)];
        }
        long best_votes = 0;
        for (long v : votes) best_votes = std::max(best_votes, v);
        if (best_votes == 0) {
            // zero overlap: nearest by MHD
            int best_c = 0;
            double best = std::numeric_limits<double>::infinity();
            for (size_t c = 0; c < placed.size(); ++c) {
                const double d = mhd(pts, placed[c]);
                if (d < best) {
                    best = d;
                    best_c = static_cast<int>(c);
                }
            }
            return best_c;
        }
        std::vector<int> tied;
        for (size_t c = 0; c < votes.size(); ++c)
            if (votes[c] == best_votes) tied.push_back(static_cast<int>(c));
        if (tied.size() == 1) return tied[0];
        int best_c = tied[0];
        double best = std::numeric_limits<double>::infinity();
        for (int c : tied) {
            const double d = mhd(pts, placed[static_cast<size_t>(c)]);
            if (d < best) {
                best = d;
                best_c = c;
            }
        }
        return best_c;
    };

    LabelResult result;
    int next_id = 0;
    auto emit = [&](Stroke s, int label) {
        s.id = next_id++;
        result.strokes.push_back(std::move(s));
        result.labels.push_back(label);
    };

    for (const auto& s : strokes) {
        const auto pts = resample_polyline(s.points, 1.0);
        std::vector<long> votes(model.clusters.size(), 0);
        std::vector<int> assigned(pts.size(), -1);
        for (size_t i = 0; i < pts.size(); ++i) {
            double d = 0.0;
            const int c = nearest_cluster(pts[i], &d);
            if (c >= 0 && d <= params.label_overlap_radius) {
                assigned[i] = c;
                ++votes[static_cast<size_t>(c)];
            }
        }
        // the top two clusters, by votes then lower index
        int top1 = -1, top2 = -1;
        for (size_t c = 0; c < votes.size(); ++c) {
            if (votes[c] == 0) continue;
            if (top1 < 0 || votes[c] > votes[static_cast<size_t>(top1)]) {
                top2 = top1;
                top1 = static_cast<int>(c);
            } else if (top2 < 0 || votes[c] > votes[static_cast<size_t>(top2)]) {
                top2 = static_cast<int>(c);
            }
        }
        const double total = static_cast<double>(pts.size());
        const bool split = top1 >= 0 && top2 >= 0 &&
                           votes[static_cast<size_t>(top1)] >= params.label_cut_fraction * total &&
                           votes[static_cast<size_t>(top2)] >= params.label_cut_fraction * total;
        if (!split) {
            emit(s, base_label(s));
            continue;
        }
        // best prefix/suffix split between the two dominant clusters
        const size_t np = pts.size();
        long best_score = -1;
        size_t best_k = np / 2;
        for (const auto& [a, b] : {std::pair{top1, top2}, std::pair{top2, top1}}) {
            std::vector<long> prefix_a(np + 1, 0), suffix_b(np + 1, 0);
            for (size_t i = 0; i < np; ++i)
                prefix_a[i + 1] = prefix_a[i] + (assigned[i] == a ? 1 : 0);
            for (size_t i = np; i > 0; --i)
                suffix_b[i - 1] = suffix_b[i] + (assigned[i - 1] == b ? 1 : 0);
            for (size_t cut = 1; cut + 1 < np; ++cut) {
                const long score = prefix_a[cut] + suffix_b[cut];
                if (score > best_score) {
                    best_score = score;
                    best_k = cut;
                }
            }
        }
        const double arc = polyline_length(s.points) * static_cast<double>(best_k) /
                           static_cast<double>(np - 1);
        auto [head, tail] = split_stroke_at_arc(s, arc);
        emit(head, base_label(head));
        emit(tail, base_label(tail));
    }
    return result;
}

} // namespace dsm
