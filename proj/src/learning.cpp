#include "dsm/learning.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "dsm/errors.hpp"
#include "dsm/matching.hpp"
#include "parallel.hpp"

namespace dsm {

SemanticStrokeItem make_semantic_stroke(const Sketch& k, const SemanticGroup& group,
                                        int sketch_index, double resample_spacing) {
    SemanticStrokeItem item;
    item.sketch_index = sketch_index;
    item.group_id = group.group_id;
    std::vector<Point2> all_raw;
    for (int id : group.members) {
        const Stroke* s = nullptr;
        for (const auto& st : k.strokes)
            if (st.id == id) {
                s = &st;
                break;
            }
        if (!s) throw InvalidArgument("group references unknown stroke id");
        item.polylines.push_back(s->points);
        item.length += stroke_length(*s);
        auto rs = resample_polyline(s->points, resample_spacing);
        item.samples.insert(item.samples.end(), rs.begin(), rs.end());
        all_raw.insert(all_raw.end(), s->points.begin(), s->points.end());
    }
    if (item.samples.empty()) throw InvalidArgument("semantic group has no usable strokes");
    item.location = centroid(item.samples);
    item.bbox = bounding_box(all_raw);
    return item;
}

double affinity(double k_cost, Point2 l_i, Point2 l_j, double rho_i, double rho_j) {
    if (rho_i <= 0.0 || rho_j <= 0.0) throw InvalidArgument("local scales must be > 0");
    return std::exp(-(k_cost * distance(l_i, l_j)) / (rho_i * rho_j));
}

std::vector<double> local_scales(const std::vector<std::vector<double>>& k_costs,
                                 const std::vector<Point2>& locations, int k_neighbor) {
    const size_t n = locations.size();
    std::vector<double> rho(n, 1.0);
    if (n < 2) return rho;
    for (size_t i = 0; i < n; ++i) {
        std::vector<double> d;
        d.reserve(n - 1);
        for (size_t j = 0; j < n; ++j)
            if (j != i) d.push_back(k_costs[i][j] * distance(locations[i], locations[j]));
        std::sort(d.begin(), d.end());
        const size_t idx = std::min<size_t>(static_cast<size_t>(std::max(1, k_neighbor)), d.size()) - 1;
        rho[i] = std::max(std::sqrt(d[idx]), 1e-6);
    }
    return rho;
}

std::vector<ExemplarStroke> select_exemplars(const std::vector<SemanticStrokeItem>& members,
                                             const std::vector<std::vector<double>>& k_costs,
                                             const std::vector<int>& member_indices,
                                             double fraction, int n_rotations,
                                             double max_rotation_deg) {
    if (member_indices.empty()) throw InvalidArgument("select_exemplars on empty cluster");
    if (fraction <= 0.0 || fraction > 1.0) throw InvalidArgument("exemplar fraction must be in (0,1]");
    const size_t m = member_indices.size();

    std::vector<std::pair<double, int>> ranked;  // (mean cost to others, pool index)
    ranked.reserve(m);
    for (size_t a = 0; a < m; ++a) {
        double mean = 0.0;
        for (size_t b = 0; b < m; ++b) {
            if (a == b) continue;
            mean += k_costs[static_cast<size_t>(member_indices[a])]
                           [static_cast<size_t>(member_indices[b])];
        }
        if (m > 1) mean /= static_cast<double>(m - 1);
        ranked.emplace_back(mean, member_indices[a]);
    }
    std::sort(ranked.begin(), ranked.end());
    const size_t keep = static_cast<size_t>(
        std::ceil(fraction * static_cast<double>(m) - 1e-12));

    std::vector<double> angles;
    if (n_rotations > 0 && max_rotation_deg > 0.0) {
        const double max_rad = max_rotation_deg * std::numbers::pi / 180.0;
        if (n_rotations == 1) {
            angles.push_back(max_rad);
        } else {
            for (int r = 0; r < n_rotations; ++r) {
                double a = -max_rad + 2.0 * max_rad * r / (n_rotations - 1);
                if (std::abs(a) > 1e-12) angles.push_back(a);  // the unrotated copy already exists
            }
        }
    }

    std::vector<ExemplarStroke> out;
    for (size_t r = 0; r < keep; ++r) {
        const SemanticStrokeItem* item = &members[static_cast<size_t>(ranked[r].second)];
        ExemplarStroke base;
        base.polylines = item->polylines;
        base.anchor = item->location;
        out.push_back(base);
        for (double a : angles) {
            ExemplarStroke rot;
            rot.anchor = item->location;
            const double ca = std::cos(a), sa = std::sin(a);
            for (const auto& pl : item->polylines) {
                std::vector<Point2> rp;
                rp.reserve(pl.size());
                for (const auto& p : pl) {
                    const double dx = p.x - item->location.x;
                    const double dy = p.y - item->location.y;
                    rp.push_back({item->location.x + ca * dx - sa * dy,
                                  item->location.y + sa * dx + ca * dy});
                }
                rot.polylines.push_back(std::move(rp));
            }
            out.push_back(std::move(rot));
        }
    }
    return out;
}

std::vector<std::pair<int, int>> minimum_spanning_tree(
    int n, const std::vector<std::vector<double>>& weights) {
    if (n < 2) throw InvalidArgument("minimum_spanning_tree needs >= 2 nodes");
    struct Edge {
        double w;
        int i, j;
    };
    std::vector<Edge> edges;
    edges.reserve(static_cast<size_t>(n) * static_cast<size_t>(n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            edges.push_back({weights[static_cast<size_t>(i)][static_cast<size_t>(j)], i, j});
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        if (a.w != b.w) return a.w < b.w;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });

    std::vector<int> parent(static_cast<size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
        while (parent[static_cast<size_t>(a)] != a) {
            parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
            a = parent[static_cast<size_t>(a)];
        }
        return a;
    };
    std::vector<std::pair<int, int>> tree;
    tree.reserve(static_cast<size_t>(n - 1));
    for (const auto& e : edges) {
        const int ri = find(e.i), rj = find(e.j);
        if (ri == rj) continue;
        parent[static_cast<size_t>(ri)] = rj;
        tree.emplace_back(e.i, e.j);
        if (static_cast<int>(tree.size()) == n - 1) break;
    }
    std::sort(tree.begin(), tree.end());
    return tree;
}

std::vector<std::vector<double>> cluster_log_edge_weights(
    const std::vector<SemanticStrokeItem>& items, const std::vector<int>& cluster_of,
    int n_clusters, double max_dim) {
    if (max_dim <= 0.0) throw InvalidArgument("max_dim must be > 0");
    std::vector<std::vector<double>> w(
        static_cast<size_t>(n_clusters), std::vector<double>(static_cast<size_t>(n_clusters), 0.0));
    for (size_t a = 0; a < items.size(); ++a)
        for (size_t b = a + 1; b < items.size(); ++b) {
            const int ci = cluster_of[a], cj = cluster_of[b];
            if (ci == cj || items[a].sketch_index != items[b].sketch_index) continue;
            const double factor =
                std::max(distance(items[a].location, items[b].location) / max_dim, 1e-6);
            w[static_cast<size_t>(ci)][static_cast<size_t>(cj)] += std::log(factor);
            w[static_cast<size_t>(cj)][static_cast<size_t>(ci)] =
                w[static_cast<size_t>(ci)][static_cast<size_t>(cj)];
        }
    return w;
}

std::vector<std::pair<int, int>> mst_structure(const std::vector<SemanticStrokeItem>& items,
                                               const std::vector<int>& cluster_of, int n_clusters,
                                               double max_dim) {
    return minimum_spanning_tree(n_clusters,
                                 cluster_log_edge_weights(items, cluster_of, n_clusters, max_dim));
}

Gaussian2 fit_offset(const std::vector<Point2>& offsets, double ridge) {
    if (offsets.empty()) throw InvalidModel("offset MLE needs at least one sample");
    Gaussian2 g;
    g.mean = centroid(offsets);
    double xx = 0.0, xy = 0.0, yy = 0.0;
    for (const auto& o : offsets) {
        const double dx = o.x - g.mean.x;
        const double dy = o.y - g.mean.y;
        xx += dx * dx;
        xy += dx * dy;
        yy += dy * dy;
    }
    const double m = static_cast<double>(offsets.size());
    g.cov_xx = xx / m + ridge;
    g.cov_xy = xy / m;
    g.cov_yy = yy / m + ridge;
    return g;
}

std::vector<Gaussian2> fit_offsets(const std::vector<std::pair<int, int>>& edges,
                                   const std::vector<SemanticStrokeItem>& items,
                                   const std::vector<int>& cluster_of, double ridge) {
    std::vector<Gaussian2> out;
    out.reserve(edges.size());
    for (const auto& [ci, cj] : edges) {
        std::vector<Point2> offsets;
        for (size_t a = 0; a < items.size(); ++a) {
            if (cluster_of[a] != ci) continue;
            for (size_t b = 0; b < items.size(); ++b) {
                if (cluster_of[b] != cj || items[a].sketch_index != items[b].sketch_index) continue;
                offsets.push_back(items[a].location - items[b].location);
            }
        }
        if (offsets.empty())
            throw InvalidModel("edge (" + std::to_string(ci) + "," + std::to_string(cj) +
                               ") has no same-sketch stroke pair");
        out.push_back(fit_offset(offsets, ridge));
    }
    return out;
}

namespace {

int facing_sign(const Sketch& k) {
    std::vector<double> xs;
    for (const auto& s : k.strokes)
        for (const auto& p : s.points) xs.push_back(p.x);
    if (xs.empty()) return 0;
    double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double skew = 0.0;
    for (double x : xs) skew += (x - mean) * (x - mean) * (x - mean);
    if (skew > 0.0) return 1;
    if (skew < 0.0) return -1;
    return 0;
}

} // namespace

DeformableStrokeModel learn_model(const std::vector<Sketch>& sketches,
                                  const std::vector<std::vector<SemanticGroup>>& groups,
                                  const LearningParams& params) {
    if (sketches.size() < 2) throw InvalidArgument("learn_model needs >= 2 training sketches");
    if (groups.size() != sketches.size())
        throw InvalidArgument("one group list per sketch required");

    // facing normalization: flip minority-skew sketches to the majority side
    std::vector<Sketch> pool_sketches;
    pool_sketches.reserve(sketches.size() * (params.mirror_augment ? 2 : 1));
    if (params.normalize_facing) {
        int pos = 0, neg = 0;
        std::vector<int> signs(sketches.size(), 0);
        for (size_t i = 0; i < sketches.size(); ++i) {
            signs[i] = facing_sign(sketches[i]);
            if (signs[i] > 0) ++pos;
            if (signs[i] < 0) ++neg;
        }
        const int majority = pos >= neg ? 1 : -1;
        for (size_t i = 0; i < sketches.size(); ++i)
            pool_sketches.push_back(signs[i] != 0 && signs[i] != majority
                                        ? flip_horizontal(sketches[i])
                                        : sketches[i]);
    } else {
        pool_sketches = sketches;
    }
    std::vector<std::vector<SemanticGroup>> pool_groups = groups;
    if (params.mirror_augment) {
        const size_t base = pool_sketches.size();
        for (size_t i = 0; i < base; ++i) {
            pool_sketches.push_back(flip_horizontal(pool_sketches[i]));
            pool_groups.push_back(pool_groups[i]);
        }
    }

    std::vector<SemanticStrokeItem> items;
    double mean_groups = 0.0;
    for (size_t si = 0; si < pool_sketches.size(); ++si) {
        mean_groups += static_cast<double>(pool_groups[si].size());
        for (const auto& g : pool_groups[si])
            items.push_back(make_semantic_stroke(pool_sketches[si], g, static_cast<int>(si),
                                                 params.resample_spacing));
    }
    mean_groups /= static_cast<double>(pool_sketches.size());

    const int n_items = static_cast<int>(items.size());
    const int k = static_cast<int>(std::lround(mean_groups));
    if (k < 2 || n_items < 2) throw InvalidModel("degenerate pool: fewer than 2 part clusters");
    const int n_clusters = std::min(k, n_items);

    // pairwise shape-context cost matrix
    std::vector<ShapeContextDescriptor> descs(static_cast<size_t>(n_items));
    parallel_for(n_items, params.threads, [&](int i) {
        descs[static_cast<size_t>(i)] = shape_context(items[static_cast<size_t>(i)].samples,
                                                      params.sc_samples, params.sc_radial_bins,
                                                      params.sc_angle_bins);
    });
    std::vector<std::vector<double>> k_costs(static_cast<size_t>(n_items),
                                             std::vector<double>(static_cast<size_t>(n_items), 0.0));
    const int n_pairs = n_items * (n_items - 1) / 2;
    parallel_for(n_pairs, params.threads, [&](int idx) {
        int i = 0, rem = idx;
        while (rem >= n_items - 1 - i) {
            rem -= n_items - 1 - i;
            ++i;
        }
        const int j = i + 1 + rem;
        const double c = sc_cost(descs[static_cast<size_t>(i)], descs[static_cast<size_t>(j)]);
        k_costs[static_cast<size_t>(i)][static_cast<size_t>(j)] = c;
        k_costs[static_cast<size_t>(j)][static_cast<size_t>(i)] = c;
    });

    std::vector<Point2> locations(static_cast<size_t>(n_items));
    for (int i = 0; i < n_items; ++i) locations[static_cast<size_t>(i)] = items[static_cast<size_t>(i)].location;
    const auto rho = local_scales(k_costs, locations, params.local_scale_k);

    std::vector<std::vector<double>> A(static_cast<size_t>(n_items),
                                       std::vector<double>(static_cast<size_t>(n_items), 1.0));
    for (int i = 0; i < n_items; ++i)
        for (int j = i + 1; j < n_items; ++j) {
            const double a = affinity(k_costs[static_cast<size_t>(i)][static_cast<size_t>(j)],
                                      locations[static_cast<size_t>(i)],
                                      locations[static_cast<size_t>(j)], rho[static_cast<size_t>(i)],
                                      rho[static_cast<size_t>(j)]);
            A[static_cast<size_t>(i)][static_cast<size_t>(j)] = a;
            A[static_cast<size_t>(j)][static_cast<size_t>(i)] = a;
        }

    const auto cluster_of = spectral_cluster(A, n_clusters, params.kmeans_max_iters);

    DeformableStrokeModel model;
    double mean_w = 0.0, mean_h = 0.0;
    for (const auto& ks : pool_sketches) {
        mean_w += ks.canvas_width;
        mean_h += ks.canvas_height;
    }
    model.canvas_width = mean_w / static_cast<double>(pool_sketches.size());
    model.canvas_height = mean_h / static_cast<double>(pool_sketches.size());

    model.clusters.resize(static_cast<size_t>(n_clusters));
    for (int c = 0; c < n_clusters; ++c) {
        std::vector<int> member_indices;
        for (int i = 0; i < n_items; ++i)
            if (cluster_of[static_cast<size_t>(i)] == c) member_indices.push_back(i);
        auto& entry = model.clusters[static_cast<size_t>(c)];
        entry.exemplars = select_exemplars(items, k_costs, member_indices,
                                           params.exemplar_fraction, params.n_rotations,
                                           params.max_rotation_deg);
        Point2 center{0, 0};
        double bw = 0.0, bh = 0.0;
        for (int mi : member_indices) {
            const auto& it = items[static_cast<size_t>(mi)];
            center = center + it.location;
            bw += it.bbox.width();
            bh += it.bbox.height();
            entry.total_member_length += it.length;
        }
        const double m = static_cast<double>(member_indices.size());
        entry.bbox_center = {center.x / m, center.y / m};
        entry.bbox_width = bw / m;
        entry.bbox_height = bh / m;
    }

    if (n_clusters > 1) {
        model.edges = mst_structure(items, cluster_of, n_clusters,
                                    std::max(model.canvas_width, model.canvas_height));
        model.offsets = fit_offsets(model.edges, items, cluster_of, params.ridge);
    }

    int root = 0;
    for (int c = 1; c < n_clusters; ++c)
        if (model.clusters[static_cast<size_t>(c)].total_member_length >
            model.clusters[static_cast<size_t>(root)].total_member_length)
            root = c;
    model.root = root;

    validate_model(model);
    return model;
}

} // namespace dsm
