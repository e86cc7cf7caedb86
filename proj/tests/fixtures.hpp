// Synthetic sketches, models and random generators shared across suites.
#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "dsm/geometry.hpp"
#include "dsm/inference.hpp"
#include "dsm/model.hpp"

namespace fixtures {

inline dsm::Stroke make_stroke(int id, int order, std::vector<dsm::Point2> pts) {
    return dsm::Stroke{id, order, std::move(pts)};
}

inline dsm::Stroke line_stroke(int id, int order, dsm::Point2 a, dsm::Point2 b, int n_pts = 2) {
    std::vector<dsm::Point2> pts;
    for (int i = 0; i < n_pts; ++i) {
        const double t = n_pts > 1 ? static_cast<double>(i) / (n_pts - 1) : 0.0;
        pts.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
    return make_stroke(id, order, std::move(pts));
}

inline dsm::Stroke arc_stroke(int id, int order, dsm::Point2 center, double radius, double a0,
                              double a1, int n_pts = 24) {
    std::vector<dsm::Point2> pts;
    for (int i = 0; i < n_pts; ++i) {
        const double t = a0 + (a1 - a0) * i / (n_pts - 1);
        pts.push_back({center.x + radius * std::cos(t), center.y + radius * std::sin(t)});
    }
    return make_stroke(id, order, std::move(pts));
}

inline dsm::Sketch sketch_of(double w, double h, std::vector<dsm::Stroke> strokes) {
    return dsm::Sketch{w, h, std::move(strokes)};
}

// Random SPD 2x2 covariance with eigenvalues in [lo, hi].
inline dsm::Gaussian2 random_gaussian(std::mt19937& rng, double mean_span, double lo, double hi) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double theta = u(rng) * std::numbers::pi;
    const double l1 = lo + (hi - lo) * u(rng);
    const double l2 = lo + (hi - lo) * u(rng);
    const double c = std::cos(theta), s = std::sin(theta);
    dsm::Gaussian2 g;
    g.cov_xx = c * c * l1 + s * s * l2;
    g.cov_yy = s * s * l1 + c * c * l2;
    g.cov_xy = c * s * (l1 - l2);
    g.mean = {mean_span * (2.0 * u(rng) - 1.0), mean_span * (2.0 * u(rng) - 1.0)};
    return g;
}

inline dsm::Point2 sample_gaussian(std::mt19937& rng, const dsm::Gaussian2& g) {
    std::normal_distribution<double> n(0.0, 1.0);
    // Cholesky of [[xx, xy], [xy, yy]]
    const double l11 = std::sqrt(g.cov_xx);
    const double l21 = g.cov_xy / l11;
    const double l22 = std::sqrt(g.cov_yy - l21 * l21);
    const double z1 = n(rng), z2 = n(rng);
    return {g.mean.x + l11 * z1, g.mean.y + l21 * z1 + l22 * z2};
}

// Random tree edges on n nodes (uniform over Pruefer sequences).
inline std::vector<std::pair<int, int>> random_tree(std::mt19937& rng, int n) {
    if (n == 1) return {};
    if (n == 2) return {{0, 1}};
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::vector<int> seq(static_cast<size_t>(n - 2));
    for (auto& s : seq) s = pick(rng);
    std::vector<int> degree(static_cast<size_t>(n), 1);
    for (int s : seq) ++degree[static_cast<size_t>(s)];
    std::vector<std::pair<int, int>> edges;
    std::vector<char> used(static_cast<size_t>(n), 0);
    for (int s : seq) {
        int leaf = -1;
        for (int v = 0; v < n; ++v)
            if (degree[static_cast<size_t>(v)] == 1 && !used[static_cast<size_t>(v)]) {
                leaf = v;
                break;
            }
        used[static_cast<size_t>(leaf)] = 1;
        edges.emplace_back(std::min(leaf, s), std::max(leaf, s));
        --degree[static_cast<size_t>(s)];
    }
    std::vector<int> rest;
    for (int v = 0; v < n; ++v)
        if (!used[static_cast<size_t>(v)] && degree[static_cast<size_t>(v)] == 1) rest.push_back(v);
    edges.emplace_back(rest[0], rest[1]);
    return edges;
}

// Random abstract model plus candidate sets with injected chamfer costs,
// for exercising the tree DP against enumeration.
struct RandomDpCase {
    dsm::DeformableStrokeModel model;
    dsm::CandidateSet candidates;
};

inline RandomDpCase random_dp_case(std::mt19937& rng, int max_clusters, int max_candidates) {
    std::uniform_int_distribution<int> nc(1, max_clusters);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RandomDpCase c;
    const int n = nc(rng);
    c.model.canvas_width = 100.0;
    c.model.canvas_height = 100.0;
    c.model.clusters.resize(static_cast<size_t>(n));
    for (auto& cl : c.model.clusters) {
        cl.exemplars.resize(1);
        cl.exemplars[0].polylines = {{{0.0, 0.0}, {10.0, 0.0}}};
    }
    c.model.edges = random_tree(rng, n);
    std::sort(c.model.edges.begin(), c.model.edges.end());
    for (size_t e = 0; e < c.model.edges.size(); ++e)
        c.model.offsets.push_back(random_gaussian(rng, 20.0, 1.0, 40.0));
    c.model.root = std::uniform_int_distribution<int>(0, n - 1)(rng);

    std::uniform_int_distribution<int> ncand(1, max_candidates);
    c.candidates.per_cluster.resize(static_cast<size_t>(n));
    for (auto& lst : c.candidates.per_cluster) {
        const int m = ncand(rng);
        for (int z = 0; z < m; ++z)
            lst.push_back({0, {100.0 * u(rng), 100.0 * u(rng)}, 10.0 * u(rng)});
    }
    return c;
}

} // namespace fixtures
