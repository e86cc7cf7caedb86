// Independent reference implementations used to pin expected values.
// Everything here is deliberately brute force and kept free of the library
// code paths it checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "dsm/inference.hpp"
#include "dsm/model.hpp"

namespace oracle {

// Exact nearest-edge-pixel distances by O(pixels * points) scan. Edge
// points are pre-rounded pixel coordinates.
inline std::vector<double> brute_force_distance_transform(
    const std::vector<std::pair<int, int>>& edge_pixels, int width, int height) {
    std::vector<double> out(static_cast<size_t>(width) * static_cast<size_t>(height));
    const double empty_value = std::hypot(static_cast<double>(width), static_cast<double>(height));
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            int64_t best = std::numeric_limits<int64_t>::max();
            for (const auto& [px, py] : edge_pixels) {
                const int64_t dx = x - px, dy = y - py;
                best = std::min(best, dx * dx + dy * dy);
            }
            out[static_cast<size_t>(y) * static_cast<size_t>(width) + static_cast<size_t>(x)] =
                edge_pixels.empty() ? empty_value : std::sqrt(static_cast<double>(best));
        }
    return out;
}

// Minimum assignment cost over all permutations (n <= 8).
inline double brute_force_assignment(const std::vector<std::vector<double>>& cost) {
    const size_t n = cost.size();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (size_t i = 0; i < n; ++i) total += cost[i][static_cast<size_t>(perm[i])];
        best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// All labeled spanning trees on n nodes, by decoding every Pruefer sequence.
inline std::vector<std::vector<std::pair<int, int>>> all_spanning_trees(int n) {
    std::vector<std::vector<std::pair<int, int>>> trees;
    if (n == 1) return {{}};
    if (n == 2) return {{{0, 1}}};
    std::vector<int> seq(static_cast<size_t>(n - 2), 0);
    while (true) {
        // decode
        std::vector<int> degree(static_cast<size_t>(n), 1);
        for (int s : seq) ++degree[static_cast<size_t>(s)];
        std::vector<std::pair<int, int>> edges;
        std::vector<int> work = seq;
        std::vector<char> used(static_cast<size_t>(n), 0);
        for (int s : work) {
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
        std::sort(edges.begin(), edges.end());
        trees.push_back(std::move(edges));
        // next sequence
        int pos = n - 3;
        while (pos >= 0 && seq[static_cast<size_t>(pos)] == n - 1) {
            seq[static_cast<size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++seq[static_cast<size_t>(pos)];
    }
    return trees;
}

inline double tree_weight(const std::vector<std::pair<int, int>>& edges,
                          const std::vector<std::vector<double>>& w) {
    double total = 0.0;
    for (const auto& [i, j] : edges) total += w[static_cast<size_t>(i)][static_cast<size_t>(j)];
    return total;
}

// Direct -log N(d | mu, cov) through an explicitly inverted 2x2 matrix.
inline double gaussian_neg_log(double dx, double dy, double mx, double my, double cxx, double cxy,
                               double cyy) {
    const double det = cxx * cyy - cxy * cxy;
    const double ux = dx - mx, uy = dy - my;
    const double quad = (ux * (cyy * ux - cxy * uy) + uy * (cxx * uy - cxy * ux)) / det;
    const double two_pi = 2.0 * 3.14159265358979323846;
    return 0.5 * quad + 0.5 * std::log(two_pi * two_pi * det);
}

// Every joint configuration of a candidate-list model, with its energy
// computed independently of the DP code.
struct JointState {
    std::vector<int> choice;  // candidate index per cluster
    double energy = 0.0;
    double log_prob = 0.0;  // sum of -chamfer plus edge log densities
};

inline std::vector<JointState> enumerate_joint(const dsm::DeformableStrokeModel& model,
                                               const dsm::CandidateSet& cands) {
    const size_t n = model.clusters.size();
    std::vector<JointState> states;
    std::vector<int> choice(n, 0);
    while (true) {
        JointState st;
        st.choice = choice;
        for (size_t c = 0; c < n; ++c) {
            const auto& cand = cands.per_cluster[c][static_cast<size_t>(choice[c])];
            st.energy += cand.chamfer;
            st.log_prob += -cand.chamfer;
        }
        for (size_t e = 0; e < model.edges.size(); ++e) {
            const auto& [i, j] = model.edges[e];
            const auto& g = model.offsets[e];
            const auto& ci = cands.per_cluster[static_cast<size_t>(i)][static_cast<size_t>(choice[static_cast<size_t>(i)])];
            const auto& cj = cands.per_cluster[static_cast<size_t>(j)][static_cast<size_t>(choice[static_cast<size_t>(j)])];
            const double nld = gaussian_neg_log(ci.location.x - cj.location.x,
                                                ci.location.y - cj.location.y, g.mean.x, g.mean.y,
                                                g.cov_xx, g.cov_xy, g.cov_yy);
            st.energy += nld;
            st.log_prob += -nld;
        }
        states.push_back(std::move(st));
        // advance the mixed-radix counter
        size_t pos = 0;
        while (pos < n) {
            if (++choice[pos] < static_cast<int>(cands.per_cluster[pos].size())) break;
            choice[pos] = 0;
            ++pos;
        }
        if (pos == n) break;
    }
    return states;
}

// log sum over all joint states consistent with a fixed root candidate.
inline double root_marginal_by_enumeration(const dsm::DeformableStrokeModel& model,
                                           const dsm::CandidateSet& cands, int root_choice) {
    const auto states = enumerate_joint(model, cands);
    double mx = -std::numeric_limits<double>::infinity();
    std::vector<double> terms;
    for (const auto& st : states)
        if (st.choice[static_cast<size_t>(model.root)] == root_choice) {
            terms.push_back(st.log_prob);
            mx = std::max(mx, st.log_prob);
        }
    if (terms.empty() || !std::isfinite(mx)) return -std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (double t : terms) s += std::exp(t - mx);
    return mx + std::log(s);
}

// Normalized-cut value of a 2-partition (indicator: true = side A).
inline double ncut_value(const std::vector<std::vector<double>>& a, const std::vector<bool>& in_a) {
    const size_t n = a.size();
    double cut = 0.0, assoc_a = 0.0, assoc_b = 0.0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (in_a[i] != in_a[j]) cut += a[i][j];
            if (in_a[i]) assoc_a += a[i][j];
            else assoc_b += a[i][j];
        }
    cut /= 2.0;  // each cross pair counted twice
    if (assoc_a <= 0.0 || assoc_b <= 0.0) return std::numeric_limits<double>::infinity();
    return cut / assoc_a + cut / assoc_b;
}

} // namespace oracle
