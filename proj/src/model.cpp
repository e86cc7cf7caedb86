#include "dsm/model.hpp"

#include <cmath>
#include <numbers>

#include "dsm/errors.hpp"

namespace dsm {

double Gaussian2::mahalanobis_sq(Point2 d) const {
    const double dx = d.x - mean.x;
    const double dy = d.y - mean.y;
    const double de = det();
    // closed-form 2x2 inverse
    const double ixx = cov_yy / de;
    const double ixy = -cov_xy / de;
    const double iyy = cov_xx / de;
    return dx * dx * ixx + 2.0 * dx * dy * ixy + dy * dy * iyy;
}

double Gaussian2::neg_log_density(Point2 d) const {
    const double two_pi = 2.0 * std::numbers::pi;
    return 0.5 * mahalanobis_sq(d) + 0.5 * std::log(two_pi * two_pi * det());
}

void validate_model(const DeformableStrokeModel& m) {
    const int n = static_cast<int>(m.clusters.size());
    if (n < 1) throw InvalidModel("model has no clusters");
    if (m.canvas_width <= 0.0 || m.canvas_height <= 0.0)
        throw InvalidModel("model canvas dimensions must be positive");
    if (m.root < 0 || m.root >= n) throw InvalidModel("model root index out of range");
    for (int i = 0; i < n; ++i)
        if (m.clusters[static_cast<size_t>(i)].exemplars.empty())
            throw InvalidModel("cluster " + std::to_string(i) + " has no exemplars");
    if (n == 1) {
        if (!m.edges.empty()) throw InvalidModel("single-cluster model must have no edges");
        return;
    }
    if (static_cast<int>(m.edges.size()) != n - 1)
        throw InvalidModel("edge count must equal clusters - 1");
    if (m.offsets.size() != m.edges.size())
        throw InvalidModel("offsets must parallel edges");

    // connectivity check via union-find; n-1 edges + connected => tree
    std::vector<int> parent(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) parent[static_cast<size_t>(i)] = i;
    auto find = [&](int a) {
        while (parent[static_cast<size_t>(a)] != a) {
            parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
            a = parent[static_cast<size_t>(a)];
        }
        return a;
    };
    for (const auto& [i, j] : m.edges) {
        if (i < 0 || i >= n || j < 0 || j >= n || i == j)
            throw InvalidModel("edge endpoints out of range");
        int ri = find(i), rj = find(j);
        if (ri == rj) throw InvalidModel("edges contain a cycle");
        parent[static_cast<size_t>(ri)] = rj;
    }
    for (const auto& g : m.offsets)
        if (!g.is_spd()) throw InvalidModel("offset covariance must be symmetric positive definite");
}

} // namespace dsm
