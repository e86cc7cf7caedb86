#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "dsm/errors.hpp"
#include "dsm/learning.hpp"

namespace dsm {

namespace {

// Farthest-first seeding from the maximally separated row pair. The seeds
// depend only on pairwise distances, so permuting the input items (or
// flipping eigenvector signs) yields the same partition.
std::vector<int> seed_centers(const Eigen::MatrixXd& rows, int k) {
    const int n = static_cast<int>(rows.rows());
    std::vector<int> centers;
    centers.reserve(static_cast<size_t>(k));
    int a = 0, b = std::min(1, n - 1);
    double best = -1.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double d = (rows.row(i) - rows.row(j)).squaredNorm();
            if (d > best) {
                best = d;
                a = i;
                b = j;
            }
        }
    centers.push_back(a);
    if (k > 1) centers.push_back(b);
    while (static_cast<int>(centers.size()) < k) {
        int far = -1;
        double far_d = -1.0;
        for (int i = 0; i < n; ++i) {
            double d = std::numeric_limits<double>::infinity();
            for (int c : centers) d = std::min(d, (rows.row(i) - rows.row(c)).squaredNorm());
            if (d > far_d) {
                far_d = d;
                far = i;
            }
        }
        centers.push_back(far);
    }
    return centers;
}

} // namespace

std::vector<int> spectral_cluster(const std::vector<std::vector<double>>& affinity_matrix, int k,
                                  int kmeans_max_iters) {
    const int n = static_cast<int>(affinity_matrix.size());
    if (n == 0) throw InvalidArgument("spectral_cluster on empty affinity matrix");
    if (k < 1 || k > n) throw InvalidArgument("spectral_cluster needs 1 <= k <= n");
    if (k == 1) return std::vector<int>(static_cast<size_t>(n), 0);

    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(affinity_matrix[static_cast<size_t>(i)].size()) != n)
            throw InvalidArgument("affinity matrix must be square");
        for (int j = 0; j < n; ++j)
            A(i, j) = i == j ? 0.0 : affinity_matrix[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }

    // L_sym = D^-1/2 A D^-1/2; top-k eigenvectors, rows renormalized
    Eigen::VectorXd d = A.rowwise().sum();
    Eigen::VectorXd dinv(n);
    for (int i = 0; i < n; ++i) dinv(i) = d(i) > 0.0 ? 1.0 / std::sqrt(d(i)) : 0.0;
    Eigen::MatrixXd L = dinv.asDiagonal() * A * dinv.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(L);
    if (solver.info() != Eigen::Success) throw InvalidModel("eigendecomposition failed");
    // eigenvalues ascending: take the trailing k columns
    Eigen::MatrixXd embed = solver.eigenvectors().rightCols(k);
    for (int i = 0; i < n; ++i) {
        double rn = embed.row(i).norm();
        if (rn > 0.0) embed.row(i) /= rn;
    }

    std::vector<int> centers_idx = seed_centers(embed, k);
    Eigen::MatrixXd centers(k, k);
    for (int c = 0; c < k; ++c) centers.row(c) = embed.row(centers_idx[static_cast<size_t>(c)]);

    std::vector<int> assign(static_cast<size_t>(n), 0);
    for (int iter = 0; iter < kmeans_max_iters; ++iter) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best_c = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                double dd = (embed.row(i) - centers.row(c)).squaredNorm();
                if (dd < best_d) {
                    best_d = dd;
                    best_c = c;
                }
            }
            if (assign[static_cast<size_t>(i)] != best_c) {
                assign[static_cast<size_t>(i)] = best_c;
                changed = true;
            }
        }
        // refill any emptied cluster with the point farthest from its center
        std::vector<int> counts(static_cast<size_t>(k), 0);
        for (int i = 0; i < n; ++i) ++counts[static_cast<size_t>(assign[static_cast<size_t>(i)])];
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<size_t>(c)] > 0) continue;
            int far = -1;
            double far_d = -1.0;
            for (int i = 0; i < n; ++i) {
                if (counts[static_cast<size_t>(assign[static_cast<size_t>(i)])] <= 1) continue;
                double dd = (embed.row(i) - centers.row(assign[static_cast<size_t>(i)])).squaredNorm();
                if (dd > far_d) {
                    far_d = dd;
                    far = i;
                }
            }
            if (far >= 0) {
                --counts[static_cast<size_t>(assign[static_cast<size_t>(far)])];
                assign[static_cast<size_t>(far)] = c;
                ++counts[static_cast<size_t>(c)];
                changed = true;
            }
        }
        for (int c = 0; c < k; ++c) {
            Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(k);
            int cnt = 0;
            for (int i = 0; i < n; ++i)
                if (assign[static_cast<size_t>(i)] == c) {
                    mean += embed.row(i);
                    ++cnt;
                }
            if (cnt > 0) centers.row(c) = mean / static_cast<double>(cnt);
        }
        if (!changed) break;
    }

    // relabel clusters by their lowest member index so the output does not
    // depend on seeding internals
    std::vector<int> first(static_cast<size_t>(k), std::numeric_limits<int>::max());
    for (int i = 0; i < n; ++i)
        first[static_cast<size_t>(assign[static_cast<size_t>(i)])] =
            std::min(first[static_cast<size_t>(assign[static_cast<size_t>(i)])], i);
    std::vector<int> order(static_cast<size_t>(k));
    for (int c = 0; c < k; ++c) order[static_cast<size_t>(c)] = c;
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return first[static_cast<size_t>(x)] < first[static_cast<size_t>(y)]; });
    std::vector<int> relabel(static_cast<size_t>(k));
    for (int c = 0; c < k; ++c) relabel[static_cast<size_t>(order[static_cast<size_t>(c)])] = c;
    for (auto& a : assign) a = relabel[static_cast<size_t>(a)];
    return assign;
}

} // namespace dsm
