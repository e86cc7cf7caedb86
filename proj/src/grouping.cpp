#include "dsm/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dsm/errors.hpp"
#include "dsm/matching.hpp"
#include "parallel.hpp"

namespace dsm {

GroupingScales derive_grouping_scales(const Sketch& k, const GroupingParams& params) {
    GroupingScales s;
    const double n = static_cast<double>(k.strokes.size());
    const double eta_avg = params.eta_avg > 0.0 ? params.eta_avg : std::max(1.0, n);
    const double area = k.canvas_width * k.canvas_height;
    if (area <= 0.0) throw InvalidArgument("grouping needs a positive canvas area");
    s.eps_pro = std::sqrt(area / eta_avg) / 2.0;
    s.eps_con = s.eps_pro / 4.0;
    double tau = params.tau;
    if (tau <= 0.0) {
        double max_len = 0.0;
        for (const auto& st : k.strokes) max_len = std::max(max_len, stroke_length(st));
        tau = 0.9 * std::max(max_len, 1.0);
    }
    if (params.eta_sem < 1.0) throw InvalidArgument("eta_sem must be >= 1");
    s.lambda = tau * params.eta_sem;
    s.delta = n / eta_avg;
    return s;
}

double d_pro(const Stroke& a, const Stroke& b, double eps_pro, double sample_spacing) {
    if (eps_pro <= 0.0) throw InvalidArgument("eps_pro must be > 0");
    return mhd(resample_polyline(a.points, sample_spacing),
               resample_polyline(b.points, sample_spacing)) /
           eps_pro;
}

namespace {

// Inward point at `inset` arc distance from the given endpoint; strokes
// shorter than the inset use the far endpoint.
Point2 inward_point(const Stroke& s, bool from_front, double inset) {
    const double len = stroke_length(s);
    if (len <= inset) return from_front ? s.points.back() : s.points.front();
    return point_at_arc(s.points, from_front ? inset : len - inset);
}

double angle_between(Point2 u, Point2 v) {
    const double nu = norm(u), nv = norm(v);
    if (nu <= 1e-12 || nv <= 1e-12) return 0.0;
    return std::acos(std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0));
}

} // namespace

double d_con(const Stroke& a, const Stroke& b, double eps_con, double inset) {
    if (eps_con <= 0.0) throw InvalidArgument("eps_con must be > 0");
    const Point2 a_ends[2] = {a.points.front(), a.points.back()};
    const Point2 b_ends[2] = {b.points.front(), b.points.back()};
    int best_i = 0, best_j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double d = distance(a_ends[i], b_ends[j]);
            if (d < best) {
                best = d;
                best_i = i;
                best_j = j;
            }
        }
    const Point2 x = a_ends[best_i];
    const Point2 y = b_ends[best_j];
    const Point2 xp = inward_point(a, best_i == 0, inset);
    const Point2 yp = inward_point(b, best_j == 0, inset);
    const double theta = angle_between(x - xp, yp - y);
    return best * (1.0 + theta) / eps_con;
}

double d_len(double len_a, double len_b, double lambda) {
    if (lambda <= 0.0) throw InvalidArgument("lambda must be > 0");
    return (len_a + len_b) / lambda;
}

double b_sim(double k_cost, double sigma) {
    if (sigma <= 0.0) throw InvalidArgument("sigma must be > 0");
    return std::exp(-(k_cost * k_cost) / (sigma * sigma));
}

double f_temp(int order_a, int order_b, double delta, double mu_temp) {
    return std::abs(order_a - order_b) < delta ? 1.0 - mu_temp : 1.0 + mu_temp;
}

double f_mod(std::optional<int> label_a, std::optional<int> label_b, double mu_mod) {
    if (!label_a.has_value() || !label_b.has_value()) return 1.0;
    return *label_a == *label_b ? 1.0 - mu_mod : 1.0 + mu_mod;
}

double pair_error(double pro, double con, double len, double sim, double temp, double mod,
                  const GroupingParams& params) {
    return (params.w_pro * pro + params.w_con * con + params.w_len * len - params.w_sim * sim) *
           temp * mod;
}

std::vector<SemanticGroup> group_sketch(const Sketch& k, const GroupingParams& params,
                                        const std::unordered_map<int, int>* labels) {
    const int n = static_cast<int>(k.strokes.size());
    std::vector<SemanticGroup> out;
    if (n == 0) return out;
    if (n == 1) {
        out.push_back({0, {k.strokes[0].id}, stroke_length(k.strokes[0])});
        return out;
    }

    const GroupingScales sc = derive_grouping_scales(k, params);

    std::vector<double> lengths(static_cast<size_t>(n));
    std::vector<std::vector<Point2>> samples(static_cast<size_t>(n));
    std::vector<ShapeContextDescriptor> descs(static_cast<size_t>(n));
    parallel_for(n, params.threads, [&](int i) {
        const auto& s = k.strokes[static_cast<size_t>(i)];
        lengths[static_cast<size_t>(i)] = stroke_length(s);
        samples[static_cast<size_t>(i)] = resample_polyline(s.points, params.sample_spacing);
        descs[static_cast<size_t>(i)] =
            shape_context(s.points, params.sc_samples, params.sc_radial_bins, params.sc_angle_bins);
    });

    // static per-pair terms; only the length cost depends on group state
    struct PairTerms {
        double pro = 0, con = 0, sim = 0, temp = 0, mod = 0;
    };
    const int n_pairs = n * (n - 1) / 2;
    auto pair_index = [n](int i, int j) {  // i < j
        return i * n - i * (i + 1) / 2 + (j - i - 1);
    };
    std::vector<PairTerms> terms(static_cast<size_t>(n_pairs));
    std::vector<double> k_costs(static_cast<size_t>(n_pairs));
    parallel_for(n_pairs, params.threads, [&](int idx) {
        // invert the triangular index
        int i = 0;
        int rem = idx;
        while (rem >= n - 1 - i) {
            rem -= n - 1 - i;
            ++i;
        }
        const int j = i + 1 + rem;
        const auto& si = k.strokes[static_cast<size_t>(i)];
        const auto& sj = k.strokes[static_cast<size_t>(j)];
        auto& t = terms[static_cast<size_t>(idx)];
        t.pro = mhd(samples[static_cast<size_t>(i)], samples[static_cast<size_t>(j)]) / sc.eps_pro;
        t.con = d_con(si, sj, sc.eps_con, params.endpoint_inset);
        k_costs[static_cast<size_t>(idx)] =
            sc_cost(descs[static_cast<size_t>(i)], descs[static_cast<size_t>(j)]);
        t.temp = f_temp(si.order, sj.order, sc.delta, params.mu_temp);
        std::optional<int> li, lj;
        if (labels) {
            if (auto it = labels->find(si.id); it != labels->end()) li = it->second;
            if (auto it = labels->find(sj.id); it != labels->end()) lj = it->second;
        }
        t.mod = f_mod(li, lj, params.mu_mod);
    });

    double sigma = params.sigma;
    if (sigma <= 0.0) {
        std::vector<double> sorted_k = k_costs;
        std::sort(sorted_k.begin(), sorted_k.end());
        sigma = sorted_k[(sorted_k.size() - 1) / 2];  // lower median
        if (sigma <= 0.0) sigma = 1.0;
    }
    for (int idx = 0; idx < n_pairs; ++idx)
        terms[static_cast<size_t>(idx)].sim = b_sim(k_costs[static_cast<size_t>(idx)], sigma);

    // group state: -1 = ungrouped
    std::vector<int> group_of(static_cast<size_t>(n), -1);
    std::vector<double> group_len;
    auto effective_len = [&](int i) {
        const int g = group_of[static_cast<size_t>(i)];
        return g >= 0 ? group_len[static_cast<size_t>(g)] : lengths[static_cast<size_t>(i)];
    };

    std::vector<double> error(static_cast<size_t>(n_pairs));
    std::vector<char> consumed(static_cast<size_t>(n_pairs), 0);
    auto compute_error = [&](int i, int j) {
        const auto& t = terms[static_cast<size_t>(pair_index(i, j))];
        return pair_error(t.pro, t.con, d_len(effective_len(i), effective_len(j), sc.lambda),
                          t.sim, t.temp, t.mod, params);
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            error[static_cast<size_t>(pair_index(i, j))] = compute_error(i, j);

    while (true) {
        // global minimum; linear order makes ties resolve to the smallest (i, j)
        int best_i = -1, best_j = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const int idx = pair_index(i, j);
                if (consumed[static_cast<size_t>(idx)]) continue;
                if (error[static_cast<size_t>(idx)] < best) {
                    best = error[static_cast<size_t>(idx)];
                    best_i = i;
                    best_j = j;
                }
            }
        if (best_i < 0 || best >= params.h) break;
        consumed[static_cast<size_t>(pair_index(best_i, best_j))] = 1;

        const int ga = group_of[static_cast<size_t>(best_i)];
        const int gb = group_of[static_cast<size_t>(best_j)];
        int target = -1;
        if (ga < 0 && gb < 0) {
            target = static_cast<int>(group_len.size());
            group_len.push_back(lengths[static_cast<size_t>(best_i)] + lengths[static_cast<size_t>(best_j)]);
            group_of[static_cast<size_t>(best_i)] = target;
            group_of[static_cast<size_t>(best_j)] = target;
        } else if (ga >= 0 && gb >= 0) {
            continue;  // never merge two existing groups
        } else {
            target = std::max(ga, gb);
            const int newcomer = ga < 0 ? best_i : best_j;
            group_len[static_cast<size_t>(target)] += lengths[static_cast<size_t>(newcomer)];
            group_of[static_cast<size_t>(newcomer)] = target;
        }

        // the group's total length changed: refresh the length-dependent errors
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const int idx = pair_index(i, j);
                if (consumed[static_cast<size_t>(idx)]) continue;
                if (group_of[static_cast<size_t>(i)] == target || group_of[static_cast<size_t>(j)] == target)
                    error[static_cast<size_t>(idx)] = compute_error(i, j);
            }
    }

    // orphan strokes become singleton groups, in stroke order
    for (int i = 0; i < n; ++i)
        if (group_of[static_cast<size_t>(i)] < 0) {
            group_of[static_cast<size_t>(i)] = static_cast<int>(group_len.size());
            group_len.push_back(lengths[static_cast<size_t>(i)]);
        }

    out.resize(group_len.size());
    for (size_t g = 0; g < group_len.size(); ++g) out[g].group_id = static_cast<int>(g);
    for (int i = 0; i < n; ++i) {
        auto& g = out[static_cast<size_t>(group_of[static_cast<size_t>(i)])];
        g.members.push_back(k.strokes[static_cast<size_t>(i)].id);
        g.total_length += lengths[static_cast<size_t>(i)];
    }
    for (auto& g : out) std::sort(g.members.begin(), g.members.end());
    return out;
}

std::vector<int> group_assignment(const std::vector<SemanticGroup>& groups, int n_strokes) {
    std::vector<int> assign(static_cast<size_t>(n_strokes), -1);
    for (const auto& g : groups)
        for (int id : g.members)
            if (id >= 0 && id < n_strokes) assign[static_cast<size_t>(id)] = g.group_id;
    return assign;
}

} // namespace dsm
