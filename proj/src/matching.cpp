#include "dsm/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dsm/errors.hpp"
#include "parallel.hpp"

namespace dsm {

double mhd(const std::vector<Point2>& a, const std::vector<Point2>& b) {
    if (a.empty() || b.empty()) throw InvalidArgument("mhd requires non-empty point sets");
    auto directed = [](const std::vector<Point2>& from, const std::vector<Point2>& to) {
        double sum = 0.0;
        for (const auto& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : to) best = std::min(best, distance(p, q));
            sum += best;
        }
        return sum / static_cast<double>(from.size());
    };
    return std::max(directed(a, b), directed(b, a));
}

ShapeContextDescriptor shape_context(const std::vector<Point2>& pts, int n_samples,
                                     int radial_bins, int angle_bins) {
    if (n_samples < 2) throw InvalidArgument("shape context needs n_samples >= 2");
    if (radial_bins < 1 || angle_bins < 1) throw InvalidArgument("shape context bins must be >= 1");
    if (pts.size() < 2 || polyline_length(pts) <= 0.0)
        throw InvalidArgument("shape context on degenerate stroke");

    ShapeContextDescriptor d;
    d.radial_bins = radial_bins;
    d.angle_bins = angle_bins;
    d.sample_points = sample_polyline(pts, n_samples);

    const auto& s = d.sample_points;
    double mean_dist = 0.0;
    long pair_count = 0;
    for (size_t i = 0; i < s.size(); ++i)
        for (size_t j = i + 1; j < s.size(); ++j) {
            mean_dist += distance(s[i], s[j]);
            ++pair_count;
        }
    mean_dist /= static_cast<double>(pair_count);

    // log-spaced radial edges from r/8 to 2r (Belongie geometry); distances
    // beyond the outer edge fall into the last bin so every neighbor is
    // counted and each histogram sums to n_samples - 1.
    const double r_inner = 0.125, r_outer = 2.0;
    std::vector<double> edges(static_cast<size_t>(radial_bins));
    for (int k = 0; k < radial_bins; ++k)
        edges[static_cast<size_t>(k)] =
            radial_bins > 1 ? r_inner * std::pow(r_outer / r_inner,
                                                 static_cast<double>(k) / (radial_bins - 1))
                            : r_outer;

    const double two_pi = 2.0 * std::numbers::pi;
    d.histograms.assign(s.size(),
                        std::vector<double>(static_cast<size_t>(radial_bins * angle_bins), 0.0));
    for (size_t i = 0; i < s.size(); ++i) {
        for (size_t j = 0; j < s.size(); ++j) {
            if (i == j) continue;
            const double r = distance(s[i], s[j]) / mean_dist;
            int rb = 0;
            while (rb < radial_bins - 1 && edges[static_cast<size_t>(rb)] < r) ++rb;
            if (rb == radial_bins - 1 && radial_bins > 1 &&
                edges[static_cast<size_t>(radial_bins - 1)] < r)
                rb = radial_bins - 1;  // clamp distances beyond the outer edge
            double ang = std::atan2(s[j].y - s[i].y, s[j].x - s[i].x);
            if (ang < 0.0) ang += two_pi;
            int ab = std::min(angle_bins - 1, static_cast<int>(ang / (two_pi / angle_bins)));
            d.histograms[i][static_cast<size_t>(rb * angle_bins + ab)] += 1.0;
        }
    }
    return d;
}

ShapeContextDescriptor shape_context(const Stroke& s, int n_samples, int radial_bins,
                                     int angle_bins) {
    return shape_context(s.points, n_samples, radial_bins, angle_bins);
}

double chi_square(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw InvalidArgument("chi_square on mismatched histograms");
    double cost = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double s = a[i] + b[i];
        if (s > 0.0) cost += (a[i] - b[i]) * (a[i] - b[i]) / s;
    }
    return 0.5 * cost;
}

std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost,
                                  double* total_cost) {
    const int n = static_cast<int>(cost.size());
    if (n == 0) {
        if (total_cost) *total_cost = 0.0;
        return {};
    }
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<size_t>(n) + 1, 0.0), v(static_cast<size_t>(n) + 1, 0.0);
    std::vector<int> p(static_cast<size_t>(n) + 1, 0), way(static_cast<size_t>(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<size_t>(n) + 1, inf);
        std::vector<char> used(static_cast<size_t>(n) + 1, 0);
        do {
            used[static_cast<size_t>(j0)] = 1;
            const int i0 = p[static_cast<size_t>(j0)];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) continue;
                double cur = cost[static_cast<size_t>(i0 - 1)][static_cast<size_t>(j - 1)] -
                             u[static_cast<size_t>(i0)] - v[static_cast<size_t>(j)];
                if (cur < minv[static_cast<size_t>(j)]) {
                    minv[static_cast<size_t>(j)] = cur;
                    way[static_cast<size_t>(j)] = j0;
                }
                if (minv[static_cast<size_t>(j)] < delta) {
                    delta = minv[static_cast<size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) {
                    u[static_cast<size_t>(p[static_cast<size_t>(j)])] += delta;
                    v[static_cast<size_t>(j)] -= delta;
                } else {
                    minv[static_cast<size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<size_t>(j0)] != 0);
        do {
            int j1 = way[static_cast<size_t>(j0)];
            p[static_cast<size_t>(j0)] = p[static_cast<size_t>(j1)];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> assignment(static_cast<size_t>(n), -1);
    for (int j = 1; j <= n; ++j)
        if (p[static_cast<size_t>(j)] > 0) assignment[static_cast<size_t>(p[static_cast<size_t>(j)] - 1)] = j - 1;
    if (total_cost) {
        double t = 0.0;
        for (int i = 0; i < n; ++i)
            t += cost[static_cast<size_t>(i)][static_cast<size_t>(assignment[static_cast<size_t>(i)])];
        *total_cost = t;
    }
    return assignment;
}

double sc_cost(const ShapeContextDescriptor& d1, const ShapeContextDescriptor& d2) {
    if (d1.radial_bins != d2.radial_bins || d1.angle_bins != d2.angle_bins)
        throw InvalidArgument("sc_cost on mismatched bin geometry");
    if (d1.histograms.size() != d2.histograms.size())
        throw InvalidArgument("sc_cost on mismatched sample counts");
    const size_t n = d1.histograms.size();
    if (n == 0) return 0.0;
    std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) cost[i][j] = chi_square(d1.histograms[i], d2.histograms[j]);
    double total = 0.0;
    solve_assignment(cost, &total);
    return total / static_cast<double>(n);
}

double normalize_orientation(double theta) {
    const double pi = std::numbers::pi;
    double t = std::fmod(theta, pi);
    if (t < 0.0) t += pi;
    if (t >= pi) t = 0.0;
    return t;
}

int orientation_channel(double orientation, int n_channels) {
    const double t = normalize_orientation(orientation);
    int c = static_cast<int>(t / (std::numbers::pi / n_channels));
    return std::min(c, n_channels - 1);
}

namespace {

// Meijster's exact squared Euclidean distance transform; integer arithmetic
// throughout, so results match a brute-force nearest-pixel scan exactly.
void edt_squared(const std::vector<char>& edge, int w, int h, std::vector<double>& out) {
    const long long sentinel = w + h;
    std::vector<long long> g(static_cast<size_t>(w) * static_cast<size_t>(h));
    for (int x = 0; x < w; ++x) {
        g[static_cast<size_t>(x)] = edge[static_cast<size_t>(x)] ? 0 : sentinel;
        for (int y = 1; y < h; ++y) {
            size_t idx = static_cast<size_t>(y) * static_cast<size_t>(w) + static_cast<size_t>(x);
            g[idx] = edge[idx] ? 0 : std::min(sentinel, g[idx - static_cast<size_t>(w)] + 1);
        }
        for (int y = h - 2; y >= 0; --y) {
            size_t idx = static_cast<size_t>(y) * static_cast<size_t>(w) + static_cast<size_t>(x);
            g[idx] = std::min(g[idx], g[idx + static_cast<size_t>(w)] + 1);
        }
    }

    std::vector<int> s(static_cast<size_t>(w)), t(static_cast<size_t>(w));
    for (int y = 0; y < h; ++y) {
        const long long* gy = &g[static_cast<size_t>(y) * static_cast<size_t>(w)];
        auto f = [&](long long x, long long i) { return (x - i) * (x - i) + gy[i] * gy[i]; };
        auto sep = [&](long long i, long long u) {
            return (u * u - i * i + gy[u] * gy[u] - gy[i] * gy[i]) / (2 * (u - i));
        };
        int q = 0;
        s[0] = 0;
        t[0] = 0;
        for (int u = 1; u < w; ++u) {
            while (q >= 0 && f(t[static_cast<size_t>(q)], s[static_cast<size_t>(q)]) > f(t[static_cast<size_t>(q)], u))
                --q;
            if (q < 0) {
                q = 0;
                s[0] = u;
            } else {
                long long wpos = 1 + sep(s[static_cast<size_t>(q)], u);
                if (wpos < w) {
                    ++q;
                    s[static_cast<size_t>(q)] = u;
                    t[static_cast<size_t>(q)] = static_cast<int>(wpos);
                }
            }
        }
        double* row = &out[static_cast<size_t>(y) * static_cast<size_t>(w)];
        for (int u = w - 1; u >= 0; --u) {
            row[u] = std::sqrt(static_cast<double>(f(u, s[static_cast<size_t>(q)])));
            if (u == t[static_cast<size_t>(q)]) --q;
        }
    }
}

} // namespace

OrientedDistanceField build_odf(const std::vector<OrientedEdgePoint>& edge_points, int width,
                                int height, int n_channels, double oob_penalty) {
    if (width < 1 || height < 1) throw InvalidArgument("build_odf raster must be non-empty");
    if (n_channels < 1) throw InvalidArgument("build_odf needs n_channels >= 1");
    OrientedDistanceField odf;
    odf.width = width;
    odf.height = height;
    odf.n_channels = n_channels;
    odf.edge_points = edge_points;
    const double diag = std::hypot(static_cast<double>(width), static_cast<double>(height));
    odf.oob_penalty = oob_penalty >= 0.0 ? oob_penalty : diag / 4.0;

    std::vector<std::vector<char>> masks(
        static_cast<size_t>(n_channels),
        std::vector<char>(static_cast<size_t>(width) * static_cast<size_t>(height), 0));
    std::vector<char> any(static_cast<size_t>(n_channels), 0);
    for (const auto& ep : edge_points) {
        const long px = std::lround(ep.p.x);
        const long py = std::lround(ep.p.y);
        if (px < 0 || px >= width || py < 0 || py >= height)
            throw InvalidArgument("edge point outside raster");
        const int c = orientation_channel(ep.orientation, n_channels);
        masks[static_cast<size_t>(c)][static_cast<size_t>(py) * static_cast<size_t>(width) +
                                      static_cast<size_t>(px)] = 1;
        any[static_cast<size_t>(c)] = 1;
    }

    odf.channels.assign(static_cast<size_t>(n_channels),
                        std::vector<double>(static_cast<size_t>(width) * static_cast<size_t>(height), diag));
    for (int c = 0; c < n_channels; ++c) {
        if (!any[static_cast<size_t>(c)]) continue;  // empty channel keeps the diagonal fill
        edt_squared(masks[static_cast<size_t>(c)], width, height, odf.channels[static_cast<size_t>(c)]);
    }
    return odf;
}

ChamferTemplate make_chamfer_template(const std::vector<std::vector<Point2>>& polylines,
                                      double spacing, int n_channels) {
    if (spacing <= 0.0) throw InvalidArgument("template spacing must be > 0");
    std::vector<Point2> pts;
    std::vector<double> orients;
    for (const auto& pl : polylines) {
        if (pl.size() < 2) continue;
        auto rs = resample_polyline(pl, spacing);
        for (size_t i = 0; i < rs.size(); ++i) {
            const size_t prev = i > 0 ? i - 1 : 0;
            const size_t next = i + 1 < rs.size() ? i + 1 : rs.size() - 1;
            Point2 chord = rs[next] - rs[prev];
            double theta = (std::abs(chord.x) + std::abs(chord.y)) > 1e-12
                               ? std::atan2(chord.y, chord.x)
                               : (orients.empty() ? 0.0 : orients.back());
            pts.push_back(rs[i]);
            orients.push_back(normalize_orientation(theta));
        }
    }
    if (pts.empty()) throw InvalidArgument("degenerate chamfer template");
    ChamferTemplate tpl;
    tpl.anchor = centroid(pts);
    tpl.points.reserve(pts.size());
    for (size_t i = 0; i < pts.size(); ++i)
        tpl.points.push_back({static_cast<int>(std::lround(pts[i].x - tpl.anchor.x)),
                              static_cast<int>(std::lround(pts[i].y - tpl.anchor.y)),
                              orientation_channel(orients[i], n_channels)});
    return tpl;
}

ChamferTemplate make_chamfer_template(const Stroke& s, double spacing, int n_channels) {
    return make_chamfer_template(std::vector<std::vector<Point2>>{s.points}, spacing, n_channels);
}

double chamfer_cost(const ChamferTemplate& tpl, Point2 location,
                    const OrientedDistanceField& odf) {
    if (tpl.points.empty()) throw InvalidArgument("empty chamfer template");
    const int cx = static_cast<int>(std::lround(location.x));
    const int cy = static_cast<int>(std::lround(location.y));
    double sum = 0.0;
    for (const auto& tp : tpl.points) {
        const int x = cx + tp.dx;
        const int y = cy + tp.dy;
        sum += odf.inside(x, y) ? odf.at(tp.channel, x, y) : odf.oob_penalty;
    }
    return sum / static_cast<double>(tpl.points.size());
}

double chamfer_cost(const Stroke& s, Point2 location, const OrientedDistanceField& odf,
                    double spacing) {
    return chamfer_cost(make_chamfer_template(s, spacing, odf.n_channels), location, odf);
}

std::vector<std::pair<Point2, double>> fdcm_candidates(const ChamferTemplate& tpl,
                                                       const OrientedDistanceField& odf,
                                                       const Rect& region, double threshold,
                                                       int stride, int threads) {
    if (stride < 1) throw InvalidArgument("fdcm stride must be >= 1");
    const int x0 = std::max(0, static_cast<int>(std::ceil(region.x - 1e-9)));
    const int y0 = std::max(0, static_cast<int>(std::ceil(region.y - 1e-9)));
    const int x1 = std::min(odf.width - 1, static_cast<int>(std::floor(region.x + region.w + 1e-9)));
    const int y1 = std::min(odf.height - 1, static_cast<int>(std::floor(region.y + region.h + 1e-9)));
    if (x0 > x1 || y0 > y1) return {};

    const int n_rows = (y1 - y0) / stride + 1;
    std::vector<std::vector<std::pair<Point2, double>>> rows(static_cast<size_t>(n_rows));
    parallel_for(n_rows, threads, [&](int r) {
        const int y = y0 + r * stride;
        auto& out = rows[static_cast<size_t>(r)];
        for (int x = x0; x <= x1; x += stride) {
            double c = chamfer_cost(tpl, Point2{static_cast<double>(x), static_cast<double>(y)}, odf);
            if (c <= threshold)
                out.emplace_back(Point2{static_cast<double>(x), static_cast<double>(y)}, c);
        }
    });

    std::vector<std::pair<Point2, double>> all;
    for (auto& r : rows) all.insert(all.end(), r.begin(), r.end());
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second < b.second;
        if (a.first.y != b.first.y) return a.first.y < b.first.y;
        return a.first.x < b.first.x;
    });
    return all;
}

std::vector<std::pair<Point2, double>> fdcm_candidates(const Stroke& s,
                                                       const OrientedDistanceField& odf,
                                                       const Rect& region, double threshold,
                                                       double spacing) {
    return fdcm_candidates(make_chamfer_template(s, spacing, odf.n_channels), odf, region,
                           threshold);
}

} // namespace dsm
