#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dsm/errors.hpp"
#include "dsm/matching.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dsm;
using fixtures::line_stroke;
using fixtures::make_stroke;

TEST_CASE("mhd basics") {
    const std::vector<Point2> a{{0, 0}, {1, 0}};
    CHECK(mhd(a, a) == doctest::Approx(0.0));
    // brute-force nearest-neighbor means: both directed means equal 1
    CHECK(mhd(a, {{0, 1}, {1, 1}}) == doctest::Approx(1.0));
    CHECK(mhd({{0, 0}}, {{3, 4}}) == doctest::Approx(5.0));
    CHECK_THROWS_AS(mhd({}, a), InvalidArgument);

    SUBCASE("symmetric, zero iff coincident") {
        std::mt19937 rng(23);
        std::uniform_real_distribution<double> u(0.0, 50.0);
        for (int t = 0; t < 25; ++t) {
            std::vector<Point2> p, q;
            for (int i = 0; i < 6; ++i) p.push_back({u(rng), u(rng)});
            for (int i = 0; i < 4; ++i) q.push_back({u(rng), u(rng)});
            CHECK(mhd(p, q) == doctest::Approx(mhd(q, p)));
            CHECK(mhd(p, q) > 0.0);
            CHECK(mhd(p, p) == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("shape context invariances") {
    const Stroke s = fixtures::arc_stroke(0, 0, {50, 50}, 20, 0.3, 2.4);
    const auto d = shape_context(s, 20, 5, 12);

    SUBCASE("histograms count every other sample") {
        for (const auto& h : d.histograms) {
            double sum = 0.0;
            for (double v : h) sum += v;
            CHECK(sum == doctest::Approx(19.0));
        }
    }
    SUBCASE("identical strokes give identical descriptors") {
        const auto d2 = shape_context(s, 20, 5, 12);
        CHECK(sc_cost(d, d2) == doctest::Approx(0.0));
    }
    SUBCASE("translation invariance") {
        Stroke t = s;
        for (auto& p : t.points) p = p + Point2{31.5, -7.25};
        CHECK(sc_cost(d, shape_context(t, 20, 5, 12)) == doctest::Approx(0.0));
    }
    SUBCASE("scale invariance via mean-distance normalization") {
        Stroke t = s;
        for (auto& p : t.points) p = 2.0 * p;
        CHECK(sc_cost(d, shape_context(t, 20, 5, 12)) == doctest::Approx(0.0).epsilon(1e-9));
    }
    CHECK_THROWS_AS(shape_context(make_stroke(0, 0, {{1, 1}, {1, 1}}), 10, 5, 12), InvalidArgument);
}

TEST_CASE("sc_cost equals the brute-force assignment optimum") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    for (int t = 0; t < 10; ++t) {
        std::vector<Point2> p1, p2;
        for (int i = 0; i < 5; ++i) {
            p1.push_back({u(rng), u(rng)});
            p2.push_back({u(rng), u(rng)});
        }
        const auto d1 = shape_context(p1, 3, 4, 8);
        const auto d2 = shape_context(p2, 3, 4, 8);
        std::vector<std::vector<double>> cost(3, std::vector<double>(3, 0.0));
        for (size_t i = 0; i < 3; ++i)
            for (size_t j = 0; j < 3; ++j) cost[i][j] = chi_square(d1.histograms[i], d2.histograms[j]);
        const double expect = oracle::brute_force_assignment(cost) / 3.0;
        CHECK(sc_cost(d1, d2) == doctest::Approx(expect).epsilon(1e-12));
        CHECK(sc_cost(d1, d2) == doctest::Approx(sc_cost(d2, d1)));
    }
    SUBCASE("mismatched geometry is rejected") {
        const auto d1 = shape_context(std::vector<Point2>{{0, 0}, {1, 0}}, 5, 5, 12);
        const auto d2 = shape_context(std::vector<Point2>{{0, 0}, {1, 0}}, 5, 4, 12);
        CHECK_THROWS_AS(sc_cost(d1, d2), InvalidArgument);
    }
}

TEST_CASE("solve_assignment matches exhaustive search on random matrices") {
    std::mt19937 rng(97);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int t = 0; t < 50; ++t) {
        const size_t n = 1 + static_cast<size_t>(t % 6);
        std::vector<std::vector<double>> cost(n, std::vector<double>(n));
        for (auto& row : cost)
            for (auto& v : row) v = u(rng);
        double total = 0.0;
        const auto assign = solve_assignment(cost, &total);
        std::vector<char> used(n, 0);
        for (int j : assign) {
            CHECK(!used[static_cast<size_t>(j)]);
            used[static_cast<size_t>(j)] = 1;
        }
        CHECK(total == doctest::Approx(oracle::brute_force_assignment(cost)).epsilon(1e-12));
    }
}

TEST_CASE("build_odf matches the brute-force distance transform") {
    SUBCASE("single point field") {
        auto odf = build_odf({{{7, 5}, 0.1}}, 16, 16, 1);
        CHECK(odf.at(0, 7, 5) == doctest::Approx(0.0));
        CHECK(odf.at(0, 10, 9) == doctest::Approx(5.0));
    }
    SUBCASE("orientation binning splits channels") {
        auto odf = build_odf({{{2, 2}, 0.0}, {{9, 9}, std::numbers::pi / 2.0}}, 12, 12, 2);
        CHECK(odf.at(0, 2, 2) == doctest::Approx(0.0));
        CHECK(odf.at(0, 9, 9) > 0.0);
        CHECK(odf.at(1, 9, 9) == doctest::Approx(0.0));
        CHECK(odf.at(1, 2, 2) > 0.0);
    }
    SUBCASE("5x5 exhaustive check") {
        auto odf = build_odf({{{1, 3}, 0.2}}, 5, 5, 1);
        const auto brute = oracle::brute_force_distance_transform({{1, 3}}, 5, 5);
        for (int y = 0; y < 5; ++y)
            for (int x = 0; x < 5; ++x)
                CHECK(odf.at(0, x, y) == doctest::Approx(
                                             brute[static_cast<size_t>(y) * 5 + static_cast<size_t>(x)])
                                             .epsilon(1e-12));
    }
    SUBCASE("random rasters, multiple channels, exact") {
        std::mt19937 rng(2024);
        for (int t = 0; t < 20; ++t) {
            std::uniform_int_distribution<int> dim(2, 40), nch(1, 4), cnt(0, 30);
            const int w = dim(rng), h = dim(rng), channels = nch(rng);
            std::uniform_int_distribution<int> px(0, w - 1), py(0, h - 1);
            std::uniform_real_distribution<double> ori(0.0, std::numbers::pi);
            std::vector<OrientedEdgePoint> pts;
            const int n = cnt(rng);
            for (int i = 0; i < n; ++i)
                pts.push_back({{static_cast<double>(px(rng)), static_cast<double>(py(rng))}, ori(rng)});
            const auto odf = build_odf(pts, w, h, channels);
            for (int c = 0; c < channels; ++c) {
                std::vector<std::pair<int, int>> chan_pts;
                for (const auto& ep : pts)
                    if (orientation_channel(ep.orientation, channels) == c)
                        chan_pts.emplace_back(static_cast<int>(std::lround(ep.p.x)),
                                              static_cast<int>(std::lround(ep.p.y)));
                const auto brute = oracle::brute_force_distance_transform(chan_pts, w, h);
                for (int y = 0; y < h; ++y)
                    for (int x = 0; x < w; ++x) {
                        const double got = odf.at(c, x, y);
                        const double want =
                            brute[static_cast<size_t>(y) * static_cast<size_t>(w) + static_cast<size_t>(x)];
                        CHECK(std::abs(got - want) <= 1e-9);
                    }
            }
        }
    }
    CHECK_THROWS_AS(build_odf({{{-3, 0}, 0.0}}, 8, 8, 1), InvalidArgument);
}

TEST_CASE("chamfer_cost reads the field at translated template points") {
    // straight horizontal edge at y=10
    std::vector<OrientedEdgePoint> edge;
    for (int x = 2; x <= 18; ++x) edge.push_back({{static_cast<double>(x), 10.0}, 0.0});
    const auto odf = build_odf(edge, 24, 24, 4);

    const Stroke tpl = line_stroke(0, 0, {0, 0}, {10, 0}, 6);
    SUBCASE("exact placement scores zero") {
        CHECK(chamfer_cost(tpl, {10, 10}, odf, 2.0) == doctest::Approx(0.0));
    }
    SUBCASE("single-point lookup at known distance") {
        auto single = build_odf({{{5, 5}, 0.0}}, 24, 24, 1);
        const auto t = make_chamfer_template(line_stroke(0, 0, {0, 0}, {0.4, 0}, 2), 10.0, 1);
        // both template points round onto the anchor pixel
        CHECK(chamfer_cost(t, {10, 5}, single) == doctest::Approx(5.0));
    }
    SUBCASE("two-point template averages two lookups") {
        auto single = build_odf({{{5, 5}, 0.0}}, 24, 24, 1);
        const Stroke two = line_stroke(0, 0, {0, 0}, {4, 0}, 2);
        // anchor at (2,0): points land at x-2 and x+2
        const double expect = (single.at(0, 8, 5) + single.at(0, 12, 5)) / 2.0;
        CHECK(chamfer_cost(two, {10, 5}, single, 4.0) == doctest::Approx(expect));
    }
    SUBCASE("off-raster points pay the penalty") {
        auto single = build_odf({{{5, 5}, 0.0}}, 24, 24, 1);
        const double c = chamfer_cost(make_chamfer_template(line_stroke(0, 0, {0, 0}, {0.4, 0}, 2), 10.0, 1),
                                      {-50, 5}, single);
        CHECK(c == doctest::Approx(single.oob_penalty));
    }
    SUBCASE("adding edge points never increases the cost") {
        std::mt19937 rng(8);
        std::uniform_int_distribution<int> px(0, 23);
        std::uniform_real_distribution<double> ori(0.0, std::numbers::pi);
        auto pts = edge;
        auto prev = chamfer_cost(tpl, {12, 14}, build_odf(pts, 24, 24, 4), 2.0);
        for (int i = 0; i < 10; ++i) {
            pts.push_back({{static_cast<double>(px(rng)), static_cast<double>(px(rng))}, ori(rng)});
            const double cur = chamfer_cost(tpl, {12, 14}, build_odf(pts, 24, 24, 4), 2.0);
            CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("fdcm_candidates equals a per-pixel scan and sorts by cost") {
    std::vector<OrientedEdgePoint> edge;
    for (int x = 6; x <= 14; ++x) edge.push_back({{static_cast<double>(x), 20.0}, 0.0});
    const auto odf = build_odf(edge, 32, 32, 4);
    const auto tpl = make_chamfer_template(line_stroke(0, 0, {0, 0}, {8, 0}, 5), 2.0, 4);

    SUBCASE("the true location is reported with zero cost") {
        const auto hits = fdcm_candidates(tpl, odf, {0, 0, 31, 31}, 0.5);
        REQUIRE(!hits.empty());
        CHECK(hits[0].second == doctest::Approx(0.0));
        CHECK(hits[0].first.x == doctest::Approx(10.0));
        CHECK(hits[0].first.y == doctest::Approx(20.0));
    }
    SUBCASE("impossible threshold gives an empty list") {
        auto noisy = edge;
        noisy.push_back({{3.0, 3.0}, 1.2});
        const auto odf2 = build_odf(noisy, 32, 32, 4);
        const auto tpl2 = make_chamfer_template(fixtures::arc_stroke(0, 0, {0, 0}, 6, 0, 2.0), 2.0, 4);
        CHECK(fdcm_candidates(tpl2, odf2, {0, 0, 31, 31}, 0.0).empty());
    }
    SUBCASE("matches the brute-force region scan") {
        const Rect region{4.0, 12.0, 20.0, 16.0};
        const auto hits = fdcm_candidates(tpl, odf, region, 6.0);
        size_t count = 0;
        for (int y = 12; y <= 28; ++y)
            for (int x = 4; x <= 24; ++x) {
                const double c =
                    chamfer_cost(tpl, {static_cast<double>(x), static_cast<double>(y)}, odf);
                if (c <= 6.0) ++count;
            }
        CHECK(hits.size() == count);
        for (size_t i = 1; i < hits.size(); ++i) CHECK(hits[i - 1].second <= hits[i].second);
    }
    SUBCASE("result is independent of edge point order and thread count") {
        auto reversed = edge;
        std::reverse(reversed.begin(), reversed.end());
        const auto odf2 = build_odf(reversed, 32, 32, 4);
        const auto a = fdcm_candidates(tpl, odf, {0, 0, 31, 31}, 5.0, 1, 1);
        const auto b = fdcm_candidates(tpl, odf2, {0, 0, 31, 31}, 5.0, 1, 4);
        REQUIRE(a.size() == b.size());
        for (size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].first.x == b[i].first.x);
            CHECK(a[i].first.y == b[i].first.y);
            CHECK(a[i].second == doctest::Approx(b[i].second));
        }
    }
}
