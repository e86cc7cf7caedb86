#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "dsm/errors.hpp"
#include "dsm/grouping.hpp"
#include "dsm/matching.hpp"
#include "fixtures.hpp"

using namespace dsm;
using fixtures::line_stroke;
using fixtures::sketch_of;

TEST_CASE("d_pro normalizes MHD by eps_pro") {
    const Stroke a = line_stroke(0, 0, {0, 0}, {100, 0}, 26);
    CHECK(d_pro(a, a, 50.0) == doctest::Approx(0.0));

    // parallel copy offset by 25: every nearest distance is 25
    Stroke b = a;
    for (auto& p : b.points) p.y += 25.0;
    SUBCASE("formula arithmetic vs the mhd oracle") {
        // phi = 90000, eta_avg = 9 -> eps_pro = sqrt(10000)/2 = 50
        Sketch k = sketch_of(300, 300, {a, b});
        GroupingParams params;
        params.eta_avg = 9.0;
        const auto scales = derive_grouping_scales(k, params);
        CHECK(scales.eps_pro == doctest::Approx(50.0));
        CHECK(scales.eps_con == doctest::Approx(12.5));
        CHECK(d_pro(a, b, scales.eps_pro) == doctest::Approx(0.5));
    }
    SUBCASE("normalization fixed point") { CHECK(d_pro(a, b, 25.0) == doctest::Approx(1.0)); }
}

TEST_CASE("d_con facing-angle convention") {
    const Stroke a = line_stroke(0, 0, {0, 0}, {10, 0});
    SUBCASE("collinear continuation: gap 10, theta 0") {
        const Stroke b = line_stroke(1, 1, {20, 0}, {30, 0});
        CHECK(d_con(a, b, 10.0) == doctest::Approx(1.0));
    }
    SUBCASE("perpendicular continuation: 1 + pi/2") {
        const Stroke b = line_stroke(1, 1, {20, 0}, {20, 10});
        CHECK(d_con(a, b, 10.0) == doctest::Approx(1.0 + std::numbers::pi / 2.0));
    }
    SUBCASE("touching endpoints cost zero regardless of angle") {
        const Stroke b = line_stroke(1, 1, {10, 0}, {10, 10});
        CHECK(d_con(a, b, 10.0) == doctest::Approx(0.0));
    }
    SUBCASE("strokes shorter than the inset use the far endpoint") {
        const Stroke tiny = line_stroke(1, 1, {20, 0}, {24, 0});
        CHECK(d_con(a, tiny, 10.0) == doctest::Approx(1.0));  // still collinear
    }
}

TEST_CASE("d_len uses effective lengths over lambda") {
    CHECK(d_len(300, 500, 1500) == doctest::Approx(0.53333333));
    // group-length substitution: the grouped stroke contributes its group total
    CHECK(d_len(1200, 300, 1500) == doctest::Approx(1.0));
    SUBCASE("lambda = tau * eta_sem") {
        GroupingParams p;
        p.tau = 1500.0;
        p.eta_sem = 1.0;
        Sketch k = sketch_of(100, 100, {line_stroke(0, 0, {0, 0}, {10, 0})});
        CHECK(derive_grouping_scales(k, p).lambda == doctest::Approx(1500.0));
    }
}

TEST_CASE("b_sim similarity bonus") {
    CHECK(b_sim(0.0, 2.0) == doctest::Approx(1.0));
    CHECK(b_sim(2.0, 2.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(b_sim(4.0, 2.0) == doctest::Approx(std::exp(-4.0)));
}

TEST_CASE("f_temp order adjustment") {
    CHECK(f_temp(3, 4, 3.0, 0.33) == doctest::Approx(0.67));
    CHECK(f_temp(0, 5, 3.0, 0.33) == doctest::Approx(1.33));
    CHECK(f_temp(0, 5, 3.0, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("f_mod label adjustment") {
    CHECK(f_mod(1, 1, 0.33) == doctest::Approx(0.67));
    CHECK(f_mod(1, 2, 0.33) == doctest::Approx(1.33));
    CHECK(f_mod(std::nullopt, 2, 0.33) == doctest::Approx(1.0));
    CHECK(f_mod(std::nullopt, std::nullopt, 0.33) == doctest::Approx(1.0));
}

TEST_CASE("pair_error combines terms") {
    GroupingParams p;
    SUBCASE("all weights zero") {
        p.w_pro = p.w_con = p.w_len = p.w_sim = 0.0;
        CHECK(pair_error(3, 4, 5, 6, 0.67, 1.33, p) == doctest::Approx(0.0));
    }
    SUBCASE("reduces to the weighted cost sum") {
        p.w_sim = 0.0;
        CHECK(pair_error(0.5, 1.0, 0.5, 0.9, 1.0, 1.0, p) ==
              doctest::Approx(0.33 * (0.5 + 1.0 + 0.5)));
    }
    SUBCASE("term-by-term arithmetic") {
        CHECK(pair_error(0.5, 1.0, 0.5, 0.5, 0.67, 1.0, p) ==
              doctest::Approx(0.33 * (0.5 + 1.0 + 0.5 - 0.5) * 0.67));
    }
    SUBCASE("raising lambda never raises the error when w_len > 0") {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> u(0.0, 2.0);
        for (int t = 0; t < 50; ++t) {
            const double pro = u(rng), con = u(rng), sim = u(rng);
            const double pa = 200 + 100 * u(rng), pb = 200 + 100 * u(rng);
            double prev = std::numeric_limits<double>::infinity();
            for (double lambda : {500.0, 1500.0, 3000.0}) {
                const double e = pair_error(pro, con, d_len(pa, pb, lambda), sim, 0.67, 1.0, p);
                CHECK(e <= prev + 1e-12);
                prev = e;
            }
        }
    }
}

namespace {

GroupingParams plain_params() {
    // geometry-only setup used by the hand-traced merger cases
    GroupingParams p;
    p.w_sim = 0.0;
    p.mu_temp = 0.0;
    p.mu_mod = 0.0;
    p.tau = 5000.0;
    p.h = 1.0;
    return p;
}

} // namespace

TEST_CASE("group_sketch merges per the greedy algorithm") {
    SUBCASE("two nearby collinear strokes form one group") {
        Sketch k = sketch_of(300, 300, {line_stroke(0, 0, {0, 150}, {60, 150}, 16),
                                        line_stroke(1, 1, {66, 150}, {126, 150}, 16)});
        auto groups = group_sketch(k, plain_params());
        REQUIRE(groups.size() == 1);
        CHECK(groups[0].members == std::vector<int>{0, 1});
        CHECK(groups[0].total_length == doctest::Approx(120.0));
    }
    SUBCASE("three chained strokes: new group then absorption") {
        Sketch k = sketch_of(300, 300, {line_stroke(0, 0, {0, 150}, {40, 150}, 11),
                                        line_stroke(1, 1, {44, 150}, {84, 150}, 11),
                                        line_stroke(2, 2, {88, 150}, {128, 150}, 11)});
        auto groups = group_sketch(k, plain_params());
        REQUIRE(groups.size() == 1);
        CHECK(groups[0].members == std::vector<int>{0, 1, 2});
    }
    SUBCASE("two distant pairs yield two groups") {
        Sketch k = sketch_of(400, 400,
                             {line_stroke(0, 0, {10, 30}, {60, 30}, 14),
                              line_stroke(1, 1, {64, 30}, {114, 30}, 14),
                              line_stroke(2, 2, {300, 370}, {350, 370}, 14),
                              line_stroke(3, 3, {354, 370}, {380, 370}, 8)});
        auto groups = group_sketch(k, plain_params());
        REQUIRE(groups.size() == 2);
        std::set<std::vector<int>> member_sets;
        for (const auto& g : groups) member_sets.insert(g.members);
        CHECK(member_sets.count({0, 1}) == 1);
        CHECK(member_sets.count({2, 3}) == 1);
    }
    SUBCASE("h below every error keeps all strokes singleton") {
        Sketch k = sketch_of(300, 300, {line_stroke(0, 0, {0, 150}, {60, 150}, 16),
                                        line_stroke(1, 1, {66, 150}, {126, 150}, 16)});
        auto p = plain_params();
        p.h = -1e300;
        auto groups = group_sketch(k, p);
        REQUIRE(groups.size() == 2);
        for (const auto& g : groups) CHECK(g.members.size() == 1);
    }
}

TEST_CASE("group_sketch output partitions the strokes deterministically") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(10.0, 390.0);
    for (int t = 0; t < 6; ++t) {
        Sketch k;
        k.canvas_width = k.canvas_height = 400;
        const int n = 6 + t;
        for (int i = 0; i < n; ++i) {
            const Point2 a{u(rng), u(rng)};
            const double ang = u(rng) / 100.0;
            const double len = 20.0 + u(rng) / 4.0;
            k.strokes.push_back(line_stroke(i, i,
                                            a, {a.x + len * std::cos(ang), a.y + len * std::sin(ang)},
                                            10));
        }
        GroupingParams p;  // defaults, self-tuned sigma
        const auto g1 = group_sketch(k, p);
        const auto g2 = group_sketch(k, p);

        // identical runs agree
        REQUIRE(g1.size() == g2.size());
        for (size_t i = 0; i < g1.size(); ++i) CHECK(g1[i].members == g2[i].members);

        // disjoint and covering
        std::set<int> seen;
        for (const auto& g : g1) {
            CHECK(!g.members.empty());
            for (int id : g.members) CHECK(seen.insert(id).second);
        }
        CHECK(seen.size() == static_cast<size_t>(n));
    }
}

TEST_CASE("raising h never shrinks the largest group") {
    Sketch k;
    k.canvas_width = k.canvas_height = 400;
    std::mt19937 rng(57);
    std::uniform_real_distribution<double> u(10.0, 390.0);
    for (int i = 0; i < 10; ++i) {
        const Point2 a{u(rng), u(rng)};
        k.strokes.push_back(line_stroke(i, i, a, {a.x + 30.0, a.y + 8.0}, 8));
    }
    size_t prev_largest = 0;
    for (double h : {-1.0, 0.2, 0.5, 1.0, 2.0, 5.0}) {
        auto p = plain_params();
        p.h = h;
        size_t largest = 0;
        for (const auto& g : group_sketch(k, p)) largest = std::max(largest, g.members.size());
        CHECK(largest >= prev_largest);
        prev_largest = largest;
    }
}

TEST_CASE("model labels steer regrouping") {
    // collinear strokes with a gap sized so the error sits just above h
    // without labels and drops below it under the same-label factor 0.67
    Sketch k = sketch_of(300, 300, {line_stroke(0, 0, {40, 150}, {100, 150}, 16),
                                    line_stroke(1, 1, {130, 150}, {190, 150}, 16)});
    GroupingParams p = plain_params();
    p.mu_mod = 0.33;
    p.h = 0.5;
    const auto separate = group_sketch(k, p);
    CHECK(separate.size() == 2);

    std::unordered_map<int, int> labels{{0, 7}, {1, 7}};
    const auto together = group_sketch(k, p, &labels);
    CHECK(together.size() == 1);
}
