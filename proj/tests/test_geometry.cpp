#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "dsm/errors.hpp"
#include "dsm/geometry.hpp"
#include "dsm/sketch_io.hpp"
#include "fixtures.hpp"

using namespace dsm;
using fixtures::line_stroke;
using fixtures::make_stroke;

TEST_CASE("stroke_length sums segment lengths") {
    CHECK(stroke_length(make_stroke(0, 0, {{0, 0}, {3, 4}})) == doctest::Approx(5.0));
    CHECK(stroke_length(make_stroke(0, 0, {{0, 0}, {1, 0}, {1, 1}})) == doctest::Approx(2.0));
    // closed unit square, 5 points
    CHECK(stroke_length(make_stroke(0, 0, {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}})) ==
          doctest::Approx(4.0));
}

TEST_CASE("resample_stroke spaces points along arc length") {
    auto r = resample_stroke(line_stroke(0, 0, {0, 0}, {10, 0}), 5.0);
    REQUIRE(r.points.size() == 3);
    CHECK(r.points[1].x == doctest::Approx(5.0));
    CHECK(r.points[2].x == doctest::Approx(10.0));

    SUBCASE("spacing >= arc length keeps only the endpoints") {
        auto ends = resample_stroke(make_stroke(0, 0, {{0, 0}, {4, 0}, {8, 0}}), 100.0);
        REQUIRE(ends.points.size() == 2);
        CHECK(ends.points[0].x == doctest::Approx(0.0));
        CHECK(ends.points[1].x == doctest::Approx(8.0));
    }

    SUBCASE("unit square perimeter at spacing 1 lands on the corners") {
        // arc-length parameterization by hand: positions 0,1,2,3,4 are the corners
        auto sq = resample_stroke(make_stroke(0, 0, {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}}), 1.0);
        REQUIRE(sq.points.size() == 5);
        const Point2 expect[5] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}};
        for (size_t i = 0; i < 5; ++i) {
            CHECK(sq.points[i].x == doctest::Approx(expect[i].x).epsilon(1e-9));
            CHECK(sq.points[i].y == doctest::Approx(expect[i].y).epsilon(1e-9));
        }
    }

    SUBCASE("output arc length stays within spacing of the input") {
        // random-walk strokes with bounded turning, the class this library
        // resamples; corner cutting stays well under one spacing step
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> turn(-0.17, 0.17);
        std::uniform_real_distribution<double> u(2.0, 10.0);
        for (int t = 0; t < 20; ++t) {
            std::vector<Point2> pts{{500.0, 500.0}};
            double heading = turn(rng) * 10.0;
            for (int i = 0; i < 24; ++i) {
                heading += turn(rng);
                pts.push_back({pts.back().x + 10.0 * std::cos(heading),
                               pts.back().y + 10.0 * std::sin(heading)});
            }
            const double spacing = u(rng);
            const auto rs = resample_polyline(pts, spacing);
            CHECK(std::abs(polyline_length(rs) - polyline_length(pts)) <= spacing);
        }
    }

    CHECK_THROWS_AS(resample_stroke(line_stroke(0, 0, {0, 0}, {1, 0}), 0.0), InvalidArgument);
}

TEST_CASE("cut_stroke splits at equal arc intervals") {
    SUBCASE("even split") {
        auto parts = cut_stroke(line_stroke(0, 3, {0, 0}, {3000, 0}), 1500.0);
        REQUIRE(parts.size() == 2);
        CHECK(stroke_length(parts[0]) == doctest::Approx(1500.0));
        CHECK(stroke_length(parts[1]) == doctest::Approx(1500.0));
        CHECK(parts[0].order == 3);
        CHECK(parts[1].order == 3);
    }
    SUBCASE("short strokes pass through") {
        auto parts = cut_stroke(line_stroke(0, 0, {0, 0}, {1000, 0}), 1500.0);
        REQUIRE(parts.size() == 1);
        CHECK(stroke_length(parts[0]) == doctest::Approx(1000.0));
    }
    SUBCASE("ceil(3100/1500) = 3 equal parts") {
        auto parts = cut_stroke(line_stroke(0, 0, {0, 0}, {3100, 0}), 1500.0);
        REQUIRE(parts.size() == 3);
        double total = 0.0;
        for (const auto& p : parts) {
            CHECK(stroke_length(p) == doctest::Approx(3100.0 / 3.0));
            total += stroke_length(p);
        }
        CHECK(total == doctest::Approx(3100.0).epsilon(1e-6));
    }
    SUBCASE("fragment lengths always sum to the original") {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> u(0.0, 500.0);
        for (int t = 0; t < 30; ++t) {
            std::vector<Point2> pts;
            for (int i = 0; i < 10; ++i) pts.push_back({u(rng), u(rng)});
            const Stroke s = make_stroke(0, 0, pts);
            const double len = stroke_length(s);
            if (len <= 0.0) continue;
            const double max_len = len / (1.0 + 3.0 * u(rng) / 500.0);
            auto parts = cut_stroke(s, max_len);
            double total = 0.0;
            for (const auto& p : parts) {
                total += stroke_length(p);
                CHECK(stroke_length(p) <= max_len * (1.0 + 1e-9));
            }
            CHECK(total == doctest::Approx(len).epsilon(1e-6));
        }
    }
}

TEST_CASE("flip_horizontal mirrors x and preserves structure") {
    Sketch k = fixtures::sketch_of(100, 50, {line_stroke(0, 0, {0, 5}, {10, 5}),
                                             line_stroke(1, 1, {20, 10}, {30, 40})});
    Sketch f = flip_horizontal(k);
    CHECK(f.strokes[0].points[0].x == doctest::Approx(100.0));
    CHECK(f.strokes[0].points[0].y == doctest::Approx(5.0));

    SUBCASE("involution") {
        Sketch ff = flip_horizontal(f);
        for (size_t s = 0; s < k.strokes.size(); ++s)
            for (size_t i = 0; i < k.strokes[s].points.size(); ++i) {
                CHECK(ff.strokes[s].points[i].x == doctest::Approx(k.strokes[s].points[i].x));
                CHECK(ff.strokes[s].points[i].y == doctest::Approx(k.strokes[s].points[i].y));
            }
    }
    SUBCASE("isometry") {
        for (size_t s = 0; s < k.strokes.size(); ++s)
            CHECK(stroke_length(f.strokes[s]) == doctest::Approx(stroke_length(k.strokes[s])));
    }
}

TEST_CASE("sketch JSON round-trip is exact") {
    Sketch k = fixtures::sketch_of(320.25, 240.5, {});
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.0, 240.0);
    for (int s = 0; s < 5; ++s) {
        Stroke st;
        st.id = s;
        st.order = (s + 2) % 5;
        for (int i = 0; i < 6; ++i) st.points.push_back({u(rng) + 1e-7 * s, u(rng)});
        k.strokes.push_back(st);
    }
    const Sketch back = parse_sketch(sketch_to_json(k));
    REQUIRE(back.strokes.size() == k.strokes.size());
    for (size_t s = 0; s < k.strokes.size(); ++s) {
        CHECK(back.strokes[s].order == k.strokes[s].order);
        for (size_t i = 0; i < k.strokes[s].points.size(); ++i) {
            CHECK(back.strokes[s].points[i].x == k.strokes[s].points[i].x);  // bit-exact
            CHECK(back.strokes[s].points[i].y == k.strokes[s].points[i].y);
        }
    }
}

TEST_CASE("sketch loading enforces invariants") {
    CHECK_THROWS_AS(parse_sketch(R"({"canvas":{"width":10,"height":10},
        "strokes":[{"order":0,"points":[[1,1]]}]})"),
                    InvalidArgument);
    CHECK_THROWS_AS(parse_sketch(R"({"canvas":{"width":10,"height":10},
        "strokes":[{"order":0,"points":[[1,1],[2,2]]},{"order":0,"points":[[3,3],[4,4]]}]})"),
                    InvalidArgument);
    SUBCASE("points are clamped into the canvas") {
        const Sketch k = parse_sketch(R"({"canvas":{"width":10,"height":10},
            "strokes":[{"order":0,"points":[[-5,3],[20,3]]}]})");
        CHECK(k.strokes[0].points[0].x == doctest::Approx(0.0));
        CHECK(k.strokes[0].points[1].x == doctest::Approx(10.0));
    }
    SUBCASE("unknown keys are ignored") {
        const Sketch k = parse_sketch(R"({"canvas":{"width":10,"height":10},"extra":1,
            "strokes":[{"order":0,"points":[[1,1],[2,2]],"pressure":[1,2]}]})");
        CHECK(k.strokes.size() == 1);
    }
}

TEST_CASE("model JSON round-trip preserves tree and Gaussians bit-exactly") {
    DeformableStrokeModel m;
    m.canvas_width = 256;
    m.canvas_height = 256;
    std::mt19937 rng(17);
    for (int c = 0; c < 3; ++c) {
        ClusterEntry e;
        ExemplarStroke ex;
        ex.polylines = {{{10.0 + c, 20.0}, {30.0 + 1e-13, 40.0}}};
        ex.anchor = {20.0 + c, 30.0};
        e.exemplars.push_back(ex);
        e.bbox_center = {40.0 + 0.1 * c, 50.0};
        e.bbox_width = 12.5;
        e.bbox_height = 8.25;
        e.total_member_length = 123.456 + c;
        m.clusters.push_back(e);
    }
    m.edges = {{0, 1}, {1, 2}};
    for (int e = 0; e < 2; ++e) m.offsets.push_back(fixtures::random_gaussian(rng, 30.0, 0.5, 50.0));
    m.root = 1;

    const DeformableStrokeModel back = parse_model(model_to_json(m));
    CHECK(back.root == m.root);
    REQUIRE(back.edges == m.edges);
    for (size_t e = 0; e < m.offsets.size(); ++e) {
        CHECK(back.offsets[e].mean.x == m.offsets[e].mean.x);
        CHECK(back.offsets[e].mean.y == m.offsets[e].mean.y);
        CHECK(back.offsets[e].cov_xx == m.offsets[e].cov_xx);
        CHECK(back.offsets[e].cov_xy == m.offsets[e].cov_xy);
        CHECK(back.offsets[e].cov_yy == m.offsets[e].cov_yy);
    }
    for (size_t c = 0; c < m.clusters.size(); ++c) {
        const auto& a = m.clusters[c].exemplars[0];
        const auto& b = back.clusters[c].exemplars[0];
        CHECK(a.anchor.x == b.anchor.x);
        CHECK(a.polylines[0][1].x == b.polylines[0][1].x);
    }
}

TEST_CASE("validate_model rejects broken structures") {
    DeformableStrokeModel m;
    m.canvas_width = m.canvas_height = 100;
    for (int c = 0; c < 3; ++c) {
        ClusterEntry e;
        ExemplarStroke ex;
        ex.polylines = {{{0, 0}, {1, 1}}};
        e.exemplars.push_back(ex);
        m.clusters.push_back(e);
    }
    m.edges = {{0, 1}, {1, 2}};
    m.offsets.assign(2, Gaussian2{});

    CHECK_NOTHROW(validate_model(m));

    SUBCASE("cycle") {
        m.edges = {{0, 1}, {0, 1}};
        CHECK_THROWS_AS(validate_model(m), InvalidModel);
    }
    SUBCASE("wrong edge count") {
        m.edges = {{0, 1}};
        CHECK_THROWS_AS(validate_model(m), InvalidModel);
    }
    SUBCASE("non-SPD covariance") {
        m.offsets[0].cov_xx = -1.0;
        CHECK_THROWS_AS(validate_model(m), InvalidModel);
    }
}
