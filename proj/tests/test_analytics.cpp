#include <doctest.h>

#include <algorithm>
#include <random>

#include "dsm/analytics.hpp"
#include "dsm/errors.hpp"
#include "fixtures.hpp"

using namespace dsm;
using fixtures::line_stroke;
using fixtures::sketch_of;

namespace {

Sketch sketch_with_lengths(const std::vector<double>& lengths, double canvas = 4000) {
    Sketch k;
    k.canvas_width = k.canvas_height = canvas;
    for (size_t i = 0; i < lengths.size(); ++i)
        k.strokes.push_back(line_stroke(static_cast<int>(i), static_cast<int>(i), {0, 10.0 * i},
                                        {lengths[i], 10.0 * i}));
    return k;
}

} // namespace

TEST_CASE("length_histogram bins right-open") {
    auto h = length_histogram({sketch_with_lengths({100, 1500})}, 1000);
    REQUIRE(h.counts.size() == 2);
    CHECK(h.counts[0] == 1);
    CHECK(h.counts[1] == 1);

    SUBCASE("boundary lands in the upper bin") {
        auto hb = length_histogram({sketch_with_lengths({999.9, 1000.0})}, 1000);
        REQUIRE(hb.counts.size() == 2);
        CHECK(hb.counts[0] == 1);
        CHECK(hb.counts[1] == 1);
    }
    SUBCASE("all short") {
        auto hs = length_histogram({sketch_with_lengths(std::vector<double>(10, 50.0))}, 1000);
        REQUIRE(hs.counts.size() == 1);
        CHECK(hs.counts[0] == 10);
    }
    SUBCASE("empty input yields an empty histogram") {
        auto he = length_histogram({}, 1000);
        CHECK(he.counts.empty());
    }
    SUBCASE("total is permutation invariant") {
        Sketch a = sketch_with_lengths({100, 600, 2500});
        Sketch b = sketch_with_lengths({50, 1200});
        auto h1 = length_histogram({a, b}, 500);
        auto h2 = length_histogram({b, a}, 500);
        CHECK(h1.counts == h2.counts);
    }
}

TEST_CASE("length_class thresholds from the stroke study") {
    CHECK(length_class(500, 1000, 2000) == LengthClass::Short);
    CHECK(length_class(1500, 1000, 2000) == LengthClass::Medium);
    CHECK(length_class(2500, 1000, 2000) == LengthClass::Long);
    CHECK_THROWS_AS(length_class(10, 2000, 1000), InvalidArgument);

    SUBCASE("partition is exhaustive and exclusive") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> u(1e-3, 5000.0);
        for (int i = 0; i < 200; ++i) {
            const double len = u(rng);
            int hits = 0;
            if (length_class(len, 1000, 2000) == LengthClass::Short) ++hits;
            if (length_class(len, 1000, 2000) == LengthClass::Medium) ++hits;
            if (length_class(len, 1000, 2000) == LengthClass::Long) ++hits;
            CHECK(hits == 1);
        }
    }
}

TEST_CASE("temporal_matrix codes against the per-sketch mean") {
    SUBCASE("below/above mean") {
        auto m = temporal_matrix({sketch_with_lengths({10, 100})});
        REQUIRE(m.rows.size() == 1);
        CHECK(m.rows[0].codes == std::vector<int>{0, 1});
    }
    SUBCASE("ties code below (strictly-above rule)") {
        auto m = temporal_matrix({sketch_with_lengths({50, 50, 50})});
        CHECK(m.rows[0].codes == std::vector<int>{0, 0, 0});
    }
    SUBCASE("rows sorted by stroke count ascending") {
        auto m = temporal_matrix(
            {sketch_with_lengths({10, 20, 30}), sketch_with_lengths({10, 20})});
        REQUIRE(m.rows.size() == 2);
        CHECK(m.rows[0].sketch_index == 1);
        CHECK(m.rows[1].sketch_index == 0);
    }
    SUBCASE("cells follow drawing order") {
        Sketch k = sketch_with_lengths({10, 100});
        std::swap(k.strokes[0].order, k.strokes[1].order);  // long stroke drawn first
        auto m = temporal_matrix({k});
        CHECK(m.rows[0].codes == std::vector<int>{1, 0});
    }
}

TEST_CASE("order_colormap ranks") {
    CHECK(order_colormap(sketch_with_lengths({1, 2, 3})) ==
          std::vector<std::pair<int, double>>{{0, 0.0}, {1, 0.5}, {2, 1.0}});
    CHECK(order_colormap(sketch_with_lengths({1})) ==
          std::vector<std::pair<int, double>>{{0, 0.0}});
    const auto five = order_colormap(sketch_with_lengths({1, 2, 3, 4, 5}));
    CHECK(five[1].second == doctest::Approx(0.25));
    CHECK(five[3].second == doctest::Approx(0.75));
}
