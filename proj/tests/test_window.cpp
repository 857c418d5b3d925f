#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "flarebench/rng.hpp"
#include "flarebench/window.hpp"

using namespace flarebench;

namespace {

// Independent oracle: direct O(H W k^2) argmax over all window positions.
struct BruteResult {
    int top, left;
    double usflux;
};

BruteResult brute_force_max_window(const FluxRaster& raster, int side) {
    BruteResult best{0, 0, -1.0};
    for (int top = 0; top + side <= raster.height(); ++top) {
        for (int left = 0; left + side <= raster.width(); ++left) {
            double s = 0.0;
            for (int i = 0; i < side; ++i) {
                for (int j = 0; j < side; ++j) {
                    s += std::abs(static_cast<double>(raster.at(top + i, left + j)));
                }
            }
            if (s > best.usflux) best = {top, left, s};
        }
    }
    return best;
}

FluxRaster random_raster(SplitMix64& gen, int h, int w, double amplitude = 300.0) {
    std::vector<float> values(static_cast<std::size_t>(h) * w);
    for (float& v : values) v = static_cast<float>(gen.next_in(-amplitude, amplitude));
    return FluxRaster(h, w, std::move(values));
}

}  // namespace

TEST_CASE("build_unsigned_sat hand examples") {
    SECTION("2x2 with a negative entry") {
        const SummedAreaTable sat = build_unsigned_sat(FluxRaster(2, 2, {1, -1, 2, 3}));
        REQUIRE(sat.cumulative(0, 0) == 1.0);
        REQUIRE(sat.cumulative(0, 1) == 2.0);
        REQUIRE(sat.cumulative(1, 0) == 3.0);
        REQUIRE(sat.cumulative(1, 1) == 7.0);
    }
    SECTION("all-zero raster") {
        const SummedAreaTable sat = build_unsigned_sat(FluxRaster(3, 3, 0.0f));
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) REQUIRE(sat.cumulative(i, j) == 0.0);
        }
    }
    SECTION("1x3 prefix sums") {
        const SummedAreaTable sat = build_unsigned_sat(FluxRaster(1, 3, {2, 2, 2}));
        REQUIRE(sat.cumulative(0, 0) == 2.0);
        REQUIRE(sat.cumulative(0, 1) == 4.0);
        REQUIRE(sat.cumulative(0, 2) == 6.0);
    }
}

TEST_CASE("sat entries are non-negative and monotone along rows and columns") {
    SplitMix64 gen(5);
    const FluxRaster raster = random_raster(gen, 17, 23);
    const SummedAreaTable sat = build_unsigned_sat(raster);
    for (int i = 0; i < sat.height(); ++i) {
        for (int j = 0; j < sat.width(); ++j) {
            REQUIRE(sat.cumulative(i, j) >= 0.0);
            if (j > 0) REQUIRE(sat.cumulative(i, j) >= sat.cumulative(i, j - 1));
            if (i > 0) REQUIRE(sat.cumulative(i, j) >= sat.cumulative(i - 1, j));
        }
    }
}

TEST_CASE("window_sum examples and bounds") {
    const FluxRaster raster(2, 3, {1, -2, 3, 0, 5, -1});
    const SummedAreaTable sat = build_unsigned_sat(raster);
    REQUIRE(window_sum(sat, 0, 0, 2) == 8.0);       // full-height 2x2 at origin
    REQUIRE(window_sum(sat, 0, 1, 2) == 11.0);      // 2+3+5+1
    REQUIRE(window_sum(sat, 1, 1, 1) == 5.0);       // 1x1 -> |value|
    REQUIRE(window_sum(sat, 0, 0, 1) == 1.0);
    REQUIRE_THROWS_AS(window_sum(sat, 1, 2, 2), BoundsError);
    REQUIRE_THROWS_AS(window_sum(sat, -1, 0, 2), BoundsError);
}

TEST_CASE("window_sum matches a direct sum on random windows") {
    SplitMix64 gen(9);
    const FluxRaster raster = random_raster(gen, 32, 41);
    const SummedAreaTable sat = build_unsigned_sat(raster);
    for (int trial = 0; trial < 200; ++trial) {
        const int side = 1 + static_cast<int>(gen.next_below(16));
        const int top = static_cast<int>(gen.next_below(raster.height() - side + 1));
        const int left = static_cast<int>(gen.next_below(raster.width() - side + 1));
        double direct = 0.0;
        for (int i = 0; i < side; ++i) {
            for (int j = 0; j < side; ++j) {
                direct += std::abs(static_cast<double>(raster.at(top + i, left + j)));
            }
        }
        REQUIRE_THAT(window_sum(sat, top, left, side), Catch::Matchers::WithinRel(direct, 1e-9));
    }
}

TEST_CASE("select_max_usflux_window examples") {
    SECTION("raster exactly side x side") {
        const FluxRaster raster(2, 2, {1, -2, 3, -4});
        const WindowSelection sel = select_max_usflux_window(raster, 2);
        REQUIRE(sel.top == 0);
        REQUIRE(sel.left == 0);
        REQUIRE(sel.usflux == 10.0);
    }
    SECTION("all-zero oversized raster ties to (0,0)") {
        const WindowSelection sel = select_max_usflux_window(FluxRaster(5, 7, 0.0f), 3);
        REQUIRE(sel.top == 0);
        REQUIRE(sel.left == 0);
        REQUIRE(sel.usflux == 0.0);
    }
    SECTION("hand-enumerated 3x3, side 2") {
        const FluxRaster raster(3, 3, {1, -2, 3, 0, 5, -1, 2, 2, 0});
        const WindowSelection sel = select_max_usflux_window(raster, 2);
        REQUIRE(sel.top == 0);
        REQUIRE(sel.left == 1);
        REQUIRE(sel.usflux == 11.0);
    }
    SECTION("too-small raster") {
        REQUIRE_THROWS_AS(select_max_usflux_window(FluxRaster(3, 2, 1.0f), 3), BoundsError);
    }
}

TEST_CASE("selection matches the brute-force oracle on random rasters") {
    SplitMix64 gen(42);
    const int sides[] = {2, 4, 8, 16};
    for (int trial = 0; trial < 60; ++trial) {
        const int side = sides[gen.next_below(4)];
        const int h = side + static_cast<int>(gen.next_below(64 - side + 1));
        const int w = side + static_cast<int>(gen.next_below(64 - side + 1));
        const FluxRaster raster = random_raster(gen, h, w);
        const WindowSelection sel = select_max_usflux_window(raster, side);
        const BruteResult expected = brute_force_max_window(raster, side);
        REQUIRE(sel.top == expected.top);
        REQUIRE(sel.left == expected.left);
        REQUIRE_THAT(sel.usflux, Catch::Matchers::WithinRel(expected.usflux, 1e-9));
    }
}

TEST_CASE("selection is invariant under polarity negation") {
    SplitMix64 gen(77);
    for (int trial = 0; trial < 20; ++trial) {
        const FluxRaster raster = random_raster(gen, 20, 24);
        std::vector<float> negated(raster.values());
        for (float& v : negated) v = -v;
        const WindowSelection a = select_max_usflux_window(raster, 6);
        const WindowSelection b =
            select_max_usflux_window(FluxRaster(20, 24, std::move(negated)), 6);
        REQUIRE(a.top == b.top);
        REQUIRE(a.left == b.left);
        REQUIRE_THAT(a.usflux, Catch::Matchers::WithinRel(b.usflux, 1e-12));
    }
}

TEST_CASE("translation consistency: embedding in a zero field shifts the selection") {
    SplitMix64 gen(13);
    for (int trial = 0; trial < 20; ++trial) {
        // Random 8x8 payload with a unique maximal 4x4 window forced by a hot cell.
        FluxRaster payload = random_raster(gen, 8, 8, 10.0);
        payload.at(static_cast<int>(gen.next_below(8)), static_cast<int>(gen.next_below(8))) =
            5000.0f;
        const WindowSelection base = select_max_usflux_window(payload, 4);

        const int off_r = 1 + static_cast<int>(gen.next_below(6));
        const int off_c = 1 + static_cast<int>(gen.next_below(6));
        FluxRaster field(20, 20, 0.0f);
        for (int i = 0; i < 8; ++i) {
            for (int j = 0; j < 8; ++j) field.at(off_r + i, off_c + j) = payload.at(i, j);
        }
        const WindowSelection shifted = select_max_usflux_window(field, 4);
        REQUIRE(shifted.top == base.top + off_r);
        REQUIRE(shifted.left == base.left + off_c);
    }
}

TEST_CASE("selected usflux dominates any fixed window") {
    SplitMix64 gen(31);
    const FluxRaster raster = random_raster(gen, 30, 30);
    const int side = 8;
    const SummedAreaTable sat = build_unsigned_sat(raster);
    const WindowSelection sel = select_max_usflux_window(raster, side);
    const int center = (30 - side) / 2;
    REQUIRE(sel.usflux >= window_sum(sat, center, center, side));
    for (int trial = 0; trial < 50; ++trial) {
        const int top = static_cast<int>(gen.next_below(30 - side + 1));
        const int left = static_cast<int>(gen.next_below(30 - side + 1));
        REQUIRE(sel.usflux >= window_sum(sat, top, left, side));
    }
}
