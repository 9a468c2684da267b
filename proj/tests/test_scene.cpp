#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <filesystem>

#include "gbr/scene.hpp"
#include "oracles.hpp"

using namespace gbr;

TEST_CASE("squares presets are 190x190") {
    Scene s = gen_squares1(12, 5, {.num_rects = 3});
    CHECK(s.width == 190);
    CHECK(s.height == 190);
    CHECK(s.num_views == 5);
    CHECK(s.rects.size() == 3);
}

TEST_CASE("squares1 disparities are exact integers above the background") {
    Scene s = gen_squares1(7, 3, {.num_rects = 4});
    CHECK(s.background_disp2 % 2 == 0);
    for (const auto& r : s.rects) {
        CHECK(r.disp2_left % 2 == 0);  // integer disparity
        CHECK(r.disp2_left >= s.background_disp2 + 2);
        // f*delta/z recomputes to the same integer.
        double d = s.fdelta() / r.depth_left;
        CHECK(d == doctest::Approx(r.disp2_left * 0.5).epsilon(1e-12));
        CHECK(r.depth_left < s.background_depth);
    }
}

TEST_CASE("squares2 has at least one half-pixel disparity") {
    for (uint64_t seed : {1u, 3u, 9u, 20u}) {
        Scene s = gen_squares2(seed, 5, {.num_rects = 4});
        bool any_half = false;
        for (const auto& r : s.rects) any_half = any_half || (r.disp2_left % 2 != 0);
        CHECK(any_half);
    }
}

TEST_CASE("squares2 with no rects degenerates to a flat squares1 scene") {
    Scene s = gen_squares2(5, 3, {.num_rects = 0});
    CHECK(s.rects.empty());
    ViewPair v1 = render_view(s, 1);
    ViewPair v2 = render_view(s, 2);
    int d = s.background_disp2 / 2;
    for (int r = 0; r < s.height; ++r)
        for (int c = d; c < s.width; ++c) REQUIRE(v2.image.at(r, c) == v1.image.at(r, c - d));
}

TEST_CASE("half-pixel edge column averages the two surfaces") {
    Scene s = gen_squares2(3, 2, {.num_rects = 4});
    const Rect* rect = nullptr;
    for (const auto& r : s.rects)
        if (r.disp2_left % 2 != 0) rect = &r;
    REQUIRE(rect != nullptr);
    ViewPair v2 = render_view(s, 2);
    // With an odd half-unit shift the left rect edge lands on a pixel
    // center: the right half-cell shows texel 0, the left one shows the
    // background, so the pixel is the rounded average of both.
    int s2 = rect->disp2_left;  // view 2 shift in half-units
    REQUIRE(s2 % 2 == 1);
    int c_edge = rect->x0 + (s2 - 1) / 2;  // span [x0-0.5+s2/2, ...) starts at this center
    for (int r = rect->y0; r < rect->y0 + rect->h; ++r) {
        int bg = s.background_texel(r, c_edge - s.background_disp2 / 2);
        int fg = rect->texel(r - rect->y0, 0);
        int expected = (bg + fg + 1) / 2;
        REQUIRE(static_cast<int>(v2.image.at(r, c_edge)) == expected);
    }
}

TEST_CASE("squares3 slanted rects change size across views") {
    Scene s = gen_squares3(11, 2, {.num_rects = 1});
    const Rect& rect = s.rects[0];
    REQUIRE(rect.slanted());
    double d0 = rect_disparity(s, rect, 0);
    double d1 = rect_disparity(s, rect, rect.w - 1);
    CHECK(d0 != d1);  // per-column disparity is non-constant

    ViewPair v1 = render_view(s, 1);
    ViewPair v2 = render_view(s, 2);
    auto fg_width = [&](const ViewPair& v) {
        int count = 0;
        int row = rect.y0 + rect.h / 2;
        for (int c = 0; c < s.width; ++c) {
            double z = static_cast<double>(v.depth.at(row, c)) / s.z_scale;
            if (z < s.background_depth - 1e-6) ++count;
        }
        return count;
    };
    int w1 = fg_width(v1), w2 = fg_width(v2);
    double differential = d1 - d0;
    CHECK(std::abs((w2 - w1) - differential) <= 1.5);
}

TEST_CASE("view 1 is the identity composition") {
    Scene s = gen_squares1(4, 3, {.num_rects = 3});
    ViewPair v1 = render_view(s, 1);
    for (int r = 0; r < s.height; ++r)
        for (int c = 0; c < s.width; ++c) {
            bool fg = false;
            for (const auto& rect : s.rects)
                if (r >= rect.y0 && r < rect.y0 + rect.h && c >= rect.x0 && c < rect.x0 + rect.w) {
                    REQUIRE(v1.image.at(r, c) == rect.texel(r - rect.y0, c - rect.x0));
                    fg = true;
                }
            if (!fg) REQUIRE(v1.image.at(r, c) == s.background_texel(r, c));
        }
}

TEST_CASE("integer scenes shift rigidly between views") {
    Scene s = gen_squares1(9, 2, {.num_rects = 2});
    ViewPair v1 = render_view(s, 1);
    ViewPair v2 = render_view(s, 2);
    for (const auto& rect : s.rects) {
        int d = rect.disp2_left / 2;
        for (int r = rect.y0; r < rect.y0 + rect.h; ++r)
            for (int c = rect.x0; c < rect.x0 + rect.w; ++c)
                if (c + d < s.width)
                    REQUIRE(v2.image.at(r, c + d) == v1.image.at(r, c));
    }
}

TEST_CASE("depth channel records the nearest covering surface") {
    // Brute-force oracle: enumerate all surfaces covering each pixel
    // center and take the minimum depth.
    for (int iter = 0; iter < 4; ++iter) {
        Scene s = gen_squares1(100 + iter, 3, {.num_rects = 2, .width = 80, .height = 80});
        for (int n = 1; n <= s.num_views; ++n) {
            ViewPair v = render_view(s, n);
            int m = n - 1;
            for (int r = 0; r < s.height; ++r)
                for (int c = 0; c < s.width; ++c) {
                    double best = s.background_depth;
                    for (const auto& rect : s.rects) {
                        if (r < rect.y0 || r >= rect.y0 + rect.h) continue;
                        double shift = m * rect.disp2_left * 0.5;
                        double lo = rect.x0 - 0.5 + shift;
                        double hi = rect.x0 + rect.w - 0.5 + shift;
                        if (c >= lo && c < hi) best = std::min(best, rect.depth_left);
                    }
                    uint16_t expect = static_cast<uint16_t>(
                        std::clamp(std::floor(best * s.z_scale + 0.5), 1.0, 65535.0));
                    REQUIRE(v.depth.at(r, c) == expect);
                }
        }
    }
}

TEST_CASE("lambertian: co-visible points match across views") {
    Scene s = gen_squares1(14, 4, {.num_rects = 3});
    std::vector<ViewPair> views;
    for (int n = 1; n <= s.num_views; ++n) views.push_back(render_view(s, n));
    std::mt19937_64 rng(99);
    int checked = 0;
    for (int iter = 0; iter < 4000 && checked < 500; ++iter) {
        int r = static_cast<int>(rng() % s.height);
        int c = static_cast<int>(rng() % s.width);
        // Background point visible in view 1: follow it through views.
        bool bg = true;
        for (const auto& rect : s.rects)
            if (r >= rect.y0 && r < rect.y0 + rect.h && c >= rect.x0 - 1 &&
                c < rect.x0 + rect.w + 1)
                bg = false;
        if (!bg) continue;
        int d = s.background_disp2 / 2;
        for (int n = 2; n <= s.num_views; ++n) {
            int c2 = c + (n - 1) * d;
            if (c2 >= s.width) break;
            double z2 = static_cast<double>(views[n - 1].depth.at(r, c2)) / s.z_scale;
            if (std::abs(z2 - s.background_depth) > 0.5) break;  // hidden by a rect
            REQUIRE(views[n - 1].image.at(r, c2) == views[0].image.at(r, c));
            ++checked;
        }
    }
    CHECK(checked >= 200);
}

TEST_CASE("rendering is deterministic") {
    Scene s = gen_squares3(21, 3, {.num_rects = 3});
    ViewPair a = render_view(s, 2);
    ViewPair b = render_view(s, 2);
    CHECK(a.image == b.image);
    CHECK(a.depth == b.depth);
}

TEST_CASE("generation rejects impossible requests") {
    CHECK_THROWS_AS(gen_squares1(1, 1, {}), InputError);
    CHECK_THROWS_AS(gen_squares1(1, 3, {.num_rects = 200}), InputError);
    Scene s = gen_squares1(1, 3, {});
    CHECK_THROWS_AS(render_view(s, 0), InputError);
    CHECK_THROWS_AS(render_view(s, 4), InputError);
}

TEST_CASE("overlap stress mode places rects without rejection") {
    Scene s = gen_squares1(2, 3, {.num_rects = 30, .allow_overlap = true});
    CHECK(s.rects.size() == 30);
    render_view(s, 3);  // must not throw
}

TEST_CASE("dataset directory round trip") {
    Scene s = gen_squares2(6, 3, {.num_rects = 2, .width = 120, .height = 120});
    Dataset ds = render_dataset(s);
    auto dir = (std::filesystem::temp_directory_path() / "gbr_ds_test").string();
    write_dataset(dir, ds);
    Dataset back = read_dataset(dir);
    CHECK(back.f == ds.f);
    CHECK(back.delta == ds.delta);
    CHECK(back.z_scale == ds.z_scale);
    REQUIRE(back.views.size() == ds.views.size());
    for (size_t i = 0; i < ds.views.size(); ++i) {
        CHECK(back.views[i] == ds.views[i]);
        CHECK(back.depths[i] == ds.depths[i]);
    }
    std::filesystem::remove_all(dir);
}
