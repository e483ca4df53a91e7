#include <doctest.h>

#include <random>

#include "maskagent/error.hpp"
#include "maskagent/mask.hpp"
#include "support/oracles.hpp"

using namespace maskagent;

namespace {

BitMask from_rows(std::initializer_list<const char*> rows) {
    const int h = static_cast<int>(rows.size());
    const int w = static_cast<int>(std::char_traits<char>::length(*rows.begin()));
    BitMask m(w, h);
    int y = 0;
    for (const char* r : rows) {
        for (int x = 0; x < w; ++x) m.set(x, y, r[x] == '#');
        ++y;
    }
    return m;
}

}  // namespace

TEST_CASE("iou examples") {
    BitMask cols(4, 4), rows(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j) {
            cols.set(j, i);
            rows.set(i, j);
        }
    CHECK(iou(cols, rows) == doctest::Approx(4.0 / 12.0).epsilon(1e-12));
    CHECK(iou(cols, cols) == 1.0);
    CHECK(iou(cols, ~cols) == 0.0);
    CHECK(iou(BitMask(3, 3), BitMask(3, 3)) == 1.0);
    CHECK_THROWS_AS(iou(BitMask(3, 3), BitMask(3, 4)), DimensionMismatch);
}

TEST_CASE("iou properties on random masks") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const BitMask a = oracle::random_mask(rng, 9, 7, 0.4);
        const BitMask b = oracle::random_mask(rng, 9, 7, 0.4);
        CHECK(iou(a, b) == iou(b, a));
        CHECK(iou(a, b) == doctest::Approx(oracle::iou(a, b)).epsilon(1e-15));
        // adding a pixel of b \ a to a never lowers iou(a, b)
        const BitMask diff = b - a;
        for (int y = 0; y < 7; ++y)
            for (int x = 0; x < 9; ++x) {
                if (!diff.at(x, y)) continue;
                BitMask grown = a;
                grown.set(x, y);
                CHECK(iou(grown, b) >= iou(a, b));
            }
    }
}

TEST_CASE("mask algebra") {
    const BitMask a = from_rows({"##..", "#..."});
    const BitMask b = from_rows({".#..", "#..#"});
    CHECK((a & b) == from_rows({".#..", "#..."}));
    CHECK((a | b) == from_rows({"##..", "#..#"}));
    CHECK((a - b) == from_rows({"#...", "...."}));
    CHECK((~a).count() == 5);
    CHECK(a.count() == 3);
    CHECK_THROWS_AS(a & BitMask(2, 2), DimensionMismatch);
    CHECK_THROWS_AS(BitMask(2, 2, std::vector<std::uint8_t>(3)), DimensionMismatch);
}

TEST_CASE("components") {
    CHECK(components(BitMask(4, 4)).empty());
    const auto diag = components(from_rows({"#.", ".#"}));
    REQUIRE(diag.size() == 2);
    CHECK(diag[0].at(0, 0));
    CHECK(diag[1].at(1, 1));
    const BitMask ring = from_rows({"#####", "#...#", "#...#", "#####"});
    CHECK(components(ring).size() == 1);
    CHECK(component_at(ring, {2, 1}).count() == 0);
    CHECK(component_at(ring, {0, 0}) == ring);
}

TEST_CASE("components match label-propagation oracle") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const BitMask m = oracle::random_mask(rng, 12, 10, 0.5);
        const auto comps = components(m);
        CHECK(static_cast<int>(comps.size()) == oracle::component_count(m));
        BitMask uni(12, 10);
        std::size_t total = 0;
        int prev_first = -1;
        for (const auto& c : comps) {
            total += c.count();
            uni |= c;
            int first = 0;
            while (!c.bits()[first]) ++first;
            CHECK(first > prev_first);
            prev_first = first;
        }
        CHECK(uni == m);
        CHECK(total == m.count());
    }
}

TEST_CASE("pixel and normalized coordinates") {
    CHECK(pixel_to_norm({0, 0}, 4, 4) == NormPoint{0.125, 0.125});
    CHECK(norm_to_pixel({0.125, 0.875}, 4, 4) == Pixel{0, 3});
    CHECK(norm_to_pixel({0.99999, 0.0}, 4, 4) == Pixel{3, 0});
    for (int x = 0; x < 64; ++x) CHECK(norm_to_pixel(pixel_to_norm({x, 63 - x}, 64, 64), 64, 64) == Pixel{x, 63 - x});
}

TEST_CASE("bbox") {
    BitMask m(10, 10);
    m.set(2, 3);
    const NormBox b = bbox(m);
    CHECK(b.x1 == doctest::Approx(0.2));
    CHECK(b.y1 == doctest::Approx(0.3));
    CHECK(b.x2 == doctest::Approx(0.3));
    CHECK(b.y2 == doctest::Approx(0.4));
    CHECK(box_raster(b, 10, 10) == m);
    const NormBox full = bbox(~BitMask(10, 10));
    CHECK(full.x1 == 0.0);
    CHECK(full.x2 < 1.0);
    CHECK(full.x2 > 0.999);
    CHECK(box_raster(full, 10, 10).count() == 100);
    CHECK_THROWS_AS(bbox(BitMask(3, 3)), InvalidArgument);
}

TEST_CASE("bbox raster covers tight box of random masks") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const BitMask m = oracle::random_blobs(rng, 17, 13);
        const BitMask r = box_raster(bbox(m), 17, 13);
        CHECK((m - r).count() == 0);
        int x0 = 99, y0 = 99, x1 = -1, y1 = -1;
        for (int y = 0; y < 13; ++y)
            for (int x = 0; x < 17; ++x)
                if (m.at(x, y)) {
                    x0 = std::min(x0, x), y0 = std::min(y0, y), x1 = std::max(x1, x), y1 = std::max(y1, y);
                }
        CHECK(r.count() == static_cast<std::size_t>((x1 - x0 + 1) * (y1 - y0 + 1)));
    }
}

TEST_CASE("rle examples and round trip") {
    CHECK(rle_encode(BitMask(2, 2)).counts == std::vector<std::uint32_t>{4});
    CHECK(rle_encode(~BitMask(2, 2)).counts == std::vector<std::uint32_t>{0, 4});
    BitMask row(4, 1);
    row.set(1, 0);
    row.set(2, 0);
    CHECK(rle_encode(row).counts == std::vector<std::uint32_t>{1, 2, 1});
    CHECK_THROWS_AS(rle_decode({2, 2, {3}}), FormatError);
    CHECK_THROWS_AS(rle_decode({2, 2, {1, 0, 3}}), FormatError);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        const int w = 1 + static_cast<int>(rng() % 20);
        const int h = 1 + static_cast<int>(rng() % 20);
        const BitMask m = oracle::random_mask(rng, w, h, (rng() % 100) / 100.0);
        const RleMask r = rle_encode(m);
        CHECK(rle_decode(r) == m);
        std::uint64_t sum = 0;
        for (std::size_t i = 0; i < r.counts.size(); ++i) {
            sum += r.counts[i];
            if (i > 0) CHECK(r.counts[i] > 0);
        }
        CHECK(sum == m.size());
    }
}

TEST_CASE("render_overlay") {
    GrayImage img(2, 1, 100);
    BitMask m(2, 1);
    m.set(0, 0);
    const BitMask before = m;
    const RgbImage half = render_overlay(img, m);
    CHECK(half.at(0, 0) == Rgb{50, 178, 50});
    CHECK(half.at(1, 0) == Rgb{100, 100, 100});
    CHECK(render_overlay(img, m, kGreen, 1.0).at(0, 0) == kGreen);
    const RgbImage none = render_overlay(img, m, Rgb{200, 10, 40}, 0.0);
    CHECK(none.at(0, 0) == Rgb{100, 100, 100});
    CHECK(m == before);
    CHECK_THROWS_AS(render_overlay(img, BitMask(1, 1)), DimensionMismatch);
    CHECK_THROWS_AS(render_overlay(img, m, kGreen, 1.5), InvalidArgument);
}
