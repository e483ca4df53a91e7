#include <doctest.h>

#include <random>

#include "maskagent/expert.hpp"
#include "support/oracles.hpp"

using namespace maskagent;

namespace {

std::int32_t region_max(const std::vector<std::int32_t>& f) {
    std::int32_t m = 0;
    for (auto v : f) m = std::max(m, v);
    return m;
}

}  // namespace

TEST_CASE("next_click examples") {
    CHECK_FALSE(next_click(BitMask(4, 4), BitMask(4, 4)));
    const auto c = next_click(BitMask(5, 5), ~BitMask(5, 5));
    REQUIRE(c);
    CHECK(c->is_positive());
    CHECK(c->point() == NormPoint{0.5, 0.5});

    BitMask gt(20, 20);
    for (int y = 2; y < 8; ++y)
        for (int x = 2; x < 8; ++x) gt.set(x, y);
    BitMask pred = gt;
    for (int y = 12; y < 17; ++y)
        for (int x = 12; x < 17; ++x) pred.set(x, y);
    const auto neg = next_click(pred, gt);
    REQUIRE(neg);
    CHECK(neg->is_negative());
    CHECK(norm_to_pixel(neg->point(), 20, 20) == Pixel{14, 14});
}

TEST_CASE("tie goes to the negative click") {
    BitMask gt(5, 1), pred(5, 1);
    gt.set(0, 0);
    pred.set(4, 0);
    const auto c = next_click(pred, gt);
    REQUIRE(c);
    CHECK(c->is_negative());
}

TEST_CASE("next_click agrees with brute force") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        const int w = 2 + static_cast<int>(rng() % 20);
        const int h = 2 + static_cast<int>(rng() % 20);
        const BitMask gt = oracle::random_blobs(rng, w, h);
        const BitMask pred = trial % 3 ? oracle::random_blobs(rng, w, h) : oracle::random_mask(rng, w, h, 0.5);
        const auto fn = oracle::edt_sq(gt - pred);
        const auto fp = oracle::edt_sq(pred - gt);
        const auto c = next_click(pred, gt);
        if (gt == pred) {
            CHECK_FALSE(c);
            continue;
        }
        REQUIRE(c);
        const bool want_pos = region_max(fn) > region_max(fp);
        CHECK(c->is_positive() == want_pos);
        const Pixel p = norm_to_pixel(c->point(), w, h);
        const auto& field = want_pos ? fn : fp;
        const auto value = field[static_cast<std::size_t>(p.y) * w + p.x];
        CHECK(value == region_max(field));
        CHECK(value > 0);
        CHECK((want_pos ? gt.at(p) && !pred.at(p) : pred.at(p) && !gt.at(p)));
        // first row-major maximum
        const auto first = std::find(field.begin(), field.end(), region_max(field)) - field.begin();
        CHECK(first == static_cast<long>(p.y) * w + p.x);
    }
}
