#include <doctest.h>

#include <random>

#include "maskagent/segmenter.hpp"
#include "support/oracles.hpp"

using namespace maskagent;

namespace {

BitMask two_blocks() {
    BitMask gt(10, 6);
    for (int y = 1; y < 4; ++y) {
        for (int x = 0; x < 3; ++x) gt.set(x, y);
        for (int x = 6; x < 9; ++x) gt.set(x, y);
    }
    return gt;
}

NormPoint center(int x, int y, const BitMask& m) { return pixel_to_norm({x, y}, m.width(), m.height()); }

}  // namespace

TEST_CASE("oracle_segment examples") {
    const BitMask gt = two_blocks();
    CHECK(oracle_segment(gt, {}, std::nullopt).count() == 0);
    const std::vector<Action> one{Action::positive(center(1, 2, gt))};
    const BitMask a = oracle_segment(gt, one, std::nullopt);
    CHECK(a.count() == 9);
    CHECK(a.at(0, 1));
    CHECK_FALSE(a.at(6, 1));
    const std::vector<Action> both{Action::positive(center(1, 2, gt)), Action::positive(center(7, 2, gt))};
    CHECK(oracle_segment(gt, both, std::nullopt) == gt);
    const std::vector<Action> bg{Action::positive(center(4, 0, gt))};
    CHECK(oracle_segment(gt, bg, std::nullopt).count() == 0);
}

TEST_CASE("oracle negative carve-out and box clip") {
    const BitMask gt = two_blocks();
    const std::vector<Action> clicks{Action::positive(center(1, 2, gt)), Action::negative(center(0, 1, gt))};
    const BitMask m = oracle_segment(gt, clicks, std::nullopt, 1);
    CHECK_FALSE(m.at(0, 1));
    CHECK_FALSE(m.at(1, 2));
    CHECK(m.at(2, 3));
    const std::vector<Action> both{Action::positive(center(1, 2, gt)), Action::positive(center(7, 2, gt))};
    const NormBox left{0.0, 0.0, 0.5, below_one()};
    const BitMask clipped = oracle_segment(gt, both, left);
    CHECK(clipped.count() == 9);
}

TEST_CASE("oracle output is a subset of gt and a union of components") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const BitMask gt = oracle::random_blobs(rng, 16, 16);
        std::vector<Action> clicks;
        for (int i = 0; i < 3; ++i)
            clicks.push_back(Action::positive(center(static_cast<int>(rng() % 16), static_cast<int>(rng() % 16), gt)));
        const BitMask m = oracle_segment(gt, clicks, std::nullopt);
        CHECK((m - gt).count() == 0);
        for (const auto& c : components(gt)) {
            const auto inter = (c & m).count();
            CHECK((inter == 0 || inter == c.count()));
        }
    }
}

TEST_CASE("region_grow examples") {
    GrayImage flat(8, 8, 40);
    CHECK(region_grow_segment(flat, {}, std::nullopt, 16, 100).count() == 0);
    const std::vector<Action> click{Action::positive({0.5, 0.5})};
    CHECK(region_grow_segment(flat, click, std::nullopt, 16, 64).count() == 64);
    CHECK(region_grow_segment(flat, click, std::nullopt, 16, 10).count() == 10);

    GrayImage split(8, 4, 255);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) split.at(x, y) = 0;
    const std::vector<Action> left{Action::positive({0.1, 0.5})};
    const BitMask m = region_grow_segment(split, left, std::nullopt, 16, 1000);
    CHECK(m.count() == 16);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 8; ++x) CHECK(m.at(x, y) == (x < 4));
    const std::vector<Action> with_neg{Action::positive({0.1, 0.5}), Action::negative({0.3, 0.5})};
    CHECK(region_grow_segment(split, with_neg, std::nullopt, 16, 1000).count() == 0);
}

TEST_CASE("segmenter classes") {
    Task t{"t", GrayImage(10, 6, 0), two_blocks(), "blocks"};
    const std::vector<Action> one{Action::positive(center(1, 2, t.target))};
    CHECK(OracleSegmenter().segment(t, one, std::nullopt).count() == 9);
    CHECK(EmptySegmenter().segment(t, one, std::nullopt).count() == 0);
    CHECK(RegionGrowSegmenter(8, 4096).segment(t, one, std::nullopt).count() == 60);
}
