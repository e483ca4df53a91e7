#include <doctest.h>

#include <random>

#include "maskagent/edt.hpp"
#include "support/oracles.hpp"

using namespace maskagent;

TEST_CASE("edt examples") {
    const auto zero = edt_sq(BitMask(5, 4));
    for (auto v : zero.values) CHECK(v == 0);

    BitMask single(7, 6);
    single.set(4, 2);
    const auto s = edt_sq(single);
    CHECK(s.at(4, 2) == 1);
    CHECK(s.at(3, 2) == 0);

    const auto full3 = edt_sq(~BitMask(3, 3));
    CHECK(full3.values == std::vector<std::int32_t>{1, 1, 1, 1, 4, 1, 1, 1, 1});
}

TEST_CASE("argmax_point") {
    DistanceField f{2, 2, {0, 1, 4, 4}};
    const auto m = argmax_point(f);
    CHECK(m.at == Pixel{0, 1});
    CHECK(m.value == 4);
    const auto z = argmax_point(DistanceField{3, 3, std::vector<std::int32_t>(9, 0)});
    CHECK(z.at == Pixel{0, 0});
    CHECK(z.value == 0);
    CHECK(argmax_point(edt_sq(~BitMask(5, 5))).at == Pixel{2, 2});
}

TEST_CASE("edt matches brute force, serial and parallel agree") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 150; ++trial) {
        const int w = 1 + static_cast<int>(rng() % 24);
        const int h = 1 + static_cast<int>(rng() % 24);
        const BitMask m = trial % 2 ? oracle::random_mask(rng, w, h, 0.7) : oracle::random_blobs(rng, w, h);
        const auto field = edt_sq(m);
        CHECK(field.values == oracle::edt_sq(m));
        CHECK(field == edt_sq_serial(m));
    }
}

TEST_CASE("parallel path on a large raster equals serial") {
    std::mt19937_64 rng(8);
    const BitMask m = oracle::random_blobs(rng, 300, 260, 12);
    CHECK(edt_sq(m) == edt_sq_serial(m));
}
