#include <doctest.h>

#include "maskagent/improve.hpp"
#include "maskagent/search.hpp"
#include "maskagent/synth.hpp"
#include "support/oracles.hpp"

using namespace maskagent;

TEST_CASE("initial optimal mask is returned") {
    const auto tasks = synth_tasks(5, 32, 1);
    const OracleSegmenter seg;
    for (const auto& t : tasks) {
        const auto r = prm_greedy(t, oracle::ConstantPolicy({0.0, 0.0}, false), OraclePrm(), seg,
                                  SearchConfig{3, 7, 1e-3, 2}, InitFromBox{bbox(t.target)});
        if (reward(box_raster(bbox(t.target), 32, 32), t.target) < 1.0) continue;
        CHECK(r.best_step == 0);
        CHECK(r.best_mask == t.target);
    }
    Task square{"sq", GrayImage(8, 8), BitMask(8, 8), "square"};
    for (int y = 2; y < 6; ++y)
        for (int x = 2; x < 6; ++x) square.target.set(x, y);
    const auto r = prm_greedy(square, oracle::ConstantPolicy({0.5, 0.5}, false), OraclePrm(), seg,
                              SearchConfig{1, 7, 1e-3, 2}, InitFromBox{bbox(square.target)});
    CHECK(r.best_step == 0);
    CHECK(r.best_reward == 1.0);
    CHECK(r.best_mask == square.target);
    CHECK(r.masks.size() > 1);
}

TEST_CASE("K=1 with a deterministic policy equals rollout") {
    const auto tasks = synth_tasks(20, 32, 2);
    const RegionGrowSegmenter seg;
    const NoisyExpertPolicy policy(NoiseConfig{0.1, 0.2, 5});
    const SearchConfig sc{1, 7, 0.0, 7};
    const EnvConfig ec{7, 1.0, 0.0};
    for (const auto& t : tasks) {
        const auto s = prm_greedy(t, policy, OraclePrm(), seg, sc, InitEmpty{}, 3);
        const auto r = rollout_one(policy, t, seg, ec, 3);
        REQUIRE(s.masks.size() == r.steps.size() + 1);
        for (std::size_t i = 0; i < r.steps.size(); ++i) {
            CHECK(s.masks[i + 1] == rle_decode(r.steps[i].mask_after));
            CHECK(s.trace[i].candidates[static_cast<std::size_t>(s.trace[i].chosen)].action == r.steps[i].action);
        }
    }
}

TEST_CASE("oracle PRM picks the expert among distractors") {
    const auto tasks = synth_tasks(10, 32, 3);
    const OracleSegmenter seg;
    for (const auto& t : tasks) {
        const auto r = prm_greedy(t, oracle::DistractedExpertPolicy(), OraclePrm(), seg, SearchConfig{3, 7, 1e-3, 2});
        for (const auto& st : r.trace) {
            if (st.chosen < 0) {
                CHECK(st.candidates.empty());
                continue;
            }
            CHECK(st.chosen == static_cast<int>(st.candidates.size()) - 1);
            double best = -1.0;
            for (const auto& c : st.candidates) best = std::max(best, c.true_iou);
            CHECK(st.candidates[static_cast<std::size_t>(st.chosen)].true_iou == best);
        }
        CHECK(r.best_reward == 1.0);
    }
}

TEST_CASE("search invariants") {
    const auto tasks = synth_tasks(20, 32, 4);
    const RegionGrowSegmenter seg;
    const NoisyExpertPolicy policy(NoiseConfig{0.15, 0.3, 6});
    const NoisyPrm prm(0.05, 2);
    for (const auto& t : tasks) {
        const auto r = prm_greedy(t, policy, prm, seg, SearchConfig{3, 7, 1e-3, 2});
        double best = r.initial_reward;
        double prev = r.initial_reward;
        for (const auto& st : r.trace) {
            CHECK(st.best_so_far >= prev);
            prev = st.best_so_far;
            if (st.chosen >= 0) best = std::max(best, st.candidates[static_cast<std::size_t>(st.chosen)].score);
        }
        CHECK(r.best_reward == best);
        CHECK(prm.score(t, r.best_mask) == r.best_reward);
        CHECK(static_cast<int>(r.trace.size()) <= 7);
        CHECK_NOTHROW(search_to_json(r, t.id).dump());
    }
    CHECK_THROWS(SearchConfig{0, 7, 1e-3, 2}.validate());
    CHECK_THROWS(SearchConfig{1, 7, 1e-3, 0}.validate());
}

TEST_CASE("fixed_step_greedy") {
    const auto tasks = synth_tasks(3, 32, 5);
    const auto r = fixed_step_greedy(tasks[0], oracle::ConstantPolicy({0.0, 0.0}, true), OracleSegmenter(), 5);
    CHECK(r.steps == 5);
    CHECK(r.masks.size() == 6);
    const auto s = fixed_step_greedy(tasks[0], ExpertPolicy(), OracleSegmenter(), 5);
    CHECK(s.final_mask == tasks[0].target);
    CHECK(s.steps == 1);
}
