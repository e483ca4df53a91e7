#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "maskagent/sft.hpp"
#include "maskagent/synth.hpp"
#include "support/oracles.hpp"

using namespace maskagent;

TEST_CASE("synth_tasks") {
    const auto a = synth_tasks(100, 64, 7);
    const auto b = synth_tasks(100, 64, 7);
    REQUIRE(a.size() == 100);
    std::set<std::string> ids;
    std::set<int> families;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == b[i].id);
        CHECK(a[i].image == b[i].image);
        CHECK(a[i].target == b[i].target);
        CHECK_NOTHROW(a[i].validate());
        ids.insert(a[i].id);
        families.insert(static_cast<int>(synth_family(static_cast<int>(i))));
        const int comps = oracle::component_count(a[i].target);
        if (synth_family(static_cast<int>(i)) == ShapeFamily::scatter) {
            CHECK(comps >= 2);
            CHECK(comps <= 3);
        } else {
            CHECK(comps == 1);
        }
        CHECK(a[i].prompt.find(std::string(synth_family(static_cast<int>(i)) == ShapeFamily::scatter
                                               ? "blobs"
                                               : to_string(synth_family(static_cast<int>(i))))) != std::string::npos);
        // contrast of at least 64 between every foreground and background pixel
        int fg_min = 255, fg_max = 0, bg_min = 255, bg_max = 0;
        for (int y = 0; y < 64; ++y)
            for (int x = 0; x < 64; ++x) {
                const int v = a[i].image.at(x, y);
                if (a[i].target.at(x, y)) fg_min = std::min(fg_min, v), fg_max = std::max(fg_max, v);
                else bg_min = std::min(bg_min, v), bg_max = std::max(bg_max, v);
            }
        CHECK((fg_min - bg_max >= 64 || bg_min - fg_max >= 64));
    }
    CHECK(ids.size() == 100);
    CHECK(families.size() == 5);
    CHECK(synth_tasks(3, 64, 8)[0].image != a[0].image);
    CHECK_THROWS(synth_tasks(0, 64, 1));
    CHECK_THROWS(synth_tasks(3, 15, 1));
}

TEST_CASE("thin bars are at most two pixels wide") {
    const auto tasks = synth_tasks(20, 48, 3);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (synth_family(static_cast<int>(i)) != ShapeFamily::thin_bar) continue;
        // a bar of width <= 2 has no pixel with squared depth above 1 once... check via erosion
        const auto& t = tasks[i].target;
        bool has_3x3 = false;
        for (int y = 1; y + 1 < 48; ++y)
            for (int x = 1; x + 1 < 48; ++x) {
                bool all = true;
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) all = all && t.at(x + dx, y + dy);
                has_3x3 = has_3x3 || all;
            }
        CHECK_FALSE(has_3x3);
    }
}

TEST_CASE("render_sft") {
    const auto tasks = synth_tasks(5, 32, 4);
    const OracleSegmenter seg;
    const Task& task = tasks[4];  // scatter, several steps
    const auto traj = generate_trajectory(task, seg, EnvConfig{});
    REQUIRE(traj.steps.size() >= 2);
    PromptConfig cfg;
    const auto samples = render_sft(traj, task, cfg);
    REQUIRE(samples.size() == traj.steps.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        CHECK(samples[i].prompt.find(task.prompt) != std::string::npos);
        CHECK(samples[i].composite.width == task.image.width);
        CHECK(samples[i].composite.height == task.image.height);
        CHECK(samples[i].target ==
              format_reward(traj.steps[i].reward_before) + "\n" + format_action(traj.steps[i].action, cfg.coord_format));
    }
    CHECK(samples[0].composite == render_overlay(task.image, BitMask(32, 32)));
    CHECK(samples[1].composite == render_overlay(task.image, rle_decode(traj.steps[0].mask_after)));

    cfg.with_reward = false;
    cfg.template_id = "minimal";
    cfg.coord_format = CoordFormat::decimal;
    const auto bare = render_sft(traj, task, cfg);
    CHECK(bare[0].target == format_action(traj.steps[0].action, CoordFormat::decimal));
    cfg.template_id = "nope";
    CHECK_THROWS(render_sft(traj, task, cfg));
}

TEST_CASE("reward line rounding in targets") {
    Trajectory t;
    t.task_id = "x";
    Task task{"x", GrayImage(4, 4), ~BitMask(4, 4), "all"};
    t.init_mask = rle_encode(BitMask(4, 4));
    t.steps.push_back({Action::positive({0.5, 0.5}), rle_encode(~BitMask(4, 4)), 0.734, 1.0, false});
    const auto s = render_sft(t, task, PromptConfig{});
    CHECK(s[0].target.rfind("Current mIoU: 73\n", 0) == 0);
}

TEST_CASE("write_sft layout") {
    const auto dir = std::filesystem::temp_directory_path() / "maskagent_sft_test";
    std::filesystem::remove_all(dir);
    const auto tasks = synth_tasks(3, 24, 1);
    const auto trajs = generate_trajectories(tasks, OracleSegmenter(), EnvConfig{}, {});
    std::size_t steps = 0;
    for (const auto& t : trajs) steps += t.steps.size();
    CHECK(write_sft(dir, tasks, trajs, PromptConfig{}) == steps);
    std::ifstream in(dir / "samples.jsonl");
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        const auto j = nlohmann::json::parse(line);
        CHECK(std::filesystem::exists(dir / j.at("image_path").get<std::string>()));
        CHECK(j.contains("prompt"));
        CHECK(j.contains("target"));
        ++n;
    }
    CHECK(n == steps);
    CHECK(std::filesystem::exists(dir / tasks[0].id / "step_0.ppm"));
    std::filesystem::remove_all(dir);
}
