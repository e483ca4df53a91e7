#include "maskagent/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "maskagent/error.hpp"
#include "maskagent/expert.hpp"
#include "maskagent/pnm.hpp"

namespace maskagent {

using nlohmann::json;

Trajectory generate_trajectory(const Task& task, const Segmenter& segmenter,
                               const EnvConfig& config, const InitSpec& init) {
    config.validate();
    EpisodeState state = reset(task, init, segmenter);
    Trajectory traj;
    traj.task_id = task.id;
    traj.init = init;
    traj.init_mask = rle_encode(state.mask);
    extend_with_expert(traj, std::move(state), task, segmenter, config, false);
    return traj;
}

void extend_with_expert(Trajectory& traj, EpisodeState state, const Task& task,
                        const Segmenter& segmenter, const EnvConfig& config, bool mark_corrected) {
    double current = reward(state.mask, task.target);
    StopReason stop = StopReason::running;
    while (stop == StopReason::running) {
        if (current >= config.tau_stop) {
            stop = StopReason::reached_tau_stop;
            break;
        }
        if (state.step >= config.max_steps) {
            stop = StopReason::max_steps;
            break;
        }
        const auto click = next_click(state.mask, task.target);
        if (!click) {
            stop = StopReason::converged;
            break;
        }
        StepResult res = step(state, *click, task, segmenter, config);
        const double gain = res.reward - current;
        if (gain < config.tau_diff || gain <= 0.0) {
            stop = StopReason::low_impact;
            break;
        }
        traj.steps.push_back({*click, rle_encode(res.state.mask), current, res.reward, mark_corrected});
        current = res.reward;
        state = std::move(res.state);
    }
    traj.final_reward = current;
    traj.stop_reason = stop;
}

namespace {

Trajectory failed_trajectory(const Task& task, const InitSpec& init, const std::string& what) {
    Trajectory t;
    t.task_id = task.id;
    t.init = init;
    t.init_mask = rle_encode(BitMask(task.image.width, task.image.height));
    t.stop_reason = StopReason::failed;
    t.error = what;
    return t;
}

Trajectory generate_guarded(const Task& task, const Segmenter& segmenter, const EnvConfig& config,
                            const InitSpec& init) {
    try {
        return generate_trajectory(task, segmenter, config, init);
    } catch (const std::exception& e) {
        return failed_trajectory(task, init, e.what());
    }
}

const InitSpec& init_for(const std::vector<InitSpec>& inits, std::size_t i) {
    static const InitSpec empty = InitEmpty{};
    return inits.empty() ? empty : inits.at(i);
}

}  // namespace

std::vector<Trajectory> generate_trajectories_serial(const std::vector<Task>& tasks,
                                                     const Segmenter& segmenter,
                                                     const EnvConfig& config,
                                                     const std::vector<InitSpec>& inits) {
    std::vector<Trajectory> out;
    out.reserve(tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i)
        out.push_back(generate_guarded(tasks[i], segmenter, config, init_for(inits, i)));
    return out;
}

std::vector<Trajectory> generate_trajectories(const std::vector<Task>& tasks,
                                              const Segmenter& segmenter, const EnvConfig& config,
                                              const std::vector<InitSpec>& inits) {
    if (!inits.empty() && inits.size() != tasks.size()) {
        throw InvalidArgument("one init spec per task expected");
    }
    std::vector<Trajectory> out(tasks.size());
    const long n = static_cast<long>(tasks.size());
#pragma omp parallel for schedule(dynamic) if (segmenter.shareable())
    for (long i = 0; i < n; ++i)
        out[i] = generate_guarded(tasks[i], segmenter, config, init_for(inits, i));
    return out;
}

std::vector<InitSpec> plan_inits(const std::vector<Task>& tasks, const InitMix& mix,
                                 std::uint64_t seed) {
    if (!(mix.box_share >= 0.0 && mix.random_share >= 0.0 && mix.box_share + mix.random_share <= 1.0 + 1e-12)) {
        throw InvalidArgument("init mix shares must be >= 0 and sum to at most 1");
    }
    // Exact quotas, assigned to a seeded permutation of the tasks.
    const std::size_t n = tasks.size();
    const auto n_box = static_cast<std::size_t>(std::llround(mix.box_share * static_cast<double>(n)));
    const auto n_random =
        std::min(n - std::min(n, n_box), static_cast<std::size_t>(std::llround(mix.random_share * static_cast<double>(n))));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    std::mt19937_64 shuffle_rng(seq);
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    std::vector<InitSpec> inits(n, InitEmpty{});
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t i = order[r];
        if (r < n_box) {
            inits[i] = InitFromBox{bbox(tasks[i].target)};
        } else if (r < n_box + n_random) {
            std::seed_seq task_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                                   static_cast<std::uint32_t>(i)};
            std::mt19937_64 rng(task_seq);
            const int n_pos = 1 + static_cast<int>(rng() % 2);
            const int n_neg = static_cast<int>(rng() % 2);
            inits[i] = InitRandomClicks{n_pos, n_neg, rng()};
        }
    }
    return inits;
}

void verify_replay(const Trajectory& traj, const Task& task, const Segmenter& segmenter,
                   const EnvConfig& config) {
    const auto fail = [&](const std::string& what) {
        throw CorruptInput("trajectory for " + traj.task_id + ": " + what);
    };
    EpisodeState state = reset(task, traj.init, segmenter);
    if (traj.init_mask.height != 0 && rle_encode(state.mask) != traj.init_mask) {
        fail("initial mask does not match the init spec");
    }
    double current = reward(state.mask, task.target);
    for (std::size_t i = 0; i < traj.steps.size(); ++i) {
        const auto& s = traj.steps[i];
        if (s.reward_before != current) fail("reward_before mismatch at step " + std::to_string(i));
        StepResult res;
        try {
            res = step(state, s.action, task, segmenter, config);
        } catch (const InvalidArgument& e) {
            fail("cannot replay step " + std::to_string(i) + ": " + e.what());
        }
        if (rle_encode(res.state.mask) != s.mask_after) fail("mask mismatch at step " + std::to_string(i));
        if (res.reward != s.reward_after) fail("reward_after mismatch at step " + std::to_string(i));
        current = res.reward;
        state = std::move(res.state);
    }
    if (traj.stop_reason != StopReason::failed && traj.final_reward != current) {
        fail("final_reward does not match the last step");
    }
}

double mean_final_reward(const std::vector<Trajectory>& trajectories) {
    if (trajectories.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& t : trajectories) sum += t.final_reward;
    return sum / static_cast<double>(trajectories.size());
}

void to_json(json& j, const NormBox& b) {
    j = json{{"x1", b.x1}, {"y1", b.y1}, {"x2", b.x2}, {"y2", b.y2}};
}

void from_json(const json& j, NormBox& b) {
    b = {j.at("x1").get<double>(), j.at("y1").get<double>(), j.at("x2").get<double>(),
         j.at("y2").get<double>()};
}

void to_json(json& j, const RleMask& r) {
    j = json{{"size", {r.height, r.width}}, {"counts", r.counts}};
}

void from_json(const json& j, RleMask& r) {
    const auto& size = j.at("size");
    r.height = size.at(0).get<int>();
    r.width = size.at(1).get<int>();
    r.counts = j.at("counts").get<std::vector<std::uint32_t>>();
}

json action_to_json(const Action& a) {
    json j{{"kind", to_string(a.kind())}};
    if (a.is_click()) {
        j["x"] = a.point().x;
        j["y"] = a.point().y;
    } else {
        const auto& b = a.corners();
        j["x1"] = b.x1;
        j["y1"] = b.y1;
        j["x2"] = b.x2;
        j["y2"] = b.y2;
    }
    return j;
}

Action action_from_json(const json& j) {
    const auto kind = parse_action_kind(j.at("kind").get<std::string>());
    if (kind == ActionKind::box) return Action::box(j.get<NormBox>());
    return Action::click(kind == ActionKind::positive_click,
                         {j.at("x").get<double>(), j.at("y").get<double>()});
}

json init_to_json(const InitSpec& init) {
    if (const auto* b = std::get_if<InitFromBox>(&init)) {
        return {{"variant", "from_box"}, {"box", b->box}};
    }
    if (const auto* r = std::get_if<InitRandomClicks>(&init)) {
        return {{"variant", "from_random_clicks"}, {"n_pos", r->n_pos}, {"n_neg", r->n_neg}, {"seed", r->seed}};
    }
    return {{"variant", "empty"}};
}

InitSpec init_from_json(const json& j) {
    const auto variant = j.at("variant").get<std::string>();
    if (variant == "empty") return InitEmpty{};
    if (variant == "from_box") return InitFromBox{j.at("box").get<NormBox>()};
    if (variant == "from_random_clicks") {
        return InitRandomClicks{j.at("n_pos").get<int>(), j.at("n_neg").get<int>(),
                                j.at("seed").get<std::uint64_t>()};
    }
    throw FormatError("unknown init variant '" + variant + "'");
}

json trajectory_to_json(const Trajectory& t) {
    json steps = json::array();
    for (const auto& s : t.steps) {
        json js{{"action", action_to_json(s.action)},
                {"mask_after", s.mask_after},
                {"reward_before", s.reward_before},
                {"reward_after", s.reward_after}};
        if (s.corrected) js["corrected"] = true;
        steps.push_back(std::move(js));
    }
    json j{{"task_id", t.task_id},
           {"init", init_to_json(t.init)},
           {"init_mask", t.init_mask},
           {"steps", std::move(steps)},
           {"final_reward", t.final_reward},
           {"stop_reason", to_string(t.stop_reason)}};
    if (!t.error.empty()) j["error"] = t.error;
    return j;
}

Trajectory trajectory_from_json(const json& j) {
    Trajectory t;
    t.task_id = j.at("task_id").get<std::string>();
    t.init = init_from_json(j.at("init"));
    if (j.contains("init_mask")) t.init_mask = j.at("init_mask").get<RleMask>();
    for (const auto& js : j.at("steps")) {
        TrajectoryStep s{action_from_json(js.at("action")), js.at("mask_after").get<RleMask>(),
                         js.at("reward_before").get<double>(), js.at("reward_after").get<double>(),
                         js.value("corrected", false)};
        t.steps.push_back(std::move(s));
    }
    t.final_reward = j.at("final_reward").get<double>();
    t.stop_reason = parse_stop_reason(j.at("stop_reason").get<std::string>());
    t.error = j.value("error", std::string{});
    return t;
}

void write_jsonl(const std::vector<Trajectory>& trajectories, const std::filesystem::path& path) {
    std::string out;
    for (const auto& t : trajectories) {
        out += trajectory_to_json(t).dump();
        out += '\n';
    }
    pnm::write_file(path, out);
}

std::vector<Trajectory> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<Trajectory> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(trajectory_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            throw FormatError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace maskagent
