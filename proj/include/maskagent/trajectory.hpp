#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "maskagent/env.hpp"
#include "maskagent/mask.hpp"

namespace maskagent {

struct TrajectoryStep {
    Action action;
    RleMask mask_after;
    double reward_before = 0.0;
    double reward_after = 0.0;
    // Set when the action was substituted by the click simulator during refinement.
    bool corrected = false;

    bool operator==(const TrajectoryStep&) const = default;
};

struct Trajectory {
    std::string task_id;
    InitSpec init = InitEmpty{};
    RleMask init_mask;
    std::vector<TrajectoryStep> steps;
    double final_reward = 0.0;
    StopReason stop_reason = StopReason::running;
    std::string error;  // set when stop_reason == failed

    bool operator==(const Trajectory&) const = default;
};

// Expert trajectory with the three generation rules: step budget, stop at
// tau_stop, and discard-and-stop on an action gaining less than tau_diff.
Trajectory generate_trajectory(const Task& task, const Segmenter& segmenter,
                               const EnvConfig& config, const InitSpec& init = InitEmpty{});

// Continues `state` with expert clicks under the generation rules, appending
// to `traj`. Shared by generation and refinement.
void extend_with_expert(Trajectory& traj, EpisodeState state, const Task& task,
                        const Segmenter& segmenter, const EnvConfig& config, bool mark_corrected);

// One trajectory per task, in task order. Tasks are spread over OpenMP
// threads when the segmenter is shareable; a failing task is recorded with
// stop_reason failed instead of aborting the batch.
std::vector<Trajectory> generate_trajectories(const std::vector<Task>& tasks,
                                              const Segmenter& segmenter, const EnvConfig& config,
                                              const std::vector<InitSpec>& inits);
std::vector<Trajectory> generate_trajectories_serial(const std::vector<Task>& tasks,
                                                     const Segmenter& segmenter,
                                                     const EnvConfig& config,
                                                     const std::vector<InitSpec>& inits);

// Init-state mix: `box_share` of tasks start from their target's box,
// `random_share` from a few seeded random clicks, the rest from an empty mask.
struct InitMix {
    double box_share = 0.1;
    double random_share = 0.1;
};
std::vector<InitSpec> plan_inits(const std::vector<Task>& tasks, const InitMix& mix,
                                 std::uint64_t seed);

// Re-runs the stored actions and checks every stored mask and reward.
// Throws CorruptInput on the first divergence.
void verify_replay(const Trajectory& traj, const Task& task, const Segmenter& segmenter,
                   const EnvConfig& config);

double mean_final_reward(const std::vector<Trajectory>& trajectories);

void to_json(nlohmann::json& j, const NormBox& b);
void from_json(const nlohmann::json& j, NormBox& b);
void to_json(nlohmann::json& j, const RleMask& r);
void from_json(const nlohmann::json& j, RleMask& r);
nlohmann::json action_to_json(const Action& a);
Action action_from_json(const nlohmann::json& j);
nlohmann::json init_to_json(const InitSpec& init);
InitSpec init_from_json(const nlohmann::json& j);
nlohmann::json trajectory_to_json(const Trajectory& t);
Trajectory trajectory_from_json(const nlohmann::json& j);

// One JSON object per line.
void write_jsonl(const std::vector<Trajectory>& trajectories, const std::filesystem::path& path);
// Throws FormatError naming the 1-based line number of the first bad line.
std::vector<Trajectory> read_jsonl(const std::filesystem::path& path);

}  // namespace maskagent
