#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "maskagent/env.hpp"
#include "maskagent/policy.hpp"
#include "maskagent/trajectory.hpp"

namespace maskagent {

// Greedy episodes: take the policy's first proposal each step and record every
// step (no discard rule). Stops when the episode is done or the policy has
// nothing to propose. Failures are recorded per task (stop_reason failed).
std::vector<Trajectory> rollout(const Policy& policy, const std::vector<Task>& tasks,
                                const Segmenter& segmenter, const EnvConfig& config,
                                std::uint64_t seed, const std::vector<InitSpec>& inits = {});
std::vector<Trajectory> rollout_serial(const Policy& policy, const std::vector<Task>& tasks,
                                       const Segmenter& segmenter, const EnvConfig& config,
                                       std::uint64_t seed, const std::vector<InitSpec>& inits = {});
Trajectory rollout_one(const Policy& policy, const Task& task, const Segmenter& segmenter,
                       const EnvConfig& config, std::uint64_t seed, const InitSpec& init = InitEmpty{});

struct RefineOptions {
    // Keep a policy action only when it strictly raises the reward; when false
    // the gain must also reach tau_diff.
    bool strict_retention = true;
};

// Replays the rollout, keeping actions while they raise the reward. The first
// action that does not is replaced by the click simulator's action and the
// rest of the rollout is dropped; the episode then continues with expert
// clicks under the generation rules. Throws CorruptInput when the replay does
// not reproduce the stored masks.
Trajectory refine_star_plus(const Trajectory& rollout_traj, const Task& task, const Segmenter& segmenter,
                            const EnvConfig& config, const RefineOptions& options = {});

// Trajectories whose final reward is at least tau_star, in order.
std::vector<Trajectory> star_filter(const std::vector<Trajectory>& trajectories, double tau_star);

enum class Provenance { generated, rollout, refined, merged };
std::string_view to_string(Provenance p);
Provenance parse_provenance(std::string_view text);

struct DatasetManifest {
    std::string name;
    std::vector<std::string> files;
    Provenance provenance = Provenance::generated;
    std::size_t trajectories = 0;
    std::size_t steps = 0;

    bool operator==(const DatasetManifest&) const = default;
};

nlohmann::json manifest_to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const nlohmann::json& j);
DatasetManifest describe_dataset(std::string name, std::vector<std::filesystem::path> files,
                                 Provenance provenance);
// Re-reads every referenced file and checks the recorded counts.
void validate_manifest(const DatasetManifest& m);

struct TrainHook {
    enum class Mode { emit_only, external_command };
    Mode mode = Mode::emit_only;
    std::string command_template;  // must contain {dataset}

    void validate() const;
    // Runs the command with {dataset} replaced; throws on nonzero exit.
    void invoke(const std::filesystem::path& dataset) const;
};

enum class StarMode { star, star_plus };
std::string_view to_string(StarMode mode);
StarMode parse_star_mode(std::string_view text);

struct StarConfig {
    StarMode mode = StarMode::star_plus;
    int iterations = 1;
    double tau_star = 0.95;  // star mode filter threshold
    std::uint64_t seed = 0;
    RefineOptions refine;
};

struct IterationReport {
    int iteration = 0;
    std::size_t n_rollouts = 0;
    std::size_t n_corrections = 0;
    double mean_reward_raw = 0.0;
    double mean_reward_refined = 0.0;
    std::size_t train_size = 0;
};

nlohmann::json report_to_json(const IterationReport& r);

struct StarResult {
    DatasetManifest final_dataset;
    std::vector<IterationReport> reports;
};

// Iterated rollout -> filter (star) or refine (star_plus) -> train. Training
// uses D_n alone in star mode and D_0 + D_n in star_plus mode. Every dataset
// is written under `out_dir`.
StarResult star_iteration(const StarConfig& config, const Policy& policy,
                          const std::vector<Trajectory>& d0, const std::vector<Task>& tasks,
                          const Segmenter& segmenter, const EnvConfig& env_config,
                          const TrainHook& hook, const std::filesystem::path& out_dir);

}  // namespace maskagent
