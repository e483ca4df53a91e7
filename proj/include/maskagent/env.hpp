#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "maskagent/action.hpp"
#include "maskagent/mask.hpp"
#include "maskagent/segmenter.hpp"
#include "maskagent/task.hpp"

namespace maskagent {

enum class StopReason {
    running,
    reached_tau_stop,
    max_steps,
    converged,         // expert has nothing left to correct
    low_impact,        // action discarded for gaining less than tau_diff
    policy_exhausted,  // policy produced no usable action
    failed,            // remote or runtime failure, recorded per task
};

std::string_view to_string(StopReason reason);
StopReason parse_stop_reason(std::string_view text);

struct EnvConfig {
    int max_steps = 7;
    double tau_stop = 0.95;
    double tau_diff = 0.01;

    void validate() const;

    // Step budgets used for simple referring tasks and for complex thin-structure tasks.
    static EnvConfig simple_profile() { return {7, 0.95, 0.01}; }
    static EnvConfig complex_profile() { return {11, 0.95, 0.01}; }
};

struct InitEmpty {
    bool operator==(const InitEmpty&) const = default;
};
struct InitFromBox {
    NormBox box;
    bool operator==(const InitFromBox&) const = default;
};
struct InitRandomClicks {
    int n_pos = 1;
    int n_neg = 0;
    std::uint64_t seed = 0;
    bool operator==(const InitRandomClicks&) const = default;
};
using InitSpec = std::variant<InitEmpty, InitFromBox, InitRandomClicks>;

struct EpisodeState {
    int step = 0;
    BitMask mask;
    std::vector<Action> history;
    std::optional<NormBox> init_box;
    bool finished = false;
    StopReason stop_reason = StopReason::running;

    bool operator==(const EpisodeState&) const = default;
};

struct StepResult {
    EpisodeState state;
    double reward = 0.0;
    bool done = false;
    StopReason stop_reason = StopReason::running;
};

double reward(const BitMask& mask, const BitMask& target);

EpisodeState reset(const Task& task, const InitSpec& init, const Segmenter& segmenter);

// Mask the segmenter produces after appending `action` to the history. No
// episode bookkeeping; search uses this to evaluate candidate branches.
BitMask predict_mask(const EpisodeState& state, const Action& action, const Task& task,
                     const Segmenter& segmenter);

StepResult step(const EpisodeState& state, const Action& action, const Task& task,
                const Segmenter& segmenter, const EnvConfig& config);

}  // namespace maskagent
