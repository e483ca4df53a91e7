#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "maskagent/env.hpp"
#include "maskagent/policy.hpp"

namespace maskagent {

struct SearchConfig {
    int k = 1;          // candidates per step
    int max_steps = 7;  // steps after the initial state
    double convergence_eps = 1e-3;
    int convergence_patience = 2;

    void validate() const;

    static SearchConfig simple_profile() { return {1, 7, 1e-3, 2}; }
    static SearchConfig complex_profile() { return {3, 11, 1e-3, 2}; }
};

struct SearchCandidate {
    Action action;
    std::optional<double> stated_reward;
    double score = 0.0;     // PRM score of the mask this candidate produces
    double true_iou = 0.0;  // diagnostic only; never used for decisions
};

struct SearchStep {
    int step = 0;
    std::vector<SearchCandidate> candidates;
    int rejected = 0;
    int chosen = -1;
    double best_so_far = 0.0;
};

struct SearchResult {
    BitMask best_mask;
    double best_reward = 0.0;  // PRM score of best_mask
    int best_step = 0;         // 0 is the initial mask
    double initial_reward = 0.0;
    std::vector<BitMask> masks;  // adopted mask per step, masks[0] = initial
    std::vector<SearchStep> trace;
    StopReason stop_reason = StopReason::running;
};

// PRM-guided greedy search. Each step asks the policy for k candidates,
// drops duplicates (same kind and pixel), scores the mask each candidate
// produces with the PRM, and adopts the best (first on ties). Stops at
// max_steps, when no candidate is left, or when the running best has not
// improved by more than convergence_eps for convergence_patience steps.
// Returns the adopted mask with the highest PRM score over all steps,
// including the initial one.
SearchResult prm_greedy(const Task& task, const Policy& policy, const Prm& prm,
                        const Segmenter& segmenter, const SearchConfig& config,
                        const InitSpec& init = InitEmpty{}, std::uint64_t seed = 0);

struct GreedyResult {
    BitMask final_mask;
    std::vector<BitMask> masks;
    int steps = 0;
};

// Baseline: always takes the policy's first proposal for exactly `steps`
// steps (fewer if the policy runs dry) and returns the last mask.
GreedyResult fixed_step_greedy(const Task& task, const Policy& policy, const Segmenter& segmenter,
                               int steps, const InitSpec& init = InitEmpty{}, std::uint64_t seed = 0);

nlohmann::json search_to_json(const SearchResult& result, const std::string& task_id);

}  // namespace maskagent
