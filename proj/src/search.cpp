#include "maskagent/search.hpp"

#include <tuple>

#include "maskagent/error.hpp"
#include "maskagent/grammar.hpp"
#include "maskagent/trajectory.hpp"

namespace maskagent {

using nlohmann::json;

void SearchConfig::validate() const {
    if (k < 1) throw InvalidArgument("search k must be >= 1");
    if (max_steps < 1) throw InvalidArgument("search max_steps must be >= 1");
    if (!(convergence_eps >= 0.0)) throw InvalidArgument("convergence_eps must be >= 0");
    if (convergence_patience < 1) throw InvalidArgument("convergence_patience must be >= 1");
}

namespace {

using CandidateKey = std::tuple<ActionKind, int, int, int, int>;

CandidateKey key_of(const Action& a, int w, int h) {
    if (a.is_click()) {
        const Pixel p = norm_to_pixel(a.point(), w, h);
        return {a.kind(), p.x, p.y, 0, 0};
    }
    const auto& b = a.corners();
    return {a.kind(), quantize_coord(b.x1), quantize_coord(b.y1), quantize_coord(b.x2), quantize_coord(b.y2)};
}

EpisodeState adopt(const EpisodeState& state, const Action& action, BitMask mask) {
    EpisodeState next = state;
    next.history.push_back(action);
    next.mask = std::move(mask);
    ++next.step;
    return next;
}

}  // namespace

SearchResult prm_greedy(const Task& task, const Policy& policy, const Prm& prm,
                        const Segmenter& segmenter, const SearchConfig& config,
                        const InitSpec& init, std::uint64_t seed) {
    config.validate();
    const int w = task.image.width;
    const int h = task.image.height;
    EpisodeState state = reset(task, init, segmenter);

    SearchResult result;
    result.initial_reward = prm.score(task, state.mask);
    result.best_reward = result.initial_reward;
    result.best_mask = state.mask;
    result.masks.push_back(state.mask);
    double running_best = result.initial_reward;
    int stale = 0;

    for (int t = 1; t <= config.max_steps; ++t) {
        const ProposalBatch batch = policy.propose(task, state, config.k, seed);
        SearchStep trace{t, {}, batch.rejected, -1, running_best};
        std::vector<CandidateKey> keys;
        for (const auto& p : batch.proposals) {
            if (static_cast<int>(trace.candidates.size()) == config.k) break;
            const auto key = key_of(p.action, w, h);
            if (std::find(keys.begin(), keys.end(), key) != keys.end()) continue;
            keys.push_back(key);
            trace.candidates.push_back({p.action, p.stated_reward, 0.0, 0.0});
        }
        if (trace.candidates.empty()) {
            result.trace.push_back(std::move(trace));
            result.stop_reason = StopReason::policy_exhausted;
            break;
        }

        std::vector<BitMask> branch(trace.candidates.size());
        const long n = static_cast<long>(branch.size());
        const bool parallel = n > 1 && segmenter.shareable() && prm.shareable();
        std::vector<std::string> errors(branch.size());
#pragma omp parallel for if (parallel)
        for (long i = 0; i < n; ++i) {
            try {
                branch[i] = predict_mask(state, trace.candidates[i].action, task, segmenter);
                trace.candidates[i].score = prm.score(task, branch[i]);
                trace.candidates[i].true_iou = reward(branch[i], task.target);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
        for (const auto& e : errors)
            if (!e.empty()) throw Error("search step " + std::to_string(t) + " for " + task.id + ": " + e);

        int chosen = 0;
        for (int i = 1; i < static_cast<int>(n); ++i)
            if (trace.candidates[i].score > trace.candidates[chosen].score) chosen = i;
        trace.chosen = chosen;
        const double score = trace.candidates[chosen].score;

        state = adopt(state, trace.candidates[chosen].action, std::move(branch[chosen]));
        result.masks.push_back(state.mask);
        if (score > result.best_reward) {
            result.best_reward = score;
            result.best_mask = state.mask;
            result.best_step = t;
        }
        stale = score > running_best + config.convergence_eps ? 0 : stale + 1;
        running_best = std::max(running_best, score);
        trace.best_so_far = running_best;
        result.trace.push_back(std::move(trace));

        if (stale >= config.convergence_patience) {
            result.stop_reason = StopReason::converged;
            break;
        }
    }
    if (result.stop_reason == StopReason::running) result.stop_reason = StopReason::max_steps;
    return result;
}

GreedyResult fixed_step_greedy(const Task& task, const Policy& policy, const Segmenter& segmenter,
                               int steps, const InitSpec& init, std::uint64_t seed) {
    if (steps < 0) throw InvalidArgument("step count must be >= 0");
    EpisodeState state = reset(task, init, segmenter);
    GreedyResult out;
    out.masks.push_back(state.mask);
    for (int t = 0; t < steps; ++t) {
        const auto batch = policy.propose(task, state, 1, seed);
        if (batch.proposals.empty()) break;
        const Action& a = batch.proposals.front().action;
        state = adopt(state, a, predict_mask(state, a, task, segmenter));
        out.masks.push_back(state.mask);
        ++out.steps;
    }
    out.final_mask = state.mask;
    return out;
}

json search_to_json(const SearchResult& result, const std::string& task_id) {
    json steps = json::array();
    for (const auto& s : result.trace) {
        json cands = json::array();
        for (const auto& c : s.candidates) {
            json jc{{"action", action_to_json(c.action)}, {"score", c.score}, {"true_iou", c.true_iou}};
            if (c.stated_reward) jc["stated_reward"] = *c.stated_reward;
            cands.push_back(std::move(jc));
        }
        steps.push_back({{"step", s.step},
                         {"candidates", std::move(cands)},
                         {"rejected", s.rejected},
                         {"chosen", s.chosen},
                         {"best_so_far", s.best_so_far}});
    }
    return {{"task_id", task_id},
            {"initial_reward", result.initial_reward},
            {"best_reward", result.best_reward},
            {"best_step", result.best_step},
            {"best_mask", rle_encode(result.best_mask)},
            {"stop_reason", to_string(result.stop_reason)},
            {"trace", std::move(steps)}};
}

}  // namespace maskagent
