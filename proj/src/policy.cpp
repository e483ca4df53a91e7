#include "maskagent/policy.hpp"

#include <algorithm>

#include "maskagent/error.hpp"
#include "maskagent/expert.hpp"
#include "maskagent/hash.hpp"

namespace maskagent {

void NoiseConfig::validate() const {
    if (!(sigma >= 0.0)) throw InvalidArgument("noise sigma must be >= 0");
    if (!(flip_prob >= 0.0 && flip_prob <= 1.0)) throw InvalidArgument("flip_prob must be in [0,1]");
}

namespace {

void push_unique(std::vector<PolicyProposal>& out, PolicyProposal p) {
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
}

}  // namespace

std::vector<PolicyProposal> expert_propose(const Task& task, const EpisodeState& state, int k,
                                           const std::optional<NoiseConfig>& noise,
                                           std::uint64_t salt) {
    if (k < 1) throw InvalidArgument("k must be >= 1");
    const auto base = next_click(state.mask, task.target);
    if (!base) return {};
    std::vector<PolicyProposal> out;
    if (!noise) {
        out.push_back({*base, std::nullopt});
        return out;
    }
    noise->validate();
    auto rng = keyed_rng({noise->seed, salt, fnv1a64(task.id), static_cast<std::uint64_t>(state.step)});
    std::normal_distribution<double> jitter(0.0, 1.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const NormPoint p = base->point();
    for (int i = 0; i < k; ++i) {
        // Draws happen unconditionally so the stream layout does not depend on sigma.
        const double dx = jitter(rng) * noise->sigma;
        const double dy = jitter(rng) * noise->sigma;
        const bool flip = coin(rng) < noise->flip_prob;
        const NormPoint q{clamp_unit(p.x + dx), clamp_unit(p.y + dy)};
        push_unique(out, {Action::click(base->is_positive() != flip, q), std::nullopt});
    }
    return out;
}

ProposalBatch ExpertPolicy::propose(const Task& task, const EpisodeState& state, int k,
                                    std::uint64_t salt) const {
    return {expert_propose(task, state, k, std::nullopt, salt), 0};
}

NoisyExpertPolicy::NoisyExpertPolicy(NoiseConfig noise) : noise_(noise) { noise_.validate(); }

ProposalBatch NoisyExpertPolicy::propose(const Task& task, const EpisodeState& state, int k,
                                         std::uint64_t salt) const {
    return {expert_propose(task, state, k, noise_, salt), 0};
}

TextChannelPolicy::TextChannelPolicy(std::shared_ptr<const Policy> inner, CoordFormat format)
    : inner_(std::move(inner)), format_(format) {
    if (!inner_) throw InvalidArgument("text channel needs an inner policy");
}

ProposalBatch TextChannelPolicy::propose(const Task& task, const EpisodeState& state, int k,
                                         std::uint64_t salt) const {
    ProposalBatch in = inner_->propose(task, state, k, salt);
    ProposalBatch out{{}, in.rejected};
    for (const auto& p : in.proposals) {
        try {
            auto parsed = parse_action(format_action(p.action, format_), format_);
            push_unique(out.proposals, {parsed.action, p.stated_reward});
        } catch (const ActionParseError&) {
            ++out.rejected;
        }
    }
    return out;
}

double OraclePrm::score(const Task& task, const BitMask& mask) const {
    return reward(mask, task.target);
}

NoisyPrm::NoisyPrm(double sigma, std::uint64_t seed) : sigma_(sigma), seed_(seed) {
    if (!(sigma >= 0.0)) throw InvalidArgument("PRM noise sigma must be >= 0");
}

double NoisyPrm::score(const Task& task, const BitMask& mask) const {
    const double truth = reward(mask, task.target);
    if (sigma_ == 0.0) return truth;
    auto rng = keyed_rng({seed_, fnv1a64(task.id), fnv1a64(mask.bits())});
    const double noisy = truth + std::normal_distribution<double>(0.0, sigma_)(rng);
    return std::clamp(noisy, 0.0, 1.0);
}

}  // namespace maskagent
