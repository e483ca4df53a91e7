#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "maskagent/action.hpp"
#include "maskagent/env.hpp"
#include "maskagent/grammar.hpp"
#include "maskagent/task.hpp"

namespace maskagent {

struct PolicyProposal {
    Action action;
    // Reward the policy claimed for the current state, if it said one.
    std::optional<double> stated_reward;

    bool operator==(const PolicyProposal&) const = default;
};

struct ProposalBatch {
    std::vector<PolicyProposal> proposals;
    int rejected = 0;  // unparseable replies dropped by text-based policies
};

// pi(a | mask, image, prompt). Implementations must be deterministic given
// (task, state, k, salt); `salt` lets callers draw independent streams.
class Policy {
public:
    virtual ~Policy() = default;
    virtual ProposalBatch propose(const Task& task, const EpisodeState& state, int k,
                                  std::uint64_t salt) const = 0;
    virtual bool shareable() const { return true; }
};

struct NoiseConfig {
    double sigma = 0.0;      // std dev in normalized coordinates
    double flip_prob = 0.0;  // chance of flipping the click attribute
    std::uint64_t seed = 0;

    void validate() const;
};

// Up to k proposals derived from the click simulator. Without noise this is
// exactly the simulator's click; with noise each copy is jittered by
// Gaussian(0, sigma), clamped into [0,1), and flipped with flip_prob.
// Duplicates are dropped in order. Empty when prediction equals the target.
std::vector<PolicyProposal> expert_propose(const Task& task, const EpisodeState& state, int k,
                                           const std::optional<NoiseConfig>& noise,
                                           std::uint64_t salt = 0);

class ExpertPolicy final : public Policy {
public:
    ProposalBatch propose(const Task& task, const EpisodeState& state, int k,
                          std::uint64_t salt) const override;
};

class NoisyExpertPolicy final : public Policy {
public:
    explicit NoisyExpertPolicy(NoiseConfig noise);
    ProposalBatch propose(const Task& task, const EpisodeState& state, int k,
                          std::uint64_t salt) const override;
    const NoiseConfig& noise() const { return noise_; }

private:
    NoiseConfig noise_;
};

// Sends another policy's actions through the text grammar and back, as a
// text-emitting model would. Used by the coordinate-format ablation.
class TextChannelPolicy final : public Policy {
public:
    TextChannelPolicy(std::shared_ptr<const Policy> inner, CoordFormat format);
    ProposalBatch propose(const Task& task, const EpisodeState& state, int k,
                          std::uint64_t salt) const override;
    bool shareable() const override { return inner_->shareable(); }

private:
    std::shared_ptr<const Policy> inner_;
    CoordFormat format_;
};

// Process reward model: predicted IoU of a mask for a task.
class Prm {
public:
    virtual ~Prm() = default;
    virtual double score(const Task& task, const BitMask& mask) const = 0;
    virtual bool shareable() const { return true; }
};

class OraclePrm final : public Prm {
public:
    double score(const Task& task, const BitMask& mask) const override;
};

// Oracle score plus seeded Gaussian noise, clamped to [0,1]. The noise draw is
// keyed by (seed, task id, mask contents) so repeated queries agree.
class NoisyPrm final : public Prm {
public:
    NoisyPrm(double sigma, std::uint64_t seed);
    double score(const Task& task, const BitMask& mask) const override;

private:
    double sigma_;
    std::uint64_t seed_;
};

}  // namespace maskagent
