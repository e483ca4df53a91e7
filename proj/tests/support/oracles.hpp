#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "maskagent/mask.hpp"
#include "maskagent/policy.hpp"

namespace oracle {

using maskagent::BitMask;

// Squared distance from each in-region pixel to the nearest out-of-region
// position, found by scanning every pixel plus the one-pixel ring outside.
std::vector<std::int32_t> edt_sq(const BitMask& region);

// Component label per pixel (-1 for background) by repeated min-label
// relaxation until nothing changes. Labels are the row-major index of each
// component's first pixel.
std::vector<int> component_labels(const BitMask& mask);
int component_count(const BitMask& mask);

// |a & b| / |a | b| counted pixel by pixel, 1.0 when both are empty.
double iou(const BitMask& a, const BitMask& b);

// Independent Bernoulli pixels.
BitMask random_mask(std::mt19937_64& rng, int w, int h, double p);
// Union of a few random rectangles and disks; produces thick error regions.
BitMask random_blobs(std::mt19937_64& rng, int w, int h, int max_blobs = 4);

// Always clicks the same point.
class ConstantPolicy final : public maskagent::Policy {
public:
    ConstantPolicy(maskagent::NormPoint p, bool positive) : action_(maskagent::Action::click(positive, p)) {}
    maskagent::ProposalBatch propose(const maskagent::Task&, const maskagent::EpisodeState&, int,
                                     std::uint64_t) const override {
        return {{{action_, std::nullopt}}, 0};
    }

private:
    maskagent::Action action_;
};

// Emits two background clicks, then the expert click, so the expert is never
// first in the candidate list.
class DistractedExpertPolicy final : public maskagent::Policy {
public:
    maskagent::ProposalBatch propose(const maskagent::Task& task, const maskagent::EpisodeState& state, int k,
                                     std::uint64_t salt) const override;
};

// Replays a fixed action list, then runs dry.
class ScriptPolicy final : public maskagent::Policy {
public:
    explicit ScriptPolicy(std::vector<maskagent::Action> script) : script_(std::move(script)) {}
    maskagent::ProposalBatch propose(const maskagent::Task&, const maskagent::EpisodeState& state, int,
                                     std::uint64_t) const override {
        if (state.step >= static_cast<int>(script_.size())) return {};
        return {{{script_[static_cast<std::size_t>(state.step)], std::nullopt}}, 0};
    }

private:
    std::vector<maskagent::Action> script_;
};

}  // namespace oracle
