#pragma once

#include <optional>
#include <span>

#include "maskagent/action.hpp"
#include "maskagent/mask.hpp"
#include "maskagent/task.hpp"

namespace maskagent {

// Interactive segmentation model: (image, full click history, box?) -> mask.
class Segmenter {
public:
    virtual ~Segmenter() = default;

    // `clicks` holds click actions only, oldest first.
    virtual BitMask segment(const Task& task, std::span<const Action> clicks,
                            const std::optional<NormBox>& box) const = 0;

    virtual bool supports_box() const { return true; }
    // True when concurrent calls on one instance are safe.
    virtual bool shareable() const { return true; }
};

// Ground-truth-aware stand-in: components of `gt` hit by a positive click,
// minus (2*r_neg+1)^2 squares around negative clicks, clipped to the box.
BitMask oracle_segment(const BitMask& gt, std::span<const Action> clicks,
                       const std::optional<NormBox>& box, int r_neg = 2);

// Ground-truth-free intensity flood fill; each seed region is capped at
// `cap` pixels in BFS order (neighbors N, W, E, S).
BitMask region_grow_segment(const GrayImage& image, std::span<const Action> clicks,
                            const std::optional<NormBox>& box, int delta, int cap);

class OracleSegmenter final : public Segmenter {
public:
    explicit OracleSegmenter(int r_neg = 2);
    BitMask segment(const Task& task, std::span<const Action> clicks,
                    const std::optional<NormBox>& box) const override;
    int r_neg() const { return r_neg_; }

private:
    int r_neg_;
};

class RegionGrowSegmenter final : public Segmenter {
public:
    explicit RegionGrowSegmenter(int delta = 24, int cap = 2048);
    BitMask segment(const Task& task, std::span<const Action> clicks,
                    const std::optional<NormBox>& box) const override;

private:
    int delta_;
    int cap_;
};

// Never selects anything. Handy for exercising low-impact and NoC-cap paths.
class EmptySegmenter final : public Segmenter {
public:
    BitMask segment(const Task& task, std::span<const Action>,
                    const std::optional<NormBox>&) const override {
        return BitMask(task.image.width, task.image.height);
    }
};

}  // namespace maskagent
