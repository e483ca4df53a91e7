#include "maskagent/segmenter.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>

#include "maskagent/error.hpp"

namespace maskagent {

namespace {

void clip_to_box(BitMask& mask, const std::optional<NormBox>& box) {
    if (box) mask &= box_raster(*box, mask.width(), mask.height());
}

BitMask grow(const GrayImage& image, Pixel seed, int delta, int cap) {
    BitMask region(image.width, image.height);
    std::vector<std::uint8_t> seen(region.size(), 0);
    const int base = image.at(seed.x, seed.y);
    std::deque<Pixel> queue{seed};
    seen[static_cast<std::size_t>(seed.y) * image.width + seed.x] = 1;
    int taken = 0;
    constexpr int dx[] = {0, -1, 1, 0};
    constexpr int dy[] = {-1, 0, 0, 1};
    while (!queue.empty() && taken < cap) {
        const Pixel p = queue.front();
        queue.pop_front();
        region.set(p.x, p.y);
        ++taken;
        for (int k = 0; k < 4; ++k) {
            const int nx = p.x + dx[k];
            const int ny = p.y + dy[k];
            if (nx < 0 || ny < 0 || nx >= image.width || ny >= image.height) continue;
            auto& s = seen[static_cast<std::size_t>(ny) * image.width + nx];
            if (s || std::abs(image.at(nx, ny) - base) > delta) continue;
            s = 1;
            queue.push_back({nx, ny});
        }
    }
    return region;
}

}  // namespace

BitMask oracle_segment(const BitMask& gt, std::span<const Action> clicks,
                       const std::optional<NormBox>& box, int r_neg) {
    const int w = gt.width();
    const int h = gt.height();
    BitMask out(w, h);
    for (const auto& a : clicks) {
        if (!a.is_positive()) continue;
        const Pixel p = norm_to_pixel(a.point(), w, h);
        if (gt.at(p) && !out.at(p)) out |= component_at(gt, p);
    }
    for (const auto& a : clicks) {
        if (!a.is_negative()) continue;
        const Pixel p = norm_to_pixel(a.point(), w, h);
        for (int y = std::max(0, p.y - r_neg); y <= std::min(h - 1, p.y + r_neg); ++y)
            for (int x = std::max(0, p.x - r_neg); x <= std::min(w - 1, p.x + r_neg); ++x)
                out.set(x, y, false);
    }
    clip_to_box(out, box);
    return out;
}

BitMask region_grow_segment(const GrayImage& image, std::span<const Action> clicks,
                            const std::optional<NormBox>& box, int delta, int cap) {
    BitMask positive(image.width, image.height);
    BitMask negative(image.width, image.height);
    for (const auto& a : clicks) {
        if (!a.is_click()) continue;
        const Pixel p = norm_to_pixel(a.point(), image.width, image.height);
        (a.is_positive() ? positive : negative) |= grow(image, p, delta, cap);
    }
    positive.subtract(negative);
    clip_to_box(positive, box);
    return positive;
}

OracleSegmenter::OracleSegmenter(int r_neg) : r_neg_(r_neg) {
    if (r_neg < 0) throw InvalidArgument("oracle r_neg must be >= 0");
}

BitMask OracleSegmenter::segment(const Task& task, std::span<const Action> clicks,
                                 const std::optional<NormBox>& box) const {
    return oracle_segment(task.target, clicks, box, r_neg_);
}

RegionGrowSegmenter::RegionGrowSegmenter(int delta, int cap) : delta_(delta), cap_(cap) {
    if (delta < 0 || delta > 255) throw InvalidArgument("region-grow delta must be in [0,255]");
    if (cap < 1) throw InvalidArgument("region-grow cap must be >= 1");
}

BitMask RegionGrowSegmenter::segment(const Task& task, std::span<const Action> clicks,
                                     const std::optional<NormBox>& box) const {
    return region_grow_segment(task.image, clicks, box, delta_, cap_);
}

}  // namespace maskagent
