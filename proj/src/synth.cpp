#include "maskagent/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <string>

#include "maskagent/error.hpp"

namespace maskagent {

std::string_view to_string(ShapeFamily family) {
    switch (family) {
        case ShapeFamily::disk: return "disk";
        case ShapeFamily::rectangle: return "rectangle";
        case ShapeFamily::ring: return "ring";
        case ShapeFamily::thin_bar: return "thin bar";
        case ShapeFamily::scatter: return "scatter";
    }
    return "unknown";
}

ShapeFamily synth_family(int index) {
    return static_cast<ShapeFamily>(index % kShapeFamilyCount);
}

namespace {

using Rng = std::mt19937_64;

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

void fill_disk(BitMask& m, int cx, int cy, int r) {
    for (int y = std::max(0, cy - r); y <= std::min(m.height() - 1, cy + r); ++y)
        for (int x = std::max(0, cx - r); x <= std::min(m.width() - 1, cx + r); ++x)
            if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) m.set(x, y);
}

void fill_rect(BitMask& m, int x0, int y0, int w, int h) {
    for (int y = y0; y < std::min(m.height(), y0 + h); ++y)
        for (int x = x0; x < std::min(m.width(), x0 + w); ++x) m.set(x, y);
}

BitMask make_disk(Rng& rng, int s) {
    BitMask m(s, s);
    const int r = uniform(rng, s / 8, s / 3);
    fill_disk(m, uniform(rng, r + 1, s - r - 2), uniform(rng, r + 1, s - r - 2), r);
    return m;
}

BitMask make_rect(Rng& rng, int s) {
    BitMask m(s, s);
    const int w = uniform(rng, s / 6, s / 2);
    const int h = uniform(rng, s / 6, s / 2);
    fill_rect(m, uniform(rng, 1, s - w - 1), uniform(rng, 1, s - h - 1), w, h);
    return m;
}

BitMask make_ring(Rng& rng, int s) {
    BitMask outer(s, s);
    const int r = uniform(rng, s / 5, s / 3);
    const int cx = uniform(rng, r + 1, s - r - 2);
    const int cy = uniform(rng, r + 1, s - r - 2);
    fill_disk(outer, cx, cy, r);
    BitMask inner(s, s);
    fill_disk(inner, cx, cy, r - uniform(rng, 2, std::max(2, r / 2)));
    return outer - inner;
}

BitMask make_bar(Rng& rng, int s) {
    BitMask m(s, s);
    const int thick = uniform(rng, 1, 2);
    const int len = uniform(rng, s / 2, s * 9 / 10);
    const int a = uniform(rng, 1, s - len - 1);
    const int b = uniform(rng, 1, s - thick - 1);
    if (rng() % 2) {
        fill_rect(m, a, b, len, thick);
    } else {
        fill_rect(m, b, a, thick, len);
    }
    return m;
}

BitMask make_scatter(Rng& rng, int s) {
    const int want = uniform(rng, 2, 3);
    BitMask m(s, s);
    int placed = 0;
    for (int attempt = 0; placed < want; ++attempt) {
        if (attempt > 200) {  // restart on a crowded canvas
            m = BitMask(s, s);
            placed = 0;
            attempt = 0;
        }
        const int r = uniform(rng, std::max(1, s / 16), std::max(2, s / 8));
        const int cx = uniform(rng, r + 1, s - r - 2);
        const int cy = uniform(rng, r + 1, s - r - 2);
        BitMask blob(s, s);
        if (rng() % 2) {
            fill_disk(blob, cx, cy, r);
        } else {
            fill_rect(blob, cx - r, cy - r, 2 * r + 1, 2 * r + 1);
        }
        // Keep a gap of two pixels so blobs stay separate components.
        BitMask halo(s, s);
        fill_rect(halo, std::max(0, cx - r - 2), std::max(0, cy - r - 2), 2 * r + 5, 2 * r + 5);
        if ((halo & m).any()) continue;
        m |= blob;
        ++placed;
    }
    return m;
}

}  // namespace

std::vector<Task> synth_tasks(int n, int side, std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("synth: n must be >= 1");
    if (side < 16) throw InvalidArgument("synth: side must be >= 16");
    std::vector<Task> tasks;
    tasks.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(i)};
        Rng rng(seq);
        const ShapeFamily family = synth_family(i);
        BitMask target;
        switch (family) {
            case ShapeFamily::disk: target = make_disk(rng, side); break;
            case ShapeFamily::rectangle: target = make_rect(rng, side); break;
            case ShapeFamily::ring: target = make_ring(rng, side); break;
            case ShapeFamily::thin_bar: target = make_bar(rng, side); break;
            case ShapeFamily::scatter: target = make_scatter(rng, side); break;
        }

        // Base levels differ by >= 72 so +-4 noise keeps every pixel pair >= 64 apart.
        int bg = uniform(rng, 16, 90);
        int fg = bg + uniform(rng, 80, 140);
        const bool dark_object = rng() % 2;
        if (dark_object) std::swap(bg, fg);
        GrayImage image(side, side);
        for (int y = 0; y < side; ++y)
            for (int x = 0; x < side; ++x)
                image.at(x, y) = static_cast<std::uint8_t>((target.at(x, y) ? fg : bg) + uniform(rng, -4, 4));

        char id[32];
        std::snprintf(id, sizeof id, "synth_%05d", i);
        std::string prompt = std::string(dark_object ? "the dark " : "the bright ");
        prompt += family == ShapeFamily::scatter ? "scattered blobs" : std::string(to_string(family));
        tasks.push_back({id, std::move(image), std::move(target), std::move(prompt)});
    }
    return tasks;
}

}  // namespace maskagent
