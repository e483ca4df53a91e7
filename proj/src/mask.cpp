#include "maskagent/mask.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <string>

#include "maskagent/error.hpp"

namespace maskagent {

namespace {

void require_dims(int width, int height) {
    if (width < 1 || height < 1) {
        throw InvalidArgument("raster dimensions must be positive, got " + std::to_string(width) +
                              "x" + std::to_string(height));
    }
}

void require_same_shape(const BitMask& a, const BitMask& b, const char* what) {
    if (!a.same_shape(b)) {
        throw DimensionMismatch(std::string(what) + ": " + std::to_string(a.width()) + "x" +
                                std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                                "x" + std::to_string(b.height()));
    }
}

}  // namespace

BitMask::BitMask(int width, int height) : width_(width), height_(height) {
    require_dims(width, height);
    bits_.assign(static_cast<std::size_t>(width) * height, 0);
}

BitMask::BitMask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
    require_dims(width, height);
    if (bits_.size() != static_cast<std::size_t>(width) * height) {
        throw DimensionMismatch("bit count does not match width*height");
    }
    for (auto& b : bits_) b = b ? 1 : 0;
}

std::size_t BitMask::count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool BitMask::any() const {
    return std::any_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b != 0; });
}

BitMask& BitMask::operator&=(const BitMask& other) {
    require_same_shape(*this, other, "mask intersection");
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= other.bits_[i];
    return *this;
}

BitMask& BitMask::operator|=(const BitMask& other) {
    require_same_shape(*this, other, "mask union");
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
    return *this;
}

BitMask& BitMask::subtract(const BitMask& other) {
    require_same_shape(*this, other, "mask difference");
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= static_cast<std::uint8_t>(!other.bits_[i]);
    return *this;
}

BitMask BitMask::operator~() const {
    BitMask out = *this;
    for (auto& b : out.bits_) b = static_cast<std::uint8_t>(!b);
    return out;
}

BitMask operator&(BitMask a, const BitMask& b) { return a &= b; }
BitMask operator|(BitMask a, const BitMask& b) { return a |= b; }
BitMask operator-(BitMask a, const BitMask& b) { return a.subtract(b); }

GrayImage::GrayImage(int w, int h, std::uint8_t fill) : width(w), height(h) {
    require_dims(w, h);
    pixels.assign(static_cast<std::size_t>(w) * h, fill);
}

GrayImage::GrayImage(int w, int h, std::vector<std::uint8_t> data)
    : width(w), height(h), pixels(std::move(data)) {
    require_dims(w, h);
    if (pixels.size() != static_cast<std::size_t>(w) * h) {
        throw DimensionMismatch("pixel count does not match width*height");
    }
}

bool NormBox::valid() const {
    const auto in = [](double v) { return v >= 0.0 && v < 1.0; };
    return in(x1) && in(y1) && in(x2) && in(y2) && x1 <= x2 && y1 <= y2;
}

double below_one() { return std::nextafter(1.0, 0.0); }

double clamp_unit(double v) {
    if (!(v >= 0.0)) return 0.0;  // also catches NaN
    return std::min(v, below_one());
}

NormPoint pixel_to_norm(Pixel p, int width, int height) {
    return {(p.x + 0.5) / width, (p.y + 0.5) / height};
}

Pixel norm_to_pixel(NormPoint p, int width, int height) {
    const auto axis = [](double v, int n) {
        const double scaled = std::floor(v * n);
        if (!(scaled >= 0.0)) return 0;
        return static_cast<int>(std::min<double>(scaled, n - 1));
    };
    return {axis(p.x, width), axis(p.y, height)};
}

double iou(const BitMask& a, const BitMask& b) {
    require_same_shape(a, b, "iou");
    std::size_t inter = 0;
    std::size_t uni = 0;
    const auto x = a.bits();
    const auto y = b.bits();
    for (std::size_t i = 0; i < x.size(); ++i) {
        inter += x[i] & y[i];
        uni += x[i] | y[i];
    }
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

// BFS flood over set pixels of `mask` from `seed`, neighbors in N, W, E, S order.
void flood(const BitMask& mask, Pixel seed, BitMask& out, std::vector<std::uint8_t>& seen) {
    const int w = mask.width();
    std::deque<Pixel> queue{seed};
    seen[static_cast<std::size_t>(seed.y) * w + seed.x] = 1;
    constexpr int dx[] = {0, -1, 1, 0};
    constexpr int dy[] = {-1, 0, 0, 1};
    while (!queue.empty()) {
        const Pixel p = queue.front();
        queue.pop_front();
        out.set(p.x, p.y);
        for (int k = 0; k < 4; ++k) {
            const int nx = p.x + dx[k];
            const int ny = p.y + dy[k];
            if (!mask.contains(nx, ny) || !mask.at(nx, ny)) continue;
            auto& s = seen[static_cast<std::size_t>(ny) * w + nx];
            if (s) continue;
            s = 1;
            queue.push_back({nx, ny});
        }
    }
}

}  // namespace

std::vector<BitMask> components(const BitMask& mask) {
    std::vector<BitMask> out;
    std::vector<std::uint8_t> seen(mask.size(), 0);
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.at(x, y) || seen[static_cast<std::size_t>(y) * mask.width() + x]) continue;
            BitMask comp(mask.width(), mask.height());
            flood(mask, {x, y}, comp, seen);
            out.push_back(std::move(comp));
        }
    }
    return out;
}

BitMask component_at(const BitMask& mask, Pixel seed) {
    BitMask comp(mask.width(), mask.height());
    if (!mask.contains(seed.x, seed.y) || !mask.at(seed)) return comp;
    std::vector<std::uint8_t> seen(mask.size(), 0);
    flood(mask, seed, comp, seen);
    return comp;
}

NormBox bbox(const BitMask& mask) {
    int x0 = mask.width(), y0 = mask.height(), x1 = -1, y1 = -1;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.at(x, y)) continue;
            x0 = std::min(x0, x);
            y0 = std::min(y0, y);
            x1 = std::max(x1, x);
            y1 = std::max(y1, y);
        }
    }
    if (x1 < 0) throw InvalidArgument("bbox of an empty mask");
    const double w = mask.width();
    const double h = mask.height();
    return {clamp_unit(x0 / w), clamp_unit(y0 / h), clamp_unit((x1 + 1) / w),
            clamp_unit((y1 + 1) / h)};
}

BitMask box_raster(const NormBox& box, int width, int height) {
    // Small epsilon absorbs the rounding in k/n round trips.
    constexpr double eps = 1e-9;
    const auto first = [](double v, int n) {
        return std::clamp(static_cast<int>(std::floor(v * n + eps)), 0, n - 1);
    };
    const auto last = [](double v, int n) {
        return std::clamp(static_cast<int>(std::ceil(v * n - eps)) - 1, 0, n - 1);
    };
    BitMask out(width, height);
    const int xa = first(box.x1, width);
    const int ya = first(box.y1, height);
    const int xb = std::max(xa, last(box.x2, width));
    const int yb = std::max(ya, last(box.y2, height));
    for (int y = ya; y <= yb; ++y)
        for (int x = xa; x <= xb; ++x) out.set(x, y);
    return out;
}

RleMask rle_encode(const BitMask& mask) {
    RleMask rle{mask.height(), mask.width(), {}};
    std::uint8_t current = 0;
    std::uint32_t run = 0;
    for (const auto b : mask.bits()) {
        if (b != current) {
            rle.counts.push_back(run);
            run = 0;
            current = b;
        }
        ++run;
    }
    rle.counts.push_back(run);
    return rle;
}

BitMask rle_decode(const RleMask& rle) {
    if (rle.height < 1 || rle.width < 1) throw FormatError("rle: nonpositive size");
    const std::size_t total = static_cast<std::size_t>(rle.height) * rle.width;
    std::size_t sum = 0;
    for (std::size_t i = 0; i < rle.counts.size(); ++i) {
        if (i > 0 && rle.counts[i] == 0) throw FormatError("rle: zero-length run after the first");
        sum += rle.counts[i];
    }
    if (sum != total) {
        throw FormatError("rle: run lengths sum to " + std::to_string(sum) + ", expected " +
                          std::to_string(total));
    }
    std::vector<std::uint8_t> bits;
    bits.reserve(total);
    std::uint8_t value = 0;
    for (const auto run : rle.counts) {
        bits.insert(bits.end(), run, value);
        value ^= 1;
    }
    return BitMask(rle.width, rle.height, std::move(bits));
}

RgbImage render_overlay(const GrayImage& image, const BitMask& mask, Rgb color, double alpha) {
    if (image.width != mask.width() || image.height != mask.height()) {
        throw DimensionMismatch("overlay: image and mask dimensions differ");
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("overlay alpha must be in [0,1]");
    RgbImage out{image.width, image.height, {}};
    out.pixels.resize(3 * image.pixels.size());
    const auto blend = [alpha](std::uint8_t gray, std::uint8_t c) {
        return static_cast<std::uint8_t>(std::lround((1.0 - alpha) * gray + alpha * c));
    };
    const auto bits = mask.bits();
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
        const std::uint8_t g = image.pixels[i];
        std::uint8_t* px = &out.pixels[3 * i];
        if (bits[i]) {
            px[0] = blend(g, color.r);
            px[1] = blend(g, color.g);
            px[2] = blend(g, color.b);
        } else {
            px[0] = px[1] = px[2] = g;
        }
    }
    return out;
}

}  // namespace maskagent
