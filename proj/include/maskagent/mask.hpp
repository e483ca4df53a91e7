#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace maskagent {

struct Pixel {
    int x = 0;
    int y = 0;
    bool operator==(const Pixel&) const = default;
};

// Binary raster, row-major, one byte per pixel (0 or 1).
class BitMask {
public:
    BitMask() = default;
    BitMask(int width, int height);
    BitMask(int width, int height, std::vector<std::uint8_t> bits);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return bits_.size(); }

    bool at(int x, int y) const { return bits_[index(x, y)] != 0; }
    bool at(Pixel p) const { return at(p.x, p.y); }
    void set(int x, int y, bool value = true) { bits_[index(x, y)] = value ? 1 : 0; }
    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    std::span<const std::uint8_t> bits() const { return bits_; }
    std::span<std::uint8_t> bits() { return bits_; }

    std::size_t count() const;
    bool any() const;
    bool same_shape(const BitMask& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

    BitMask& operator&=(const BitMask& other);
    BitMask& operator|=(const BitMask& other);
    BitMask& subtract(const BitMask& other);
    BitMask operator~() const;

    bool operator==(const BitMask&) const = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

BitMask operator&(BitMask a, const BitMask& b);
BitMask operator|(BitMask a, const BitMask& b);
BitMask operator-(BitMask a, const BitMask& b);

struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0);
    GrayImage(int w, int h, std::vector<std::uint8_t> data);

    std::uint8_t at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    bool operator==(const GrayImage&) const = default;
};

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    bool operator==(const Rgb&) const = default;
};

inline constexpr Rgb kGreen{0, 255, 0};

// Interleaved RGB raster.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    Rgb at(int x, int y) const {
        const std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
        return {pixels[i], pixels[i + 1], pixels[i + 2]};
    }
    bool operator==(const RgbImage&) const = default;
};

// Normalized coordinate, both axes in [0,1).
struct NormPoint {
    double x = 0.0;
    double y = 0.0;
    bool valid() const { return x >= 0.0 && x < 1.0 && y >= 0.0 && y < 1.0; }
    bool operator==(const NormPoint&) const = default;
};

struct NormBox {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;
    bool valid() const;
    bool operator==(const NormBox&) const = default;
};

// Largest double strictly below 1.
double below_one();
double clamp_unit(double v);

NormPoint pixel_to_norm(Pixel p, int width, int height);
Pixel norm_to_pixel(NormPoint p, int width, int height);

double iou(const BitMask& a, const BitMask& b);

// 4-connected components, ordered by their first pixel in row-major order.
std::vector<BitMask> components(const BitMask& mask);
// Component containing `seed`; empty mask when the seed pixel is unset.
BitMask component_at(const BitMask& mask, Pixel seed);

NormBox bbox(const BitMask& mask);
// Pixels covered by a normalized box, inverse of the bbox() convention.
BitMask box_raster(const NormBox& box, int width, int height);

struct RleMask {
    int height = 0;
    int width = 0;
    // Alternating runs, starting with a (possibly empty) run of zeros. Row-major.
    std::vector<std::uint32_t> counts;
    bool operator==(const RleMask&) const = default;
};

RleMask rle_encode(const BitMask& mask);
BitMask rle_decode(const RleMask& rle);

RgbImage render_overlay(const GrayImage& image, const BitMask& mask, Rgb color = kGreen,
                        double alpha = 0.5);

}  // namespace maskagent
