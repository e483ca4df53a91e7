#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "maskagent/mask.hpp"

namespace maskagent::pnm {

// Binary PGM (P5) / PPM (P6), maxval 255. Comments in headers are accepted on read.
std::string encode_pgm(const GrayImage& image);
GrayImage decode_pgm(std::string_view bytes);
std::string encode_ppm(const RgbImage& image);
RgbImage decode_ppm(std::string_view bytes);

// Masks are stored as PGM with 0 = background, 255 = foreground.
GrayImage mask_to_gray(const BitMask& mask);
BitMask gray_to_mask(const GrayImage& image);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);
BitMask read_mask(const std::filesystem::path& path);
void write_mask(const std::filesystem::path& path, const BitMask& mask);
void write_ppm(const std::filesystem::path& path, const RgbImage& image);

}  // namespace maskagent::pnm
