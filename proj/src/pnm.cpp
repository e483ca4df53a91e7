#include "maskagent/pnm.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "maskagent/error.hpp"

namespace maskagent::pnm {

namespace {

struct Header {
    int width = 0;
    int height = 0;
    std::size_t data_offset = 0;
};

Header parse_header(std::string_view bytes, std::string_view magic) {
    if (bytes.size() < 2 || bytes.substr(0, 2) != magic) {
        throw FormatError("expected " + std::string(magic) + " image");
    }
    std::size_t pos = 2;
    const auto skip_space = [&] {
        while (pos < bytes.size()) {
            const char c = bytes[pos];
            if (c == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
            } else {
                break;
            }
        }
    };
    const auto read_int = [&] {
        skip_space();
        long value = 0;
        const std::size_t start = pos;
        while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
            value = value * 10 + (bytes[pos] - '0');
            if (value > 1'000'000) throw FormatError("image header value too large");
            ++pos;
        }
        if (pos == start) throw FormatError("malformed image header");
        return static_cast<int>(value);
    };
    Header h;
    h.width = read_int();
    h.height = read_int();
    const int maxval = read_int();
    if (maxval != 255) throw FormatError("only maxval 255 is supported");
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        throw FormatError("malformed image header");
    }
    h.data_offset = pos + 1;
    if (h.width < 1 || h.height < 1) throw FormatError("image dimensions must be positive");
    return h;
}

std::string header(std::string_view magic, int w, int h) {
    std::ostringstream os;
    os << magic << '\n' << w << ' ' << h << "\n255\n";
    return os.str();
}

}  // namespace

std::string encode_pgm(const GrayImage& image) {
    std::string out = header("P5", image.width, image.height);
    out.append(image.pixels.begin(), image.pixels.end());
    return out;
}

GrayImage decode_pgm(std::string_view bytes) {
    const Header h = parse_header(bytes, "P5");
    const std::size_t n = static_cast<std::size_t>(h.width) * h.height;
    if (bytes.size() - h.data_offset < n) throw FormatError("truncated PGM data");
    const auto* p = reinterpret_cast<const std::uint8_t*>(bytes.data() + h.data_offset);
    return GrayImage(h.width, h.height, std::vector<std::uint8_t>(p, p + n));
}

std::string encode_ppm(const RgbImage& image) {
    std::string out = header("P6", image.width, image.height);
    out.append(image.pixels.begin(), image.pixels.end());
    return out;
}

RgbImage decode_ppm(std::string_view bytes) {
    const Header h = parse_header(bytes, "P6");
    const std::size_t n = 3 * static_cast<std::size_t>(h.width) * h.height;
    if (bytes.size() - h.data_offset < n) throw FormatError("truncated PPM data");
    const auto* p = reinterpret_cast<const std::uint8_t*>(bytes.data() + h.data_offset);
    return RgbImage{h.width, h.height, std::vector<std::uint8_t>(p, p + n)};
}

GrayImage mask_to_gray(const BitMask& mask) {
    GrayImage img(mask.width(), mask.height());
    const auto bits = mask.bits();
    for (std::size_t i = 0; i < bits.size(); ++i) img.pixels[i] = bits[i] ? 255 : 0;
    return img;
}

BitMask gray_to_mask(const GrayImage& image) {
    std::vector<std::uint8_t> bits(image.pixels.size());
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = image.pixels[i] != 0;
    return BitMask(image.width, image.height, std::move(bits));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

GrayImage read_pgm(const std::filesystem::path& path) {
    try {
        return decode_pgm(read_file(path));
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
    write_file(path, encode_pgm(image));
}

BitMask read_mask(const std::filesystem::path& path) { return gray_to_mask(read_pgm(path)); }

void write_mask(const std::filesystem::path& path, const BitMask& mask) {
    write_pgm(path, mask_to_gray(mask));
}

void write_ppm(const std::filesystem::path& path, const RgbImage& image) {
    write_file(path, encode_ppm(image));
}

}  // namespace maskagent::pnm
