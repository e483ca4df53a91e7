#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>

namespace maskagent {

// FNV-1a, 64 bit. Stable across platforms; used for seeds and config hashes.
inline std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes,
                             std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (const auto b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t fnv1a64(std::string_view text) {
    return fnv1a64({reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

// Generator keyed by several 64-bit values, independent of call order.
inline std::mt19937_64 keyed_rng(std::initializer_list<std::uint64_t> keys) {
    std::seed_seq::result_type words[16] = {};
    std::size_t n = 0;
    for (const auto k : keys) {
        if (n + 2 > std::size(words)) break;
        words[n++] = static_cast<std::uint32_t>(k);
        words[n++] = static_cast<std::uint32_t>(k >> 32);
    }
    std::seed_seq seq(words, words + n);
    return std::mt19937_64(seq);
}

}  // namespace maskagent
