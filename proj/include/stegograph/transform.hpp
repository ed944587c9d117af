#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stegograph/errors.hpp"

namespace stegograph {

// Optional payload byte transform, applied to each payload's flat bytes
// before chunking and inverted after merging. xor_keystream is an
// involution: the stream is seeded by FNV-1a 64 of the key and generated
// by splitmix64, eight little-endian bytes per step. It hides payload
// structure from casual inspection; it is not a real cipher.
enum class TransformKind { identity, xor_keystream };

struct TransformSpec {
    TransformKind kind = TransformKind::identity;
    std::vector<std::uint8_t> key;

    static TransformSpec identity() { return {}; }
    static TransformSpec xor_keystream(std::vector<std::uint8_t> key) {
        return {TransformKind::xor_keystream, std::move(key)};
    }
};

namespace detail {

inline std::uint64_t fnv1a64(std::span<const std::uint8_t> data) {
    std::uint64_t h = 14695981039346656037ull;
    for (std::uint8_t b : data) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace detail

inline std::vector<std::uint8_t> apply_transform(std::span<const std::uint8_t> bytes,
                                                 const TransformSpec& spec) {
    switch (spec.kind) {
    case TransformKind::identity:
        return {bytes.begin(), bytes.end()};
    case TransformKind::xor_keystream: {
        if (spec.key.empty())
            throw ConfigError("xor-keystream transform requires a non-empty key");
        std::vector<std::uint8_t> out(bytes.begin(), bytes.end());
        std::uint64_t state = detail::fnv1a64(spec.key);
        for (std::size_t i = 0; i < out.size(); i += 8) {
            const std::uint64_t block = detail::splitmix64(state);
            const std::size_t n = std::min<std::size_t>(8, out.size() - i);
            for (std::size_t j = 0; j < n; ++j)
                out[i + j] ^= static_cast<std::uint8_t>(block >> (8 * j));
        }
        return out;
    }
    }
    throw ConfigError("unknown transform kind");
}

} // namespace stegograph
