#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stegograph/errors.hpp"
#include "stegograph/image.hpp"

namespace stegograph {

// One slot = one channel byte of the cover, visited in row-major pixel
// order with R,G,B inside each pixel (i.e. plain data[] order). A slot
// holds k payload bits in its k low positions. Payload bytes are consumed
// MSB-first and each k-bit group lands with its first-consumed bit in the
// highest of the k positions, so the embedded stream maps linearly onto
// bit positions: stream bit b lives in slot b/k at in-slot offset b%k.

inline void validate_bits_per_slot(int k) {
    if (k < 1 || k > 3)
        throw ConfigError("bits_per_slot must be 1, 2 or 3, got " + std::to_string(k));
}

inline std::uint64_t capacity_bits(const RgbImage& image, int k) {
    validate_bits_per_slot(k);
    return image.byte_count() * static_cast<std::uint64_t>(k);
}

// Streaming bit reader over a stego image. Lets the decoder pull the
// 9-byte prefix, then the header, then the chunk section without
// re-aligning to slot boundaries in between (at k=3 those sections do not
// fall on whole slots).
class BitCursor {
public:
    BitCursor(const RgbImage& image, int k, std::uint64_t start_slot = 0)
        : image_(&image), k_(k), bit_pos_(start_slot * k) {
        validate_bits_per_slot(k);
        if (start_slot > image.byte_count())
            throw RangeError("start slot " + std::to_string(start_slot) +
                             " past the end of the slot space");
    }

    std::uint64_t slot_index() const { return bit_pos_ / k_; }
    int bits_per_slot() const { return k_; }
    std::uint64_t remaining_bits() const {
        const std::uint64_t cap = image_->byte_count() * k_;
        return cap > bit_pos_ ? cap - bit_pos_ : 0;
    }

    void read(std::span<std::uint8_t> out) {
        if (out.size() * 8ull > remaining_bits())
            throw RangeError("read of " + std::to_string(out.size()) +
                             " bytes at slot " + std::to_string(slot_index()) +
                             " exceeds the remaining capacity of " +
                             std::to_string(remaining_bits()) + " bits");
        for (std::uint8_t& byte : out) {
            std::uint8_t v = 0;
            for (int i = 0; i < 8; ++i) {
                const std::uint64_t slot = bit_pos_ / k_;
                const int offset = static_cast<int>(bit_pos_ % k_);
                const int src_bit = k_ - 1 - offset;
                v = static_cast<std::uint8_t>(
                    (v << 1) | ((image_->data[slot] >> src_bit) & 1));
                ++bit_pos_;
            }
            byte = v;
        }
    }

    std::vector<std::uint8_t> read_bytes(std::uint64_t count) {
        std::vector<std::uint8_t> out(count);
        read(out);
        return out;
    }

private:
    const RgbImage* image_;
    int k_;
    std::uint64_t bit_pos_;
};

inline RgbImage embed(const RgbImage& cover, std::span<const std::uint8_t> payload,
                      int k) {
    const std::uint64_t available = capacity_bits(cover, k);
    const std::uint64_t required = payload.size() * 8ull;
    if (required > available)
        throw CapacityError("payload needs " + std::to_string(required) +
                                " bits but the cover offers " +
                                std::to_string(available),
                            required, available);

    RgbImage stego = cover;
    std::uint64_t bit_pos = 0;
    for (std::uint8_t byte : payload) {
        for (int i = 7; i >= 0; --i) {
            const std::uint64_t slot = bit_pos / k;
            const int offset = static_cast<int>(bit_pos % k);
            const int dst_bit = k - 1 - offset;
            const std::uint8_t mask = static_cast<std::uint8_t>(1u << dst_bit);
            if ((byte >> i) & 1)
                stego.data[slot] |= mask;
            else
                stego.data[slot] &= static_cast<std::uint8_t>(~mask);
            ++bit_pos;
        }
    }
    // A trailing partial slot keeps its untouched low bits; slots past the
    // payload are never written at all.
    return stego;
}

inline std::vector<std::uint8_t> extract(const RgbImage& stego,
                                         std::uint64_t byte_count,
                                         std::uint64_t start_slot, int k) {
    BitCursor cursor(stego, k, start_slot);
    return cursor.read_bytes(byte_count);
}

} // namespace stegograph
