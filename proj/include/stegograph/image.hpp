#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stegograph/errors.hpp"

namespace stegograph {

// Lossless 8-bit, 3-channel raster. `data` is row-major with interleaved
// R,G,B per pixel, so data.size() == width * height * 3.
struct RgbImage {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint8_t> data;

    std::uint64_t pixel_count() const {
        return std::uint64_t(width) * height;
    }
    std::uint64_t byte_count() const { return pixel_count() * 3; }

    std::uint8_t at(std::uint32_t x, std::uint32_t y, int channel) const {
        return data[(std::uint64_t(y) * width + x) * 3 + channel];
    }

    bool operator==(const RgbImage&) const = default;
};

inline RgbImage make_image(std::uint32_t width, std::uint32_t height,
                           std::vector<std::uint8_t> data) {
    if (width < 1 || height < 1)
        throw ValidationError("image dimensions must be at least 1x1, got " +
                              std::to_string(width) + "x" + std::to_string(height));
    const std::uint64_t expected = std::uint64_t(width) * height * 3;
    if (data.size() != expected)
        throw ShapeError("image data length " + std::to_string(data.size()) +
                         " does not match " + std::to_string(width) + "x" +
                         std::to_string(height) + "x3 = " + std::to_string(expected));
    return RgbImage{width, height, std::move(data)};
}

// 1-D byte view of an image in channel-planar order: every R byte in
// row-major order, then every G byte, then every B byte.
struct FlatChannels {
    std::vector<std::uint8_t> bytes;
    std::uint32_t source_width = 0;
    std::uint32_t source_height = 0;
};

// Pixel (x,y) lands at y*w + x in the R plane, w*h + y*w + x in the G
// plane and 2*w*h + y*w + x in the B plane.
inline FlatChannels flatten(const RgbImage& image) {
    const std::uint64_t plane = image.pixel_count();
    FlatChannels flat;
    flat.source_width = image.width;
    flat.source_height = image.height;
    flat.bytes.resize(plane * 3);
    for (std::uint64_t p = 0; p < plane; ++p) {
        flat.bytes[p] = image.data[p * 3];
        flat.bytes[plane + p] = image.data[p * 3 + 1];
        flat.bytes[2 * plane + p] = image.data[p * 3 + 2];
    }
    return flat;
}

inline RgbImage reshape(const FlatChannels& flat, std::uint32_t width,
                        std::uint32_t height) {
    const std::uint64_t expected = std::uint64_t(width) * height * 3;
    if (flat.bytes.size() != expected)
        throw ShapeError("flat byte length " + std::to_string(flat.bytes.size()) +
                         " cannot reshape to " + std::to_string(width) + "x" +
                         std::to_string(height) + " (expected " +
                         std::to_string(expected) + ")");
    const std::uint64_t plane = std::uint64_t(width) * height;
    std::vector<std::uint8_t> data(expected);
    for (std::uint64_t p = 0; p < plane; ++p) {
        data[p * 3] = flat.bytes[p];
        data[p * 3 + 1] = flat.bytes[plane + p];
        data[p * 3 + 2] = flat.bytes[2 * plane + p];
    }
    return make_image(width, height, std::move(data));
}

} // namespace stegograph
