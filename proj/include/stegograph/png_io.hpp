#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <png.h>

#include "stegograph/errors.hpp"
#include "stegograph/image.hpp"

namespace stegograph {

// File I/O for the CLI. PNG is the only output container: the codec needs
// lossless storage, and a lossy format would silently destroy the payload.
// 24-bit uncompressed BMP is accepted on the read side as a convenience.
// Anything that is not 8-bit 3-channel RGB is rejected rather than
// converted, so the byte-exact contract of the codec is never blurred.

namespace detail {

struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};

inline std::uint32_t le32(const std::uint8_t* p) {
    return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
           (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}
inline std::int32_t le32s(const std::uint8_t* p) {
    return static_cast<std::int32_t>(le32(p));
}
inline std::uint16_t le16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(std::uint16_t(p[0]) | (std::uint16_t(p[1]) << 8));
}

inline RgbImage load_png(const std::string& path) {
    std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "rb"));
    if (!file) throw IoError("cannot open " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                             nullptr, nullptr);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("libpng info init failed");
    }
    std::vector<std::uint8_t> data;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("failed to decode PNG " + path);
    }
    png_init_io(png, file.get());
    png_read_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);
    if (bit_depth != 8 || color_type != PNG_COLOR_TYPE_RGB) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::string kind = color_type == PNG_COLOR_TYPE_GRAY ? "grayscale"
                         : color_type == PNG_COLOR_TYPE_PALETTE ? "palette"
                         : color_type == PNG_COLOR_TYPE_RGB_ALPHA ? "RGBA"
                         : color_type == PNG_COLOR_TYPE_GRAY_ALPHA ? "gray+alpha"
                         : "unknown";
        throw ValidationError(path + " is " + std::to_string(bit_depth) + "-bit " +
                              kind + "; only 8-bit RGB PNG is supported (no "
                              "silent conversion)");
    }

    data.resize(std::uint64_t(width) * height * 3);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y)
        rows[y] = data.data() + std::uint64_t(y) * width * 3;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return make_image(width, height, std::move(data));
}

inline RgbImage load_bmp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::uint8_t> raw((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
    if (raw.size() < 54 || raw[0] != 'B' || raw[1] != 'M')
        throw ValidationError(path + " is not a BMP file");
    const std::uint32_t pixel_offset = le32(&raw[10]);
    const std::uint32_t header_size = le32(&raw[14]);
    if (header_size < 40)
        throw ValidationError(path + ": unsupported BMP header");
    const std::int32_t w = le32s(&raw[18]);
    const std::int32_t h = le32s(&raw[22]);
    const std::uint16_t bpp = le16(&raw[28]);
    const std::uint32_t compression = le32(&raw[30]);
    if (bpp != 24 || compression != 0)
        throw ValidationError(path + ": only uncompressed 24-bit BMP is supported");
    if (w < 1 || h == 0)
        throw ValidationError(path + ": degenerate BMP dimensions");
    const bool top_down = h < 0;
    const std::uint32_t width = static_cast<std::uint32_t>(w);
    const std::uint32_t height = static_cast<std::uint32_t>(top_down ? -h : h);
    const std::uint64_t stride = (std::uint64_t(width) * 3 + 3) & ~3ull;
    if (raw.size() < pixel_offset + stride * height)
        throw ValidationError(path + ": BMP pixel data truncated");

    std::vector<std::uint8_t> data(std::uint64_t(width) * height * 3);
    for (std::uint32_t y = 0; y < height; ++y) {
        const std::uint32_t src_row = top_down ? y : height - 1 - y;
        const std::uint8_t* src = raw.data() + pixel_offset + stride * src_row;
        std::uint8_t* dst = data.data() + std::uint64_t(y) * width * 3;
        for (std::uint32_t x = 0; x < width; ++x) {
            dst[x * 3] = src[x * 3 + 2];     // BMP stores BGR
            dst[x * 3 + 1] = src[x * 3 + 1];
            dst[x * 3 + 2] = src[x * 3];
        }
    }
    return make_image(width, height, std::move(data));
}

} // namespace detail

inline RgbImage load_image(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw IoError("cannot open " + path);
    char magic[2] = {};
    probe.read(magic, 2);
    probe.close();
    if (magic[0] == 'B' && magic[1] == 'M') return detail::load_bmp(path);
    return detail::load_png(path);
}

inline void save_png(const std::string& path, const RgbImage& image) {
    std::unique_ptr<std::FILE, detail::FileCloser> file(
        std::fopen(path.c_str(), "wb"));
    if (!file) throw IoError("cannot create " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                              nullptr, nullptr);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng info init failed");
    }
    std::vector<png_bytep> rows(image.height);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("failed to encode PNG " + path);
    }
    png_init_io(png, file.get());
    // Fixed settings keep outputs byte-for-byte reproducible across runs.
    png_set_compression_level(png, 6);
    png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (std::uint32_t y = 0; y < image.height; ++y)
        rows[y] = const_cast<png_bytep>(image.data.data() +
                                        std::uint64_t(y) * image.width * 3);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

} // namespace stegograph
