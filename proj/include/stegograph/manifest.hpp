#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stegograph/chunking.hpp"
#include "stegograph/errors.hpp"

namespace stegograph {

// ---------------------------------------------------------------------------
// Stego segment wire format (normative, versioned by the magic string):
//
//   offset 0   5 bytes   magic "JKVG1"
//   offset 5   4 bytes   header_length, 32-bit unsigned big-endian
//   offset 9   header_length bytes   canonical JSON header (the manifest)
//   then       raw chunk bytes, laid out per the manifest's directory
//
// The JSON header is canonical: fixed key order, no whitespace, integers
// only. Top-level keys: num_payload_images, num_cover_images, cover_index,
// payloads, directory. Each payloads element carries payload_id, height,
// width, channels, chunk_count, chunk_size, total_bytes. Each directory
// element is the 5-tuple [payload_id, graph_position, offset, length,
// crc16] where crc16 is CRC-16/CCITT-FALSE over the chunk bytes, letting
// the decoder verify chunk integrity after LSB extraction.
// ---------------------------------------------------------------------------

inline constexpr std::array<std::uint8_t, 5> kSegmentMagic = {'J', 'K', 'V', 'G', '1'};
inline constexpr std::size_t kSegmentPrefixBytes = 9; // magic + header_length

inline std::uint16_t crc16_ccitt(std::span<const std::uint8_t> data) {
    std::uint16_t crc = 0xFFFF;
    for (std::uint8_t b : data) {
        crc ^= static_cast<std::uint16_t>(b) << 8;
        for (int i = 0; i < 8; ++i)
            crc = (crc & 0x8000) ? static_cast<std::uint16_t>((crc << 1) ^ 0x1021)
                                 : static_cast<std::uint16_t>(crc << 1);
    }
    return crc;
}

struct PayloadMetadata {
    std::uint32_t payload_id = 0;
    std::uint32_t height = 0;
    std::uint32_t width = 0;
    std::uint32_t channels = 3;
    std::uint64_t chunk_count = 0;
    std::uint64_t chunk_size = 0;
    std::uint64_t total_bytes = 0;

    bool operator==(const PayloadMetadata&) const = default;
};

struct ChunkDirectoryEntry {
    std::uint32_t payload_id = 0;
    std::uint32_t graph_position = 0;
    std::uint64_t offset = 0; // into this segment's chunk section
    std::uint64_t length = 0;
    std::uint16_t crc16 = 0;

    bool operator==(const ChunkDirectoryEntry&) const = default;
};

struct CoverManifest {
    std::uint32_t num_payload_images = 0;
    std::uint32_t num_cover_images = 0;
    std::uint32_t cover_index = 0;
    std::vector<PayloadMetadata> payloads;      // every payload, in every cover
    std::vector<ChunkDirectoryEntry> directory; // chunks carried by this cover

    std::uint64_t chunk_section_bytes() const {
        std::uint64_t n = 0;
        for (const auto& e : directory) n += e.length;
        return n;
    }

    bool operator==(const CoverManifest&) const = default;
};

namespace detail {

inline std::uint32_t decimal_digits(std::uint64_t v) {
    std::uint32_t d = 1;
    while (v >= 10) { v /= 10; ++d; }
    return d;
}

} // namespace detail

inline PayloadMetadata metadata_for(std::uint32_t payload_id, std::uint32_t height,
                                    std::uint32_t width, std::uint64_t chunk_size) {
    PayloadMetadata pm;
    pm.payload_id = payload_id;
    pm.height = height;
    pm.width = width;
    pm.channels = 3;
    pm.total_bytes = std::uint64_t(height) * width * 3;
    pm.chunk_size = chunk_size;
    pm.chunk_count = chunk_count_for(pm.total_bytes, chunk_size);
    return pm;
}

// Exact serialized size of one payloads[] element.
inline std::uint64_t metadata_json_size(const PayloadMetadata& pm) {
    using detail::decimal_digits;
    return 14 + decimal_digits(pm.payload_id)    // {"payload_id":
         + 10 + decimal_digits(pm.height)        // ,"height":
         + 9 + decimal_digits(pm.width)          // ,"width":
         + 13                                    // ,"channels":3
         + 15 + decimal_digits(pm.chunk_count)   // ,"chunk_count":
         + 14 + decimal_digits(pm.chunk_size)    // ,"chunk_size":
         + 15 + decimal_digits(pm.total_bytes)   // ,"total_bytes":
         + 1;                                    // }
}

// Exact serialized size of one directory tuple, excluding the separating
// comma. The crc16 value is unknown at planning time, so callers that have
// no chunk bytes pass crc_digits = 5 (the worst case) and get a safe upper
// bound that is still a pure function of the chunk geometry.
inline std::uint64_t directory_entry_json_size(std::uint32_t payload_id,
                                               std::uint32_t graph_position,
                                               std::uint64_t offset,
                                               std::uint64_t length,
                                               std::uint32_t crc_digits) {
    using detail::decimal_digits;
    return 6 // [ ] and four commas
         + decimal_digits(payload_id) + decimal_digits(graph_position)
         + decimal_digits(offset) + decimal_digits(length) + crc_digits;
}

inline std::uint64_t directory_entry_json_size(const ChunkDirectoryEntry& e) {
    return directory_entry_json_size(e.payload_id, e.graph_position, e.offset,
                                     e.length, detail::decimal_digits(e.crc16));
}

// Exact serialized size of the JSON header with an empty directory.
inline std::uint64_t header_base_json_size(std::uint32_t num_payloads,
                                           std::uint32_t num_covers,
                                           std::uint32_t cover_index,
                                           const std::vector<PayloadMetadata>& payloads) {
    using detail::decimal_digits;
    std::uint64_t n = 22 + decimal_digits(num_payloads)  // {"num_payload_images":
                    + 20 + decimal_digits(num_covers)    // ,"num_cover_images":
                    + 15 + decimal_digits(cover_index)   // ,"cover_index":
                    + 13;                                // ,"payloads":[
    for (std::size_t i = 0; i < payloads.size(); ++i)
        n += metadata_json_size(payloads[i]) + (i ? 1 : 0);
    n += 15 + 2; // ],"directory":[  and  ]}
    return n;
}

inline std::uint64_t header_json_size(const CoverManifest& m) {
    std::uint64_t n = header_base_json_size(m.num_payload_images, m.num_cover_images,
                                            m.cover_index, m.payloads);
    for (std::size_t i = 0; i < m.directory.size(); ++i)
        n += directory_entry_json_size(m.directory[i]) + (i ? 1 : 0);
    return n;
}

namespace detail {

inline void validate_manifest(const CoverManifest& m) {
    if (m.num_payload_images != m.payloads.size())
        throw CorruptionError("manifest lists " + std::to_string(m.payloads.size()) +
                              " payload records but declares " +
                              std::to_string(m.num_payload_images));
    if (m.num_cover_images < 1)
        throw CorruptionError("manifest declares zero cover images");
    if (m.cover_index >= m.num_cover_images)
        throw CorruptionError("cover_index " + std::to_string(m.cover_index) +
                              " out of range for " + std::to_string(m.num_cover_images) +
                              " covers");
    for (std::size_t i = 0; i < m.payloads.size(); ++i) {
        const PayloadMetadata& pm = m.payloads[i];
        if (pm.payload_id != i)
            throw CorruptionError("payload metadata out of order: entry " +
                                  std::to_string(i) + " has payload_id " +
                                  std::to_string(pm.payload_id));
        if (pm.channels != 3)
            throw CorruptionError("payload " + std::to_string(pm.payload_id) +
                                  " declares " + std::to_string(pm.channels) +
                                  " channels; only 3 is supported");
        if (pm.height < 1 || pm.width < 1 || pm.chunk_size < 1)
            throw CorruptionError("payload " + std::to_string(pm.payload_id) +
                                  " has degenerate shape or chunk size");
        if (pm.total_bytes != std::uint64_t(pm.height) * pm.width * pm.channels)
            throw CorruptionError("payload " + std::to_string(pm.payload_id) +
                                  " total_bytes does not match its shape");
        if (pm.chunk_count != chunk_count_for(pm.total_bytes, pm.chunk_size))
            throw CorruptionError("payload " + std::to_string(pm.payload_id) +
                                  " chunk_count does not match total_bytes/chunk_size");
    }
    std::uint64_t expected_offset = 0;
    for (const ChunkDirectoryEntry& e : m.directory) {
        if (e.payload_id >= m.payloads.size())
            throw CorruptionError("directory references unknown payload " +
                                  std::to_string(e.payload_id));
        const PayloadMetadata& pm = m.payloads[e.payload_id];
        if (e.graph_position >= pm.chunk_count)
            throw CorruptionError("directory graph position " +
                                  std::to_string(e.graph_position) +
                                  " out of range for payload " +
                                  std::to_string(e.payload_id));
        const bool last = e.graph_position + 1 == pm.chunk_count;
        const std::uint64_t expected_len =
            last ? pm.total_bytes - (pm.chunk_count - 1) * pm.chunk_size
                 : pm.chunk_size;
        if (e.length != expected_len)
            throw CorruptionError("directory length " + std::to_string(e.length) +
                                  " for payload " + std::to_string(e.payload_id) +
                                  " position " + std::to_string(e.graph_position) +
                                  " should be " + std::to_string(expected_len));
        if (e.offset != expected_offset)
            throw CorruptionError("directory offsets are not the running sum of "
                                  "lengths (expected " +
                                  std::to_string(expected_offset) + ", got " +
                                  std::to_string(e.offset) + ")");
        expected_offset += e.length;
    }
}

} // namespace detail

inline std::string manifest_to_json(const CoverManifest& m) {
    nlohmann::ordered_json j;
    j["num_payload_images"] = m.num_payload_images;
    j["num_cover_images"] = m.num_cover_images;
    j["cover_index"] = m.cover_index;
    auto payloads = nlohmann::ordered_json::array();
    for (const PayloadMetadata& pm : m.payloads) {
        nlohmann::ordered_json p;
        p["payload_id"] = pm.payload_id;
        p["height"] = pm.height;
        p["width"] = pm.width;
        p["channels"] = pm.channels;
        p["chunk_count"] = pm.chunk_count;
        p["chunk_size"] = pm.chunk_size;
        p["total_bytes"] = pm.total_bytes;
        payloads.push_back(std::move(p));
    }
    j["payloads"] = std::move(payloads);
    auto directory = nlohmann::ordered_json::array();
    for (const ChunkDirectoryEntry& e : m.directory)
        directory.push_back({e.payload_id, e.graph_position, e.offset, e.length,
                             e.crc16});
    j["directory"] = std::move(directory);
    return j.dump();
}

namespace detail {

inline std::uint64_t require_uint(const nlohmann::ordered_json& j,
                                  const char* what) {
    if (!j.is_number_unsigned())
        throw CorruptionError(std::string("manifest field ") + what +
                              " is not an unsigned integer");
    return j.get<std::uint64_t>();
}

} // namespace detail

inline CoverManifest manifest_from_json(std::string_view text) {
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw CorruptionError("segment header is not valid JSON");

    static constexpr const char* kKeys[] = {"num_payload_images", "num_cover_images",
                                            "cover_index", "payloads", "directory"};
    std::size_t ki = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++ki) {
        if (ki >= 5 || it.key() != kKeys[ki])
            throw CorruptionError("manifest keys are not in canonical order "
                                  "(unexpected key '" + it.key() + "')");
    }
    if (ki != 5)
        throw CorruptionError("manifest is missing required keys");

    CoverManifest m;
    m.num_payload_images = static_cast<std::uint32_t>(
        detail::require_uint(j["num_payload_images"], "num_payload_images"));
    m.num_cover_images = static_cast<std::uint32_t>(
        detail::require_uint(j["num_cover_images"], "num_cover_images"));
    m.cover_index = static_cast<std::uint32_t>(
        detail::require_uint(j["cover_index"], "cover_index"));

    if (!j["payloads"].is_array() || !j["directory"].is_array())
        throw CorruptionError("manifest payloads/directory must be arrays");

    for (const auto& p : j["payloads"]) {
        if (!p.is_object())
            throw CorruptionError("payload metadata must be an object");
        PayloadMetadata pm;
        pm.payload_id = static_cast<std::uint32_t>(detail::require_uint(p.at("payload_id"), "payload_id"));
        pm.height = static_cast<std::uint32_t>(detail::require_uint(p.at("height"), "height"));
        pm.width = static_cast<std::uint32_t>(detail::require_uint(p.at("width"), "width"));
        pm.channels = static_cast<std::uint32_t>(detail::require_uint(p.at("channels"), "channels"));
        pm.chunk_count = detail::require_uint(p.at("chunk_count"), "chunk_count");
        pm.chunk_size = detail::require_uint(p.at("chunk_size"), "chunk_size");
        pm.total_bytes = detail::require_uint(p.at("total_bytes"), "total_bytes");
        m.payloads.push_back(pm);
    }
    for (const auto& d : j["directory"]) {
        if (!d.is_array() || d.size() != 5)
            throw CorruptionError("directory entries must be 5-element tuples");
        ChunkDirectoryEntry e;
        e.payload_id = static_cast<std::uint32_t>(detail::require_uint(d[0], "directory payload_id"));
        e.graph_position = static_cast<std::uint32_t>(detail::require_uint(d[1], "directory graph_position"));
        e.offset = detail::require_uint(d[2], "directory offset");
        e.length = detail::require_uint(d[3], "directory length");
        const std::uint64_t crc = detail::require_uint(d[4], "directory crc16");
        if (crc > 0xFFFF)
            throw CorruptionError("directory crc16 exceeds 16 bits");
        e.crc16 = static_cast<std::uint16_t>(crc);
        m.directory.push_back(e);
    }
    detail::validate_manifest(m);
    return m;
}

// All non-payload bytes in the segment: prefix plus JSON header.
inline std::uint64_t segment_overhead(const CoverManifest& m) {
    return kSegmentPrefixBytes + header_json_size(m);
}

inline std::uint64_t segment_size(const CoverManifest& m) {
    return segment_overhead(m) + m.chunk_section_bytes();
}

// Emits magic || header_length || JSON header || raw chunk bytes. The
// chunks must match the directory one-to-one, in order.
inline std::vector<std::uint8_t> serialize_segment(const CoverManifest& manifest,
                                                   const std::vector<Chunk>& chunks) {
    detail::validate_manifest(manifest);
    if (chunks.size() != manifest.directory.size())
        throw ValidationError("segment has " + std::to_string(chunks.size()) +
                              " chunks but the directory lists " +
                              std::to_string(manifest.directory.size()));
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        const Chunk& c = chunks[i];
        const ChunkDirectoryEntry& e = manifest.directory[i];
        if (c.payload_id != e.payload_id || c.graph_position != e.graph_position ||
            c.data.size() != e.length)
            throw ValidationError("chunk " + std::to_string(i) +
                                  " does not match its directory entry");
        if (crc16_ccitt(c.data) != e.crc16)
            throw ValidationError("chunk " + std::to_string(i) +
                                  " bytes do not match the directory crc16");
    }

    const std::string header = manifest_to_json(manifest);
    if (header.size() != header_json_size(manifest))
        throw CorruptionError("internal error: header size accounting drifted from "
                              "the serializer");
    if (header.size() > 0xFFFFFFFFull)
        throw ValidationError("segment header exceeds the 32-bit length field");

    std::vector<std::uint8_t> out;
    out.reserve(kSegmentPrefixBytes + header.size() + manifest.chunk_section_bytes());
    out.insert(out.end(), kSegmentMagic.begin(), kSegmentMagic.end());
    const std::uint32_t hlen = static_cast<std::uint32_t>(header.size());
    out.push_back(static_cast<std::uint8_t>(hlen >> 24));
    out.push_back(static_cast<std::uint8_t>(hlen >> 16));
    out.push_back(static_cast<std::uint8_t>(hlen >> 8));
    out.push_back(static_cast<std::uint8_t>(hlen));
    out.insert(out.end(), header.begin(), header.end());
    for (const Chunk& c : chunks)
        out.insert(out.end(), c.data.begin(), c.data.end());
    return out;
}

struct ParsedSegment {
    CoverManifest manifest;
    std::vector<Chunk> chunks;
    std::uint64_t segment_bytes = 0; // total frame length within the input
};

// Parses a segment starting at bytes[0]. Trailing bytes beyond the frame
// are ignored (LSB extraction usually over-reads).
inline ParsedSegment parse_segment(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kSegmentMagic.size() ||
        !std::equal(kSegmentMagic.begin(), kSegmentMagic.end(), bytes.begin()))
        throw NotAStegoSegmentError("input does not start with the JKVG1 magic");
    if (bytes.size() < kSegmentPrefixBytes)
        throw TruncationError("segment truncated before the header length field",
                              kSegmentPrefixBytes, bytes.size());

    const std::uint32_t hlen = (std::uint32_t(bytes[5]) << 24) |
                               (std::uint32_t(bytes[6]) << 16) |
                               (std::uint32_t(bytes[7]) << 8) |
                               std::uint32_t(bytes[8]);
    if (bytes.size() < kSegmentPrefixBytes + hlen)
        throw TruncationError("segment truncated inside the JSON header; need " +
                                  std::to_string(kSegmentPrefixBytes + hlen) +
                                  " bytes, have " + std::to_string(bytes.size()),
                              kSegmentPrefixBytes + hlen, bytes.size());

    const std::string_view header(
        reinterpret_cast<const char*>(bytes.data()) + kSegmentPrefixBytes, hlen);
    CoverManifest manifest = manifest_from_json(header);

    const std::uint64_t section = manifest.chunk_section_bytes();
    const std::uint64_t total = kSegmentPrefixBytes + hlen + section;
    if (bytes.size() < total)
        throw TruncationError("segment truncated inside the chunk section; need " +
                                  std::to_string(total) + " bytes, have " +
                                  std::to_string(bytes.size()),
                              total, bytes.size());

    const std::uint8_t* sec = bytes.data() + kSegmentPrefixBytes + hlen;
    ParsedSegment out;
    out.chunks.reserve(manifest.directory.size());
    for (const ChunkDirectoryEntry& e : manifest.directory) {
        std::vector<std::uint8_t> data(sec + e.offset, sec + e.offset + e.length);
        if (crc16_ccitt(data) != e.crc16)
            throw CorruptionError("chunk for payload " + std::to_string(e.payload_id) +
                                  " position " + std::to_string(e.graph_position) +
                                  " fails its crc16 check");
        out.chunks.push_back(Chunk{e.payload_id, e.graph_position, std::move(data)});
    }
    out.manifest = std::move(manifest);
    out.segment_bytes = total;
    return out;
}

} // namespace stegograph
