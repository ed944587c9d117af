#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stegograph/chunking.hpp"
#include "stegograph/errors.hpp"
#include "stegograph/image.hpp"
#include "stegograph/lsb.hpp"
#include "stegograph/manifest.hpp"
#include "stegograph/transform.hpp"

namespace stegograph {

struct ChunkRef {
    std::uint32_t payload_id = 0;
    std::uint32_t graph_position = 0;
    std::uint64_t length = 0;
};

struct CoverPlan {
    std::uint64_t capacity_bits = 0;
    std::uint64_t planned_segment_bytes = 0; // upper bound, see plan()
    std::vector<ChunkRef> chunks;
};

struct CapacityPlan {
    std::vector<CoverPlan> covers;
    std::uint64_t total_payload_bytes = 0;
    std::uint64_t total_segment_bytes = 0;
    std::uint64_t total_overhead_bytes = 0;
    double utilization = 0.0; // segment bits / capacity bits
    std::uint64_t chunk_size = 0;
    int bits_per_slot = 0;
};

namespace detail {

// Worst-case serialized size of a payloads[] record when the image
// dimensions are not known yet (plan() only sees byte counts).
inline std::uint64_t metadata_json_size_upper(std::uint32_t payload_id,
                                              std::uint64_t total_bytes,
                                              std::uint64_t chunk_size) {
    PayloadMetadata pm;
    pm.payload_id = payload_id;
    pm.height = 0xFFFFFFFFu; // 10 digits
    pm.width = 0xFFFFFFFFu;
    pm.channels = 3;
    pm.total_bytes = total_bytes;
    pm.chunk_size = chunk_size;
    pm.chunk_count = chunk_count_for(total_bytes, chunk_size);
    return metadata_json_size(pm);
}

} // namespace detail

// Greedy serial fill: covers are consumed in the given order and each one
// takes chunks (payload order, then graph position order) for as long as
// the segment still fits its capacity. Segment sizes are tracked with the
// exact arithmetic of the canonical JSON form, except that the per-chunk
// crc16 and the payload dimensions are not known from byte counts alone;
// those fields are charged at their maximum width, so the planned size is
// a tight upper bound and a pure function of the job geometry.
inline CapacityPlan plan(const std::vector<RgbImage>& covers,
                         const std::vector<std::uint64_t>& payload_sizes,
                         std::uint64_t chunk_size, int k) {
    validate_bits_per_slot(k);
    if (chunk_size < 1) throw ConfigError("chunk_size must be at least 1");
    if (covers.empty()) throw ValidationError("at least one cover image is required");
    if (payload_sizes.empty())
        throw ValidationError("at least one payload image is required");

    const std::uint32_t ncov = static_cast<std::uint32_t>(covers.size());
    const std::uint32_t npay = static_cast<std::uint32_t>(payload_sizes.size());

    std::uint64_t metadata_ink = 0;
    std::vector<ChunkRef> queue;
    std::uint64_t total_payload = 0;
    for (std::uint32_t pid = 0; pid < npay; ++pid) {
        const std::uint64_t size = payload_sizes[pid];
        if (size == 0)
            throw ValidationError("payload " + std::to_string(pid) + " is empty");
        total_payload += size;
        metadata_ink += detail::metadata_json_size_upper(pid, size, chunk_size) +
                        (pid ? 1 : 0);
        const std::uint64_t count = chunk_count_for(size, chunk_size);
        for (std::uint64_t g = 0; g < count; ++g) {
            const std::uint64_t len =
                (g + 1 == count) ? size - (count - 1) * chunk_size : chunk_size;
            queue.push_back(ChunkRef{pid, static_cast<std::uint32_t>(g), len});
        }
    }

    std::uint64_t total_capacity_bits = 0;
    for (const RgbImage& c : covers) total_capacity_bits += capacity_bits(c, k);

    CapacityPlan out;
    out.chunk_size = chunk_size;
    out.bits_per_slot = k;
    out.total_payload_bytes = total_payload;

    // 22+d ,20+d ,15+d ,13 ,15 ,2 mirror header_base_json_size(); the
    // payloads array ink is precomputed above.
    std::size_t qi = 0;
    for (std::uint32_t ci = 0; ci < ncov; ++ci) {
        CoverPlan cp;
        cp.capacity_bits = capacity_bits(covers[ci], k);
        std::uint64_t seg = kSegmentPrefixBytes + 22 +
                            detail::decimal_digits(npay) + 20 +
                            detail::decimal_digits(ncov) + 15 +
                            detail::decimal_digits(ci) + 13 + metadata_ink + 15 + 2;
        if (seg * 8 > cp.capacity_bits)
            throw CapacityError("cover " + std::to_string(ci) +
                                    " cannot hold even an empty segment (" +
                                    std::to_string(seg * 8) + " bits needed, " +
                                    std::to_string(cp.capacity_bits) + " available)",
                                seg * 8, cp.capacity_bits);
        std::uint64_t offset = 0;
        while (qi < queue.size()) {
            const ChunkRef& ref = queue[qi];
            const std::uint64_t entry =
                directory_entry_json_size(ref.payload_id, ref.graph_position,
                                          offset, ref.length, /*crc_digits=*/5) +
                (cp.chunks.empty() ? 0 : 1);
            if ((seg + entry + ref.length) * 8 > cp.capacity_bits) break;
            seg += entry + ref.length;
            offset += ref.length;
            cp.chunks.push_back(ref);
            ++qi;
        }
        cp.planned_segment_bytes = seg;
        out.total_segment_bytes += seg;
        out.covers.push_back(std::move(cp));
    }

    if (qi < queue.size()) {
        std::uint64_t remaining = 0;
        for (std::size_t i = qi; i < queue.size(); ++i)
            remaining += queue[i].length +
                         directory_entry_json_size(queue[i].payload_id,
                                                   queue[i].graph_position,
                                                   total_payload, queue[i].length, 5) +
                         1;
        throw CapacityError(
            "insufficient capacity: " + std::to_string(queue.size() - qi) +
                " chunks left after the last cover; roughly " +
                std::to_string((out.total_segment_bytes + remaining) * 8) +
                " bits required vs " + std::to_string(total_capacity_bits) +
                " available",
            (out.total_segment_bytes + remaining) * 8, total_capacity_bits);
    }

    out.total_overhead_bytes = out.total_segment_bytes - out.total_payload_bytes;
    out.utilization = total_capacity_bits
                          ? double(out.total_segment_bytes) * 8.0 / double(total_capacity_bits)
                          : 0.0;
    return out;
}

inline std::vector<RgbImage> encode(const std::vector<RgbImage>& payloads,
                                    const std::vector<RgbImage>& covers,
                                    std::uint64_t chunk_size, int k,
                                    const TransformSpec& transform) {
    if (payloads.empty())
        throw ValidationError("encode requires at least one payload image");
    if (covers.empty())
        throw ValidationError("encode requires at least one cover image");

    std::vector<std::uint64_t> sizes;
    std::vector<PayloadMetadata> metadata;
    std::vector<std::vector<Chunk>> payload_chunks;
    for (std::uint32_t pid = 0; pid < payloads.size(); ++pid) {
        const RgbImage& p = payloads[pid];
        sizes.push_back(p.byte_count());
        metadata.push_back(metadata_for(pid, p.height, p.width, chunk_size));
        const std::vector<std::uint8_t> bytes =
            apply_transform(flatten(p).bytes, transform);
        payload_chunks.push_back(split_chunks(bytes, chunk_size, pid));
    }

    const CapacityPlan the_plan = plan(covers, sizes, chunk_size, k);

    std::vector<RgbImage> stegos;
    stegos.reserve(covers.size());
    for (std::uint32_t ci = 0; ci < covers.size(); ++ci) {
        const CoverPlan& cp = the_plan.covers[ci];
        CoverManifest m;
        m.num_payload_images = static_cast<std::uint32_t>(payloads.size());
        m.num_cover_images = static_cast<std::uint32_t>(covers.size());
        m.cover_index = ci;
        m.payloads = metadata;
        std::vector<Chunk> chunks;
        std::uint64_t offset = 0;
        for (const ChunkRef& ref : cp.chunks) {
            const Chunk& c = payload_chunks[ref.payload_id][ref.graph_position];
            m.directory.push_back(ChunkDirectoryEntry{
                ref.payload_id, ref.graph_position, offset,
                c.data.size(), crc16_ccitt(c.data)});
            offset += c.data.size();
            chunks.push_back(c);
        }
        const std::vector<std::uint8_t> segment = serialize_segment(m, chunks);
        if (segment.size() > cp.planned_segment_bytes)
            throw CorruptionError("internal error: serialized segment exceeds its "
                                  "planned upper bound");
        stegos.push_back(embed(covers[ci], segment, k));
    }
    return stegos;
}

struct DecodeResult {
    std::vector<RgbImage> payloads; // ordered by payload_id
    std::vector<std::string> warnings;
};

namespace detail {

// Progressive extraction: prefix, then header, then chunk section, through
// one BitCursor so nothing depends on section boundaries being slot-aligned.
inline std::optional<ParsedSegment> read_segment(const RgbImage& image, int k,
                                                 std::string* why_not) {
    BitCursor cursor(image, k);
    if (cursor.remaining_bits() < kSegmentPrefixBytes * 8) {
        if (why_not) *why_not = "image too small to hold a segment prefix";
        return std::nullopt;
    }
    const std::vector<std::uint8_t> prefix = cursor.read_bytes(kSegmentPrefixBytes);
    if (!std::equal(kSegmentMagic.begin(), kSegmentMagic.end(), prefix.begin())) {
        if (why_not) *why_not = "no JKVG1 magic in the low bits";
        return std::nullopt;
    }
    const std::uint32_t hlen = (std::uint32_t(prefix[5]) << 24) |
                               (std::uint32_t(prefix[6]) << 16) |
                               (std::uint32_t(prefix[7]) << 8) |
                               std::uint32_t(prefix[8]);
    if (cursor.remaining_bits() < std::uint64_t(hlen) * 8)
        throw CorruptionError("segment header length " + std::to_string(hlen) +
                              " exceeds the image capacity");
    const std::vector<std::uint8_t> header = cursor.read_bytes(hlen);
    CoverManifest manifest = manifest_from_json(
        std::string_view(reinterpret_cast<const char*>(header.data()), header.size()));

    const std::uint64_t section = manifest.chunk_section_bytes();
    if (cursor.remaining_bits() < section * 8)
        throw TruncationError("chunk section of " + std::to_string(section) +
                                  " bytes exceeds the image capacity",
                              kSegmentPrefixBytes + hlen + section,
                              kSegmentPrefixBytes + hlen + cursor.remaining_bits() / 8);
    const std::vector<std::uint8_t> section_bytes = cursor.read_bytes(section);

    ParsedSegment out;
    out.segment_bytes = kSegmentPrefixBytes + hlen + section;
    for (const ChunkDirectoryEntry& e : manifest.directory) {
        std::vector<std::uint8_t> data(section_bytes.begin() + e.offset,
                                       section_bytes.begin() + e.offset + e.length);
        if (crc16_ccitt(data) != e.crc16)
            throw CorruptionError("chunk for payload " + std::to_string(e.payload_id) +
                                  " position " + std::to_string(e.graph_position) +
                                  " fails its crc16 check");
        out.chunks.push_back(Chunk{e.payload_id, e.graph_position, std::move(data)});
    }
    out.manifest = std::move(manifest);
    return out;
}

} // namespace detail

// Decoding is a pure function of the SET of stego images: segments are
// parsed independently, chunks pooled by payload id, then merged, inverse
// transformed and reshaped per the replicated metadata.
inline DecodeResult decode(const std::vector<RgbImage>& stegos, int k,
                           const TransformSpec& transform) {
    if (stegos.empty())
        throw ValidationError("decode requires at least one input image");

    DecodeResult result;
    std::optional<CoverManifest> reference;
    std::vector<std::vector<Chunk>> pools;
    for (std::size_t i = 0; i < stegos.size(); ++i) {
        std::string why;
        std::optional<ParsedSegment> seg = detail::read_segment(stegos[i], k, &why);
        if (!seg) {
            result.warnings.push_back("input " + std::to_string(i) +
                                      " skipped: " + why);
            continue;
        }
        if (!reference) {
            reference = seg->manifest;
            pools.resize(reference->payloads.size());
        } else if (seg->manifest.num_payload_images != reference->num_payload_images ||
                   seg->manifest.num_cover_images != reference->num_cover_images ||
                   seg->manifest.payloads != reference->payloads) {
            throw CorruptionError("input " + std::to_string(i) +
                                  " carries metadata that conflicts with the other "
                                  "stego images");
        }
        for (Chunk& c : seg->chunks)
            pools[c.payload_id].push_back(std::move(c));
    }
    if (!reference)
        throw NoStegoFoundError("none of the " + std::to_string(stegos.size()) +
                                " inputs contains a stego segment");

    for (const PayloadMetadata& pm : reference->payloads) {
        if (pools[pm.payload_id].empty()) {
            std::vector<std::uint32_t> missing;
            for (std::uint64_t g = 0; g < pm.chunk_count; ++g)
                missing.push_back(static_cast<std::uint32_t>(g));
            throw IncompletePayloadError(
                "payload " + std::to_string(pm.payload_id) +
                    ": none of its " + std::to_string(pm.chunk_count) +
                    " chunks were found; the job used " +
                    std::to_string(reference->num_cover_images) + " cover images",
                pm.payload_id, std::move(missing), reference->num_cover_images);
        }
        std::vector<std::uint8_t> flat_bytes =
            merge_chunks(pools[pm.payload_id], pm.chunk_count,
                         reference->num_cover_images);
        flat_bytes = apply_transform(flat_bytes, transform);
        FlatChannels flat;
        flat.bytes = std::move(flat_bytes);
        flat.source_width = pm.width;
        flat.source_height = pm.height;
        result.payloads.push_back(reshape(flat, pm.width, pm.height));
    }
    return result;
}

} // namespace stegograph
