#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stegograph/errors.hpp"

namespace stegograph {

// One slice of a payload's flat byte stream. graph_position is the 0-based
// index of the slice within its own payload; every chunk except possibly
// the last has exactly chunk_size bytes.
struct Chunk {
    std::uint32_t payload_id = 0;
    std::uint32_t graph_position = 0;
    std::vector<std::uint8_t> data;

    bool operator==(const Chunk&) const = default;
};

inline std::uint64_t chunk_count_for(std::uint64_t total_bytes,
                                     std::uint64_t chunk_size) {
    return (total_bytes + chunk_size - 1) / chunk_size;
}

inline std::vector<Chunk> split_chunks(std::span<const std::uint8_t> flat_bytes,
                                       std::uint64_t chunk_size,
                                       std::uint32_t payload_id) {
    if (flat_bytes.empty())
        throw ValidationError("payload " + std::to_string(payload_id) +
                              " is empty; a zero-byte payload is invalid");
    if (chunk_size < 1)
        throw ConfigError("chunk_size must be at least 1");

    const std::uint64_t count = chunk_count_for(flat_bytes.size(), chunk_size);
    std::vector<Chunk> chunks;
    chunks.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t begin = i * chunk_size;
        const std::uint64_t end = std::min<std::uint64_t>(begin + chunk_size,
                                                          flat_bytes.size());
        chunks.push_back(Chunk{
            payload_id, static_cast<std::uint32_t>(i),
            std::vector<std::uint8_t>(flat_bytes.begin() + begin,
                                      flat_bytes.begin() + end)});
    }
    return chunks;
}

// Reassembles a payload's flat bytes from an unordered pool of chunks.
// Gaps raise IncompletePayloadError listing every missing position;
// duplicate positions are tolerated only when their bytes agree.
inline std::vector<std::uint8_t> merge_chunks(const std::vector<Chunk>& chunks,
                                              std::uint64_t expected_count,
                                              std::uint32_t expected_covers = 0) {
    const std::uint32_t payload_id = chunks.empty() ? 0 : chunks.front().payload_id;
    for (const Chunk& c : chunks) {
        if (c.payload_id != payload_id)
            throw ValidationError("merge_chunks got chunks of payloads " +
                                  std::to_string(payload_id) + " and " +
                                  std::to_string(c.payload_id));
    }

    std::vector<const Chunk*> slots(expected_count, nullptr);
    for (const Chunk& c : chunks) {
        if (c.graph_position >= expected_count)
            throw CorruptionError("payload " + std::to_string(payload_id) +
                                  ": graph position " +
                                  std::to_string(c.graph_position) +
                                  " is out of range (expected " +
                                  std::to_string(expected_count) + " chunks)");
        if (slots[c.graph_position]) {
            if (slots[c.graph_position]->data != c.data)
                throw CorruptionError("payload " + std::to_string(payload_id) +
                                      ": conflicting data for graph position " +
                                      std::to_string(c.graph_position));
            continue;
        }
        slots[c.graph_position] = &c;
    }

    std::vector<std::uint32_t> missing;
    for (std::uint64_t i = 0; i < expected_count; ++i)
        if (!slots[i]) missing.push_back(static_cast<std::uint32_t>(i));
    if (!missing.empty()) {
        std::string list;
        for (std::size_t i = 0; i < missing.size() && i < 16; ++i)
            list += (i ? "," : "") + std::to_string(missing[i]);
        if (missing.size() > 16) list += ",...";
        throw IncompletePayloadError(
            "payload " + std::to_string(payload_id) + " is missing " +
                std::to_string(missing.size()) + " of " +
                std::to_string(expected_count) + " chunks (positions " + list +
                (expected_covers
                     ? "); the job used " + std::to_string(expected_covers) +
                           " cover images"
                     : ")"),
            payload_id, std::move(missing), expected_covers);
    }

    std::vector<std::uint8_t> out;
    for (std::uint64_t i = 0; i < expected_count; ++i)
        out.insert(out.end(), slots[i]->data.begin(), slots[i]->data.end());
    return out;
}

} // namespace stegograph
