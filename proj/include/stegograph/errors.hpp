#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace stegograph {

enum class ErrorKind {
    validation,         // bad argument or malformed input image
    shape,              // dimension / length mismatch
    capacity,           // payload does not fit the available slots
    range,              // read past the end of the slot space
    truncation,         // segment ends before its declared length
    not_a_stego_segment,// magic bytes absent
    corruption,         // manifest or chunk data violates an invariant
    incomplete_payload, // chunks missing after pooling
    no_stego_found,     // none of the inputs carried a segment
    config,             // bad configuration (key, chunk size, ...)
    io,                 // file system / codec failure
};

class StegoError : public std::runtime_error {
public:
    StegoError(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

class ValidationError : public StegoError {
public:
    explicit ValidationError(const std::string& msg)
        : StegoError(ErrorKind::validation, msg) {}
};

class ShapeError : public StegoError {
public:
    explicit ShapeError(const std::string& msg)
        : StegoError(ErrorKind::shape, msg) {}
};

class CapacityError : public StegoError {
public:
    CapacityError(const std::string& msg, std::uint64_t required_bits,
                  std::uint64_t available_bits)
        : StegoError(ErrorKind::capacity, msg),
          required_bits(required_bits), available_bits(available_bits) {}

    std::uint64_t required_bits;
    std::uint64_t available_bits;
};

class RangeError : public StegoError {
public:
    explicit RangeError(const std::string& msg)
        : StegoError(ErrorKind::range, msg) {}
};

class TruncationError : public StegoError {
public:
    TruncationError(const std::string& msg, std::uint64_t bytes_needed,
                    std::uint64_t bytes_available)
        : StegoError(ErrorKind::truncation, msg),
          bytes_needed(bytes_needed), bytes_available(bytes_available) {}

    std::uint64_t bytes_needed;
    std::uint64_t bytes_available;
};

class NotAStegoSegmentError : public StegoError {
public:
    explicit NotAStegoSegmentError(const std::string& msg)
        : StegoError(ErrorKind::not_a_stego_segment, msg) {}
};

class CorruptionError : public StegoError {
public:
    explicit CorruptionError(const std::string& msg)
        : StegoError(ErrorKind::corruption, msg) {}
};

class IncompletePayloadError : public StegoError {
public:
    IncompletePayloadError(const std::string& msg, std::uint32_t payload_id,
                           std::vector<std::uint32_t> missing_positions,
                           std::uint32_t expected_covers)
        : StegoError(ErrorKind::incomplete_payload, msg),
          payload_id(payload_id),
          missing_positions(std::move(missing_positions)),
          expected_covers(expected_covers) {}

    std::uint32_t payload_id;
    std::vector<std::uint32_t> missing_positions;
    std::uint32_t expected_covers;
};

class NoStegoFoundError : public StegoError {
public:
    explicit NoStegoFoundError(const std::string& msg)
        : StegoError(ErrorKind::no_stego_found, msg) {}
};

class ConfigError : public StegoError {
public:
    explicit ConfigError(const std::string& msg)
        : StegoError(ErrorKind::config, msg) {}
};

class IoError : public StegoError {
public:
    explicit IoError(const std::string& msg)
        : StegoError(ErrorKind::io, msg) {}
};

} // namespace stegograph
