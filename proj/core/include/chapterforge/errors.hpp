#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace chapterforge {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text. Carries the position that failed: a byte offset for
// single-value parses, a line (or record) number for file parses.
struct ParseError : Error {
    explicit ParseError(const std::string& message,
                        std::optional<std::size_t> byte_offset = std::nullopt,
                        std::optional<std::size_t> line = std::nullopt)
        : Error(message), byte_offset(byte_offset), line(line) {}

    std::optional<std::size_t> byte_offset;
    std::optional<std::size_t> line;
};

struct IoError : Error {
    using Error::Error;
};

// A domain invariant would be violated (chapter ordering, timestamp range, ...).
struct ValidationError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

// No transcript lines survived the modality filter.
struct EmptyTranscriptError : Error {
    using Error::Error;
};

// Generator output contained no parseable chapter line.
struct NoChaptersParsedError : Error {
    explicit NoChaptersParsedError(std::string raw)
        : Error("no chapters parsed from generator output"), raw_text(std::move(raw)) {}

    std::string raw_text;
};

// Network-level failure that survived all retries.
struct TransportError : Error {
    TransportError(const std::string& message, int attempts)
        : Error(message), attempts(attempts) {}

    int attempts;
};

// The endpoint answered, but not with a usable completion.
struct ProtocolError : Error {
    ProtocolError(const std::string& message, int status, std::string body_excerpt)
        : Error(message), status(status), body_excerpt(std::move(body_excerpt)) {}

    int status;
    std::string body_excerpt;
};

}  // namespace chapterforge
