#pragma once

#include <stdexcept>
#include <string>

namespace stylus {

enum class ErrorCode {
    DuplicateNovelId,
    EmptyNovel,
    InsufficientSamples,
    MissingAnnotation,
    EmptyClass,
    SingleClass,
    MalformedLine,
    UnknownSampleId,
    NegativeWeight,
    DuplicateTriple,
    UnknownGroup,
    DimensionMismatch,
    PageNotFound,
    NetworkUnavailable,
    EmptyPredictions,
    NoMisattributions,
    DegenerateInput,
    NonpositiveAlpha,
    ConfigError,
    IoError,
};

const char* to_string(ErrorCode code);

// Single exception type for all toolkit failures; the code carries the
// machine-readable cause so callers and the CLI can branch on it.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace stylus
