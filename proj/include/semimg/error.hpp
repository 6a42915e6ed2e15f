#pragma once

#include <stdexcept>
#include <string>

namespace semimg {

enum class ErrorKind {
    NoFrames,
    DimensionMismatch,
    DecodeError,
    PairMismatch,
    NonFiniteInput,
    EmptyInput,
    EvolutionDiverged,
    ConfigError,
    VideoTooShort,
    DegenerateWindow,
    LengthMismatch,
    IoError,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace semimg
