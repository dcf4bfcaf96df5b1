#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace porstore {

enum class ErrorCode {
    EmptyInput,
    IndexOutOfRange,
    NonceReplay,
    InvalidParams,
    RaggedInput,
    InsufficientShards,
    DuplicateShard,
    InsufficientShares,
    DuplicateShare,
    ConfigError,
    ParseError,
    IoError,
};

std::string_view to_string(ErrorCode code);

// Every library failure surfaces as an Error carrying a machine-checkable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace porstore
