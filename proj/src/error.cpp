#include "porstore/error.hpp"

namespace porstore {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::NonceReplay: return "NonceReplay";
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::RaggedInput: return "RaggedInput";
        case ErrorCode::InsufficientShards: return "InsufficientShards";
        case ErrorCode::DuplicateShard: return "DuplicateShard";
        case ErrorCode::InsufficientShares: return "InsufficientShares";
        case ErrorCode::DuplicateShare: return "DuplicateShare";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace porstore
