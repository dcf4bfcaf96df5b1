#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "porstore/bytes.hpp"
#include "porstore/field.hpp"

namespace porstore {

/// Systematic Reed-Solomon over GF(65537). Data shards keep their bytes;
/// parity shards hold 17-bit packed field symbols.
inline constexpr std::uint64_t kErasureModulus = 65537;
inline constexpr unsigned kDataSymbolBits = 15;
inline constexpr unsigned kParitySymbolBits = 17;

struct CodeParams {
    std::uint32_t k_data = 1;
    std::uint32_t n_total = 2;

    bool operator==(const CodeParams&) const = default;
    /// Throws InvalidParams unless 1 <= k_data <= n_total <= p - 1.
    void validate() const;
};

struct Shard {
    std::uint32_t index = 0;  // evaluated at x = index + 1
    Bytes data;
};

struct EncodedBlocks {
    CodeParams params;
    std::size_t block_size = 0;
    std::vector<Shard> shards;
};

/// Byte length of a parity shard for data blocks of `block_size` bytes.
std::size_t parity_shard_size(std::size_t block_size);
std::size_t shard_size(const CodeParams& params, std::uint32_t index, std::size_t block_size);

/// Throws RaggedInput for unequal block lengths, InvalidParams for a count mismatch.
EncodedBlocks encode(std::span<const Bytes> data_blocks, const CodeParams& params);

/// Recovers the k_data original blocks from any k_data distinct shards.
/// Throws InsufficientShards, DuplicateShard, InvalidParams, RaggedInput.
std::vector<Bytes> decode(std::span<const Shard> shards, const CodeParams& params, std::size_t block_size);

}  // namespace porstore
