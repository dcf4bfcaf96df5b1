#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "porstore/bytes.hpp"
#include "porstore/erasure.hpp"
#include "porstore/hash.hpp"
#include "porstore/merkle.hpp"

namespace porstore {

inline constexpr std::size_t kDefaultBlockSize = 4096;

/// Public audit anchor for a stored file. `k` counts Merkle leaves: raw
/// blocks for an uncoded file, coded shards (over all stripes) otherwise.
struct FileManifest {
    std::string file_id;
    std::uint64_t total_length = 0;
    std::uint64_t block_size = kDefaultBlockSize;
    std::uint64_t k = 0;
    Digest merkle_root;
    std::optional<CodeParams> coding;
    std::optional<std::string> seal_tag;
    std::optional<Digest> replica_root;

    bool operator==(const FileManifest&) const = default;
};

/// Blocks (or shards) plus the tree over them, as held by an honest node.
struct StoredFile {
    FileManifest manifest;
    std::vector<Block> blocks;
    MerkleTree tree;
};

/// Splits into zero-padded blocks of `block_size` (at least one block).
std::vector<Block> split_blocks(ByteView data, std::size_t block_size);

/// Uncoded: leaves are the blocks. Coded: the file is cut into stripes of
/// k_data blocks, each stripe expanded to n_total shards, shard s of stripe t
/// at leaf t * n_total + s.
StoredFile prepare_file(std::string file_id, ByteView data, std::size_t block_size,
                        std::optional<CodeParams> coding = std::nullopt);

/// Rebuilds the original bytes. `leaves[i]` empty means the leaf is missing;
/// coded files tolerate up to n_total - k_data missing shards per stripe.
Bytes reassemble_file(const FileManifest& manifest, std::span<const std::optional<Bytes>> leaves);

}  // namespace porstore
