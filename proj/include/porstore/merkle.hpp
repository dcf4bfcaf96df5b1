#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "porstore/bytes.hpp"
#include "porstore/hash.hpp"

namespace porstore {

/// One file block (or coded shard). `index` is its leaf position.
struct Block {
    std::uint64_t index = 0;
    Bytes data;

    bool operator==(const Block&) const = default;
};

inline constexpr std::uint8_t kLeafPrefix = 0x00;
inline constexpr std::uint8_t kNodePrefix = 0x01;

/// hash(0x00 || index_le64 || data)
Digest leaf_digest(std::uint64_t index, ByteView data);
/// hash(0x01 || left || right)
Digest node_digest(const Digest& left, const Digest& right);

enum class Side : std::uint8_t { Left = 0, Right = 1 };

struct PathStep {
    Digest digest;
    Side side;  // where the sibling sits relative to the running node

    bool operator==(const PathStep&) const = default;
};

struct MerklePath {
    std::uint64_t leaf_index = 0;
    std::vector<PathStep> siblings;

    bool operator==(const MerklePath&) const = default;
};

/// Binary Merkle tree over indexed leaves. An unpaired node at the end of a
/// level is promoted unchanged rather than duplicated.
class MerkleTree {
public:
    /// Throws EmptyInput on no leaves, InvalidParams if blocks[i].index != i.
    static MerkleTree build(std::span<const Block> leaves);
    static MerkleTree from_leaf_digests(std::vector<Digest> leaves);

    std::uint64_t leaf_count() const { return levels_.front().size(); }
    const Digest& root() const { return levels_.back().front(); }
    const std::vector<std::vector<Digest>>& levels() const { return levels_; }
    const Digest& leaf(std::uint64_t index) const { return levels_.front().at(index); }

    /// Throws IndexOutOfRange.
    MerklePath prove(std::uint64_t index) const;

private:
    explicit MerkleTree(std::vector<std::vector<Digest>> levels) : levels_(std::move(levels)) {}
    std::vector<std::vector<Digest>> levels_;
};

inline MerkleTree build_tree(std::span<const Block> leaves) { return MerkleTree::build(leaves); }
inline MerklePath prove_leaf(const MerkleTree& tree, std::uint64_t index) { return tree.prove(index); }

/// Folds the leaf digest of `block` through `path`; a malformed path is a reject.
bool verify_leaf(const Digest& root, const Block& block, const MerklePath& path);
bool verify_leaf(const Digest& root, std::uint64_t index, ByteView data, const MerklePath& path);

}  // namespace porstore
