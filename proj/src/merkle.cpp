#include "porstore/merkle.hpp"

#include "porstore/error.hpp"

namespace porstore {

Digest leaf_digest(std::uint64_t index, ByteView data) {
    return Hasher().update_byte(kLeafPrefix).update_le64(index).update(data).finish();
}

Digest node_digest(const Digest& left, const Digest& right) {
    std::uint8_t buf[65];
    buf[0] = kNodePrefix;
    std::copy(left.bytes.begin(), left.bytes.end(), buf + 1);
    std::copy(right.bytes.begin(), right.bytes.end(), buf + 33);
    return hash_bytes(buf);
}

MerkleTree MerkleTree::build(std::span<const Block> leaves) {
    if (leaves.empty()) throw Error(ErrorCode::EmptyInput, "merkle tree needs at least one leaf");
    std::vector<Digest> digests;
    digests.reserve(leaves.size());
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        if (leaves[i].index != i)
            throw Error(ErrorCode::InvalidParams, "block index does not match its leaf position");
        digests.push_back(leaf_digest(leaves[i].index, leaves[i].data));
    }
    return from_leaf_digests(std::move(digests));
}

MerkleTree MerkleTree::from_leaf_digests(std::vector<Digest> leaves) {
    if (leaves.empty()) throw Error(ErrorCode::EmptyInput, "merkle tree needs at least one leaf");
    std::vector<std::vector<Digest>> levels;
    levels.push_back(std::move(leaves));
    while (levels.back().size() > 1) {
        const auto& below = levels.back();
        std::vector<Digest> above;
        above.reserve((below.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < below.size(); i += 2) above.push_back(node_digest(below[i], below[i + 1]));
        if (below.size() % 2 == 1) above.push_back(below.back());
        levels.push_back(std::move(above));
    }
    return MerkleTree(std::move(levels));
}

MerklePath MerkleTree::prove(std::uint64_t index) const {
    if (index >= leaf_count()) throw Error(ErrorCode::IndexOutOfRange, "leaf index out of range");
    MerklePath path{index, {}};
    auto pos = index;
    for (std::size_t level = 0; level + 1 < levels_.size(); ++level) {
        const auto& nodes = levels_[level];
        if (pos % 2 == 1) {
            path.siblings.push_back({nodes[pos - 1], Side::Left});
        } else if (pos + 1 < nodes.size()) {
            path.siblings.push_back({nodes[pos + 1], Side::Right});
        }
        // else: promoted without a sibling at this level
        pos /= 2;
    }
    return path;
}

bool verify_leaf(const Digest& root, std::uint64_t index, ByteView data, const MerklePath& path) {
    if (path.leaf_index != index) return false;
    auto running = leaf_digest(index, data);
    for (const auto& step : path.siblings) {
        running = step.side == Side::Left ? node_digest(step.digest, running) : node_digest(running, step.digest);
    }
    return running == root;
}

bool verify_leaf(const Digest& root, const Block& block, const MerklePath& path) {
    return verify_leaf(root, block.index, block.data, path);
}

}  // namespace porstore
