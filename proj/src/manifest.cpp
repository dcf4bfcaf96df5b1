#include "porstore/manifest.hpp"

#include <algorithm>

#include "porstore/error.hpp"

namespace porstore {

std::vector<Block> split_blocks(ByteView data, std::size_t block_size) {
    if (block_size == 0) throw Error(ErrorCode::InvalidParams, "block size must be positive");
    const std::size_t count = std::max<std::size_t>(1, (data.size() + block_size - 1) / block_size);
    std::vector<Block> blocks(count);
    for (std::size_t i = 0; i < count; ++i) {
        blocks[i].index = i;
        blocks[i].data.assign(block_size, 0);
        const auto begin = i * block_size;
        const auto end = std::min(data.size(), begin + block_size);
        if (begin < end) std::copy(data.begin() + begin, data.begin() + end, blocks[i].data.begin());
    }
    return blocks;
}

StoredFile prepare_file(std::string file_id, ByteView data, std::size_t block_size,
                        std::optional<CodeParams> coding) {
    auto raw = split_blocks(data, block_size);
    std::vector<Block> leaves;
    if (!coding) {
        leaves = std::move(raw);
    } else {
        coding->validate();
        const std::size_t stripes = (raw.size() + coding->k_data - 1) / coding->k_data;
        for (std::size_t t = 0; t < stripes; ++t) {
            std::vector<Bytes> stripe;
            for (std::size_t j = 0; j < coding->k_data; ++j) {
                const auto src = t * coding->k_data + j;
                stripe.push_back(src < raw.size() ? raw[src].data : Bytes(block_size, 0));
            }
            auto encoded = encode(stripe, *coding);
            for (auto& shard : encoded.shards)
                leaves.push_back({leaves.size(), std::move(shard.data)});
        }
    }
    auto tree = MerkleTree::build(leaves);
    FileManifest manifest;
    manifest.file_id = std::move(file_id);
    manifest.total_length = data.size();
    manifest.block_size = block_size;
    manifest.k = leaves.size();
    manifest.merkle_root = tree.root();
    manifest.coding = coding;
    return StoredFile{std::move(manifest), std::move(leaves), std::move(tree)};
}

Bytes reassemble_file(const FileManifest& manifest, std::span<const std::optional<Bytes>> leaves) {
    if (leaves.size() != manifest.k) throw Error(ErrorCode::InvalidParams, "leaf count does not match manifest");
    Bytes out;
    out.reserve(manifest.k * manifest.block_size);
    if (!manifest.coding) {
        for (std::size_t i = 0; i < leaves.size(); ++i) {
            if (!leaves[i]) throw Error(ErrorCode::InsufficientShards, "block " + std::to_string(i) + " missing");
            append(out, *leaves[i]);
        }
    } else {
        const auto& code = *manifest.coding;
        for (std::size_t base = 0; base < leaves.size(); base += code.n_total) {
            std::vector<Shard> shards;
            for (std::uint32_t s = 0; s < code.n_total; ++s)
                if (leaves[base + s]) shards.push_back({s, *leaves[base + s]});
            for (auto& block : decode(shards, code, manifest.block_size)) append(out, block);
        }
    }
    if (out.size() < manifest.total_length) throw Error(ErrorCode::InvalidParams, "manifest length exceeds stored data");
    out.resize(manifest.total_length);
    return out;
}

}  // namespace porstore
