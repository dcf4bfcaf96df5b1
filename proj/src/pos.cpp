#include "porstore/pos.hpp"

#include <algorithm>
#include <unordered_set>

#include "porstore/error.hpp"

namespace porstore {

NonceChallengeSet prepare_nonce_challenges(ByteView file, std::size_t count, const Seed& seed) {
    if (count == 0) throw Error(ErrorCode::EmptyInput, "need at least one nonce");
    NonceChallengeSet set;
    set.entries.reserve(count);
    PrfStream prf(seed);
    for (std::size_t i = 0; i < count; ++i) {
        auto nonce = prf.block(i);
        Bytes n(nonce.bytes.begin(), nonce.bytes.end());
        auto expected = respond_nonce(file, n);
        set.entries.push_back({std::move(n), expected, false});
    }
    return set;
}

Digest respond_nonce(ByteView file, ByteView nonce) { return Hasher().update(file).update(nonce).finish(); }

bool verify_nonce(NonceChallengeSet& set, std::size_t index, const Digest& answer) {
    if (index >= set.entries.size()) throw Error(ErrorCode::IndexOutOfRange, "no such nonce entry");
    auto& entry = set.entries[index];
    if (entry.used) throw Error(ErrorCode::NonceReplay, "nonce " + std::to_string(index) + " already used");
    entry.used = true;
    return entry.expected == answer;
}

SamplingChallenge derive_sampling_challenge(const Seed& seed, std::uint64_t epoch, std::uint64_t k,
                                            std::size_t k_prime) {
    if (k == 0 || k_prime == 0 || k_prime > k)
        throw Error(ErrorCode::InvalidParams, "need 1 <= k_prime <= k");
    PrfStream prf(seed, epoch);
    std::unordered_set<std::uint64_t> chosen;
    std::vector<std::uint64_t> indices;
    indices.reserve(k_prime);
    while (indices.size() < k_prime) {
        auto idx = prf.uniform_below(k);
        if (chosen.insert(idx).second) indices.push_back(idx);
    }
    std::sort(indices.begin(), indices.end());
    return {seed, epoch, k, std::move(indices)};
}

BlockStore::BlockStore(std::shared_ptr<const std::vector<Block>> blocks) : blocks_(std::move(blocks)) {}

BlockStore::BlockStore(std::shared_ptr<const std::vector<Block>> blocks, std::vector<bool> present)
    : blocks_(std::move(blocks)), present_(std::move(present)) {
    if (!present_.empty() && present_.size() != blocks_->size())
        throw Error(ErrorCode::InvalidParams, "presence mask size mismatch");
}

std::size_t BlockStore::missing_count() const {
    return present_.empty() ? 0 : static_cast<std::size_t>(std::count(present_.begin(), present_.end(), false));
}

SamplingResponse respond_sampling(const BlockStore& store, const MerkleTree& tree,
                                  const SamplingChallenge& challenge, std::size_t block_size) {
    SamplingResponse response;
    response.items.reserve(challenge.indices.size());
    for (auto idx : challenge.indices) {
        ResponseItem item;
        if (const auto* block = store.get(idx)) {
            item.block = *block;
        } else {
            item.block = {idx, Bytes(block_size, 0)};
        }
        item.path = tree.prove(idx);
        response.items.push_back(std::move(item));
    }
    return response;
}

bool verify_sampling(const Digest& root, const SamplingChallenge& challenge, const SamplingResponse& response) {
    if (response.items.size() != challenge.indices.size()) return false;
    for (std::size_t i = 0; i < response.items.size(); ++i) {
        const auto& item = response.items[i];
        if (item.block.index != challenge.indices[i] || item.block.index >= challenge.k) return false;
        if (!verify_leaf(root, item.block, item.path)) return false;
    }
    return true;
}

bool verify_sampling(const FileManifest& manifest, const SamplingChallenge& challenge,
                     const SamplingResponse& response) {
    if (challenge.k != manifest.k) return false;
    return verify_sampling(manifest.merkle_root, challenge, response);
}

}  // namespace porstore
