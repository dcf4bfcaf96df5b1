#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "porstore/bytes.hpp"
#include "porstore/hash.hpp"
#include "porstore/manifest.hpp"
#include "porstore/merkle.hpp"

namespace porstore {

// ---- nonce-based audits -------------------------------------------------

struct NonceChallengeSet {
    struct Entry {
        Bytes nonce;
        Digest expected;
        bool used = false;
    };
    std::vector<Entry> entries;
};

/// Nonce i is PRF block i of (seed, epoch 0); expected_i = hash(file || nonce_i).
NonceChallengeSet prepare_nonce_challenges(ByteView file, std::size_t count, const Seed& seed);
Digest respond_nonce(ByteView file, ByteView nonce);
/// Marks the entry used whatever the outcome. Throws NonceReplay on reuse.
bool verify_nonce(NonceChallengeSet& set, std::size_t index, const Digest& answer);

// ---- Merkle-sampled audits ----------------------------------------------

inline constexpr std::size_t kDefaultKPrime = 20;

struct SamplingChallenge {
    Seed seed;
    std::uint64_t epoch = 0;
    std::uint64_t k = 0;
    std::vector<std::uint64_t> indices;  // distinct, ascending

    std::size_t k_prime() const { return indices.size(); }
    bool operator==(const SamplingChallenge&) const = default;
};

struct ResponseItem {
    Block block;
    MerklePath path;

    bool operator==(const ResponseItem&) const = default;
};

struct SamplingResponse {
    std::vector<ResponseItem> items;

    bool operator==(const SamplingResponse&) const = default;
};

/// k' distinct indices drawn by rejection from PrfStream(seed, epoch).
/// Throws InvalidParams unless 1 <= k_prime <= k.
SamplingChallenge derive_sampling_challenge(const Seed& seed, std::uint64_t epoch, std::uint64_t k,
                                            std::size_t k_prime);

/// What a storage node holds: a shared block set plus a presence mask. A
/// cheating node is an ordinary store with blocks marked missing.
class BlockStore {
public:
    explicit BlockStore(std::shared_ptr<const std::vector<Block>> blocks);
    BlockStore(std::shared_ptr<const std::vector<Block>> blocks, std::vector<bool> present);

    std::size_t size() const { return blocks_->size(); }
    bool has(std::uint64_t index) const { return index < size() && (present_.empty() || present_[index]); }
    /// nullptr when the block is missing.
    const Block* get(std::uint64_t index) const { return has(index) ? &(*blocks_)[index] : nullptr; }
    std::size_t missing_count() const;

private:
    std::shared_ptr<const std::vector<Block>> blocks_;
    std::vector<bool> present_;  // empty means everything present
};

/// Missing blocks are answered with a zero block of `block_size` bytes and the
/// genuine path from `tree`; the verifier then rejects.
SamplingResponse respond_sampling(const BlockStore& store, const MerkleTree& tree,
                                  const SamplingChallenge& challenge, std::size_t block_size);

bool verify_sampling(const Digest& root, const SamplingChallenge& challenge, const SamplingResponse& response);
bool verify_sampling(const FileManifest& manifest, const SamplingChallenge& challenge,
                     const SamplingResponse& response);

}  // namespace porstore
