#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "porstore/bytes.hpp"
#include "porstore/cost.hpp"
#include "porstore/hash.hpp"
#include "porstore/manifest.hpp"
#include "porstore/merkle.hpp"
#include "porstore/pos.hpp"

namespace porstore {

inline constexpr std::uint64_t kDefaultDelayIters = 10'000;

struct SealParams {
    std::uint64_t delay_iters = kDefaultDelayIters;
    Bytes node_tag;  // replica identity
    Seed salt;

    void validate() const;  // InvalidParams unless d >= 1 and the tag is non-empty
};

/// s_0 = hash(tag || salt || index_le64), s_j = hash(s_{j-1}) for j = 1..d,
/// output = hash(s_d || 0_le64) || hash(s_d || 1_le64) || ... cut to block_size.
Bytes keystream(const SealParams& params, std::uint64_t index, std::size_t block_size);

struct Replica {
    SealParams params;
    std::vector<Block> sealed_blocks;
    MerkleTree tree;

    const Digest& replica_root() const { return tree.root(); }
};

/// Throws EmptyInput. Simulated cost is k * sealing_cost(d).
Replica seal_file(std::span<const Block> blocks, const SealParams& params);
Bytes unseal_block(ByteView replica_block, const SealParams& params, std::uint64_t index);
Bytes seal_block(ByteView data, const SealParams& params, std::uint64_t index);

SimTime seal_cost(std::uint64_t blocks, const SealParams& params, const CostModel& costs);

struct PoRepProof {
    SamplingChallenge challenge;
    SamplingResponse response;
    SimTime started_at = 0;
    SimTime finished_at = 0;

    SimTime elapsed() const { return finished_at - started_at; }
    bool operator==(const PoRepProof&) const = default;
};

/// Verifier-side policy: how many blocks to sample and how long a prover may take.
struct AuditPolicy {
    std::size_t k_prime = kDefaultKPrime;
    SimTime t_max = 0;

    /// t_max = 10 * k' * block_read_cost.
    static AuditPolicy defaults(const CostModel& costs, std::size_t k_prime = kDefaultKPrime);
};

enum class RejectReason {
    None,
    BadResponse,    // a block or path failed against the root
    TooSlow,        // elapsed exceeded t_max
    ChainLink,      // a chained seed did not match its recomputation
    BadChallenge,   // the challenge inside a proof is not the derived one
    BadTimestamps,  // non-contiguous or inconsistent timing
    Malformed,
};

std::string_view to_string(RejectReason reason);

struct Verdict {
    bool accepted = true;
    RejectReason reason = RejectReason::None;

    static Verdict accept() { return {}; }
    static Verdict reject(RejectReason r) { return {false, r}; }
    explicit operator bool() const { return accepted; }
};

/// Anything able to answer a replica challenge on a simulated clock. Honest
/// holders and the attacker models share this interface.
class ReplicaProver {
public:
    virtual ~ReplicaProver() = default;
    virtual PoRepProof respond(const SamplingChallenge& challenge, SimClock& clock) = 0;
};

/// Cost of an honest answer: k' * (block_read_cost + path_cost).
PoRepProof porep_respond(const Replica& replica, const SamplingChallenge& challenge, SimClock& clock,
                         const CostModel& costs = {});

class HonestReplicaProver : public ReplicaProver {
public:
    HonestReplicaProver(std::shared_ptr<const Replica> replica, CostModel costs)
        : replica_(std::move(replica)), costs_(costs) {}

    PoRepProof respond(const SamplingChallenge& challenge, SimClock& clock) override {
        return porep_respond(*replica_, challenge, clock, costs_);
    }

private:
    std::shared_ptr<const Replica> replica_;
    CostModel costs_;
};

/// Accepts iff every sampled sealed block opens against replica_root and the
/// proof took at most policy.t_max.
Verdict porep_verify(const FileManifest& manifest, const Digest& replica_root, const PoRepProof& proof,
                     const AuditPolicy& policy);

}  // namespace porstore
