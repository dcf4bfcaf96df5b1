#pragma once

#include <cstdint>
#include <vector>

#include "porstore/bytes.hpp"
#include "porstore/cost.hpp"
#include "porstore/hash.hpp"
#include "porstore/manifest.hpp"
#include "porstore/porep.hpp"

namespace porstore {

inline constexpr std::uint64_t kDefaultPostLength = 12;

struct PoStProof {
    Seed initial_challenge;
    std::uint64_t length = 0;
    std::vector<PoRepProof> proofs;
    SimTime total_cost = 0;

    bool operator==(const PoStProof&) const = default;
};

/// Bit-exact, self-delimiting encoding of one proof:
///   seed(32) || epoch || k || count || indices[count]
///   || per item: block_len || block || siblings || (side(1) || digest(32))[siblings]
///   || started_at || finished_at
/// with every integer as le64.
Bytes canonical_encode(const PoRepProof& proof);
/// Throws ParseError on truncated or structurally invalid input.
PoRepProof canonical_decode(ByteView bytes);

/// seed_0 = hash(c0 || 0_le64); seed_i = hash(c0 || i_le64 || canonical_encode(proof_{i-1})).
Seed chain_seed(const Seed& c0, std::uint64_t i, const PoRepProof* previous);

/// c0 = hash(replica_root || epoch_le64).
Seed essential_challenge(const Digest& replica_root, std::uint64_t epoch);

/// Proof i is challenged with derive_sampling_challenge(seed_i, i, k, k') and
/// cannot start before proof i-1 has finished. Throws InvalidParams for L == 0.
PoStProof generate_post(ReplicaProver& prover, const Seed& c0, std::uint64_t length, std::uint64_t k,
                        std::size_t k_prime, SimClock& clock);
PoStProof generate_post(const Replica& replica, const Seed& c0, std::uint64_t length, SimClock& clock,
                        std::size_t k_prime = kDefaultKPrime, const CostModel& costs = {});

/// Accepts iff every seed re-derives from its predecessor, every challenge is
/// the derived one, every proof passes porep_verify (t_max per proof), proofs
/// are back to back, and total_cost spans first start to last finish.
Verdict verify_post(const FileManifest& manifest, const Digest& replica_root, const PoStProof& post,
                    const AuditPolicy& policy);

std::size_t proof_size_bytes(const PoStProof& post);

}  // namespace porstore
