#include "porstore/porep.hpp"

#include <cstring>

#include "porstore/error.hpp"

namespace porstore {

void SealParams::validate() const {
    if (delay_iters < 1) throw Error(ErrorCode::InvalidParams, "delay_iters must be >= 1");
    if (node_tag.empty()) throw Error(ErrorCode::InvalidParams, "node_tag must be non-empty");
}

Bytes keystream(const SealParams& params, std::uint64_t index, std::size_t block_size) {
    auto state = Hasher().update(params.node_tag).update(params.salt).update_le64(index).finish();
    for (std::uint64_t j = 0; j < params.delay_iters; ++j) state = hash_bytes(state.view());

    Bytes out(block_size);
    std::uint8_t buf[40];
    std::memcpy(buf, state.bytes.data(), 32);
    for (std::size_t offset = 0, ctr = 0; offset < block_size; ++ctr, offset += 32) {
        for (int i = 0; i < 8; ++i) buf[32 + i] = static_cast<std::uint8_t>(ctr >> (8 * i));
        auto chunk = hash_bytes(buf);
        std::memcpy(out.data() + offset, chunk.bytes.data(), std::min<std::size_t>(32, block_size - offset));
    }
    return out;
}

Bytes seal_block(ByteView data, const SealParams& params, std::uint64_t index) {
    auto out = keystream(params, index, data.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] ^= data[i];
    return out;
}

Bytes unseal_block(ByteView replica_block, const SealParams& params, std::uint64_t index) {
    return seal_block(replica_block, params, index);
}

Replica seal_file(std::span<const Block> blocks, const SealParams& params) {
    if (blocks.empty()) throw Error(ErrorCode::EmptyInput, "nothing to seal");
    params.validate();
    std::vector<Block> sealed;
    sealed.reserve(blocks.size());
    for (const auto& b : blocks) sealed.push_back({b.index, seal_block(b.data, params, b.index)});
    auto tree = MerkleTree::build(sealed);
    return Replica{params, std::move(sealed), std::move(tree)};
}

SimTime seal_cost(std::uint64_t blocks, const SealParams& params, const CostModel& costs) {
    return blocks * costs.keystream_cost(params.delay_iters);
}

AuditPolicy AuditPolicy::defaults(const CostModel& costs, std::size_t k_prime) {
    return {k_prime, 10 * k_prime * costs.block_read_cost};
}

std::string_view to_string(RejectReason reason) {
    switch (reason) {
        case RejectReason::None: return "none";
        case RejectReason::BadResponse: return "bad_response";
        case RejectReason::TooSlow: return "too_slow";
        case RejectReason::ChainLink: return "chain_link";
        case RejectReason::BadChallenge: return "bad_challenge";
        case RejectReason::BadTimestamps: return "bad_timestamps";
        case RejectReason::Malformed: return "malformed";
    }
    return "unknown";
}

PoRepProof porep_respond(const Replica& replica, const SamplingChallenge& challenge, SimClock& clock,
                         const CostModel& costs) {
    PoRepProof proof;
    proof.challenge = challenge;
    proof.started_at = clock.now();
    for (auto idx : challenge.indices) {
        ResponseItem item{replica.sealed_blocks.at(idx), replica.tree.prove(idx)};
        clock.advance(costs.block_read_cost + costs.path_cost(item.path.siblings.size()));
        proof.response.items.push_back(std::move(item));
    }
    proof.finished_at = clock.now();
    return proof;
}

Verdict porep_verify(const FileManifest& manifest, const Digest& replica_root, const PoRepProof& proof,
                     const AuditPolicy& policy) {
    if (proof.challenge.k != manifest.k || proof.challenge.k_prime() != policy.k_prime)
        return Verdict::reject(RejectReason::BadChallenge);
    if (!verify_sampling(replica_root, proof.challenge, proof.response))
        return Verdict::reject(RejectReason::BadResponse);
    if (proof.finished_at < proof.started_at) return Verdict::reject(RejectReason::BadTimestamps);
    if (proof.elapsed() > policy.t_max) return Verdict::reject(RejectReason::TooSlow);
    return Verdict::accept();
}

}  // namespace porstore
