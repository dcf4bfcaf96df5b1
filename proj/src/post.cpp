#include "porstore/post.hpp"

#include "porstore/error.hpp"

namespace porstore {

namespace {

class Reader {
public:
    explicit Reader(ByteView bytes) : bytes_(bytes) {}

    std::uint64_t le64() {
        need(8);
        auto v = load_le64(bytes_.data() + pos_);
        pos_ += 8;
        return v;
    }
    std::uint8_t byte() {
        need(1);
        return bytes_[pos_++];
    }
    ByteView take(std::uint64_t n) {
        need(n);
        auto out = bytes_.subspan(pos_, n);
        pos_ += n;
        return out;
    }
    bool done() const { return pos_ == bytes_.size(); }

private:
    void need(std::uint64_t n) const {
        if (n > bytes_.size() - pos_) throw Error(ErrorCode::ParseError, "truncated proof encoding");
    }
    ByteView bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

Bytes canonical_encode(const PoRepProof& proof) {
    Bytes out;
    append(out, proof.challenge.seed.view());
    append_le64(out, proof.challenge.epoch);
    append_le64(out, proof.challenge.k);
    append_le64(out, proof.challenge.indices.size());
    for (auto idx : proof.challenge.indices) append_le64(out, idx);
    append_le64(out, proof.response.items.size());
    for (const auto& item : proof.response.items) {
        append_le64(out, item.block.index);
        append_le64(out, item.block.data.size());
        append(out, item.block.data);
        append_le64(out, item.path.siblings.size());
        for (const auto& step : item.path.siblings) {
            out.push_back(static_cast<std::uint8_t>(step.side));
            append(out, step.digest.view());
        }
    }
    append_le64(out, proof.started_at);
    append_le64(out, proof.finished_at);
    return out;
}

PoRepProof canonical_decode(ByteView bytes) {
    Reader in(bytes);
    PoRepProof proof;
    proof.challenge.seed = Digest::from_bytes(in.take(32));
    proof.challenge.epoch = in.le64();
    proof.challenge.k = in.le64();
    const auto count = in.le64();
    for (std::uint64_t i = 0; i < count; ++i) proof.challenge.indices.push_back(in.le64());
    const auto items = in.le64();
    for (std::uint64_t i = 0; i < items; ++i) {
        ResponseItem item;
        item.block.index = in.le64();
        auto data = in.take(in.le64());
        item.block.data.assign(data.begin(), data.end());
        item.path.leaf_index = item.block.index;
        const auto siblings = in.le64();
        for (std::uint64_t s = 0; s < siblings; ++s) {
            auto side = in.byte();
            if (side > 1) throw Error(ErrorCode::ParseError, "invalid path side");
            item.path.siblings.push_back({Digest::from_bytes(in.take(32)), static_cast<Side>(side)});
        }
        proof.response.items.push_back(std::move(item));
    }
    proof.started_at = in.le64();
    proof.finished_at = in.le64();
    if (!in.done()) throw Error(ErrorCode::ParseError, "trailing bytes after proof");
    return proof;
}

Seed chain_seed(const Seed& c0, std::uint64_t i, const PoRepProof* previous) {
    Hasher h;
    h.update(c0).update_le64(i);
    if (previous) h.update(canonical_encode(*previous));
    return h.finish();
}

Seed essential_challenge(const Digest& replica_root, std::uint64_t epoch) {
    return Hasher().update(replica_root).update_le64(epoch).finish();
}

PoStProof generate_post(ReplicaProver& prover, const Seed& c0, std::uint64_t length, std::uint64_t k,
                        std::size_t k_prime, SimClock& clock) {
    if (length == 0) throw Error(ErrorCode::InvalidParams, "PoSt length must be >= 1");
    PoStProof post;
    post.initial_challenge = c0;
    post.length = length;
    post.proofs.reserve(length);
    const auto start = clock.now();
    for (std::uint64_t i = 0; i < length; ++i) {
        // The seed of proof i needs the complete proof i-1: no overlap possible.
        auto seed = chain_seed(c0, i, i == 0 ? nullptr : &post.proofs.back());
        auto challenge = derive_sampling_challenge(seed, i, k, k_prime);
        post.proofs.push_back(prover.respond(challenge, clock));
    }
    post.total_cost = clock.now() - start;
    return post;
}

PoStProof generate_post(const Replica& replica, const Seed& c0, std::uint64_t length, SimClock& clock,
                        std::size_t k_prime, const CostModel& costs) {
    struct Borrowed : ReplicaProver {
        const Replica& replica;
        CostModel costs;
        Borrowed(const Replica& r, CostModel c) : replica(r), costs(c) {}
        PoRepProof respond(const SamplingChallenge& challenge, SimClock& clock) override {
            return porep_respond(replica, challenge, clock, costs);
        }
    } prover(replica, costs);
    return generate_post(prover, c0, length, replica.tree.leaf_count(), k_prime, clock);
}

Verdict verify_post(const FileManifest& manifest, const Digest& replica_root, const PoStProof& post,
                    const AuditPolicy& policy) {
    if (post.length == 0 || post.proofs.size() != post.length) return Verdict::reject(RejectReason::Malformed);
    if (policy.k_prime == 0 || policy.k_prime > manifest.k) return Verdict::reject(RejectReason::Malformed);
    for (std::uint64_t i = 0; i < post.length; ++i) {
        const auto& proof = post.proofs[i];
        auto seed = chain_seed(post.initial_challenge, i, i == 0 ? nullptr : &post.proofs[i - 1]);
        if (proof.challenge.seed != seed) return Verdict::reject(RejectReason::ChainLink);
        if (proof.challenge != derive_sampling_challenge(seed, i, manifest.k, policy.k_prime))
            return Verdict::reject(RejectReason::BadChallenge);
        if (auto v = porep_verify(manifest, replica_root, proof, policy); !v) return v;
        if (i > 0 && proof.started_at != post.proofs[i - 1].finished_at)
            return Verdict::reject(RejectReason::BadTimestamps);
    }
    if (post.total_cost != post.proofs.back().finished_at - post.proofs.front().started_at)
        return Verdict::reject(RejectReason::BadTimestamps);
    return Verdict::accept();
}

std::size_t proof_size_bytes(const PoStProof& post) {
    std::size_t size = 32 + 8 + 8;
    for (const auto& p : post.proofs) size += canonical_encode(p).size();
    return size;
}

}  // namespace porstore
