#include "porstore/sim.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "porstore/error.hpp"

namespace porstore::sim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

SealParams seal_params_for(const std::string& tag, const AuditParams& params) {
    return {params.delay_iters, Bytes(tag.begin(), tag.end()), params.salt};
}

/// A replica holder that lost some sealed blocks.
class MaskedReplicaProver : public ReplicaProver {
public:
    MaskedReplicaProver(std::shared_ptr<const Replica> replica, std::vector<bool> present, CostModel costs)
        : replica_(std::move(replica)), present_(std::move(present)), costs_(costs) {}

    PoRepProof respond(const SamplingChallenge& challenge, SimClock& clock) override {
        PoRepProof proof{challenge, {}, clock.now(), 0};
        for (auto idx : challenge.indices) {
            const auto& sealed = replica_->sealed_blocks.at(idx);
            Block block = present_[idx] ? sealed : Block{idx, Bytes(sealed.data.size(), 0)};
            ResponseItem item{std::move(block), replica_->tree.prove(idx)};
            clock.advance(costs_.block_read_cost + costs_.path_cost(item.path.siblings.size()));
            proof.response.items.push_back(std::move(item));
        }
        proof.finished_at = clock.now();
        return proof;
    }

private:
    std::shared_ptr<const Replica> replica_;
    std::vector<bool> present_;
    CostModel costs_;
};

/// Answers by regenerating sealed blocks. Only the target replica's tree
/// digests are consulted, never its sealed blocks. With a source replica the
/// raw block is first recovered by unsealing it (Sybil); otherwise the raw
/// file is read (generation). The first `honest_responses` answers come from
/// the stored replica (drop-then-reseal).
class ResealingProver : public ReplicaProver {
public:
    ResealingProver(std::shared_ptr<const StoredFile> file, std::shared_ptr<const Replica> target,
                    std::shared_ptr<const Replica> source, CostModel costs, std::uint64_t honest_responses = 0)
        : file_(std::move(file)),
          target_(std::move(target)),
          source_(std::move(source)),
          costs_(costs),
          honest_left_(honest_responses) {}

    PoRepProof respond(const SamplingChallenge& challenge, SimClock& clock) override {
        if (honest_left_ > 0) {
            --honest_left_;
            return porep_respond(*target_, challenge, clock, costs_);
        }
        PoRepProof proof{challenge, {}, clock.now(), 0};
        const auto& params = target_->params;
        for (auto idx : challenge.indices) {
            Bytes raw;
            SimTime cost = costs_.block_read_cost;
            if (source_) {
                raw = unseal_block(source_->sealed_blocks.at(idx).data, source_->params, idx);
                cost += costs_.keystream_cost(source_->params.delay_iters);
            } else {
                raw = file_->blocks.at(idx).data;
            }
            Block sealed{idx, seal_block(raw, params, idx)};
            cost += costs_.keystream_cost(params.delay_iters);
            ResponseItem item{std::move(sealed), target_->tree.prove(idx)};
            cost += costs_.path_cost(item.path.siblings.size());
            clock.advance(cost);
            proof.response.items.push_back(std::move(item));
        }
        proof.finished_at = clock.now();
        return proof;
    }

private:
    std::shared_ptr<const StoredFile> file_;
    std::shared_ptr<const Replica> target_;
    std::shared_ptr<const Replica> source_;
    CostModel costs_;
    std::uint64_t honest_left_;
};

/// Fetches every challenged sealed block from the remote holder.
class FetchingProver : public ReplicaProver {
public:
    FetchingProver(std::shared_ptr<const Replica> remote, CostModel costs) : remote_(std::move(remote)), costs_(costs) {}

    PoRepProof respond(const SamplingChallenge& challenge, SimClock& clock) override {
        PoRepProof proof{challenge, {}, clock.now(), 0};
        for (auto idx : challenge.indices) {
            ResponseItem item{remote_->sealed_blocks.at(idx), remote_->tree.prove(idx)};
            clock.advance(costs_.fetch_remote_cost + costs_.path_cost(item.path.siblings.size()));
            proof.response.items.push_back(std::move(item));
        }
        proof.finished_at = clock.now();
        return proof;
    }

private:
    std::shared_ptr<const Replica> remote_;
    CostModel costs_;
};

std::string format_fraction(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

std::string behavior_label(const NodeBehavior& behavior) {
    return std::visit(
        overloaded{
            [](const Honest&) { return std::string("honest"); },
            [](const Dropper& d) {
                return "dropper(" + format_fraction(d.drop_fraction) + "," +
                       (d.mode == DropMode::Independent ? "independent" : "fixed_subset") + ")";
            },
            [](const GenerationAttacker&) { return std::string("generation"); },
            [](const SybilAttacker& s) { return "sybil(" + std::to_string(s.identity_count) + ")"; },
            [](const OutsourcingAttacker& o) { return "outsourcing(" + o.holder_id + ")"; },
            [](const DropThenReseal& d) { return "drop_then_reseal(" + std::to_string(d.keep_proofs) + ")"; },
        },
        behavior);
}

std::uint32_t identity_count(const NodeBehavior& behavior) {
    if (const auto* s = std::get_if<SybilAttacker>(&behavior)) return s->identity_count;
    return 1;
}

void validate(const NodeBehavior& behavior) {
    if (const auto* d = std::get_if<Dropper>(&behavior)) {
        if (!(d->drop_fraction >= 0.0 && d->drop_fraction <= 1.0))
            throw Error(ErrorCode::ConfigError, "drop_fraction must lie in [0, 1]");
    } else if (const auto* s = std::get_if<SybilAttacker>(&behavior)) {
        if (s->identity_count < 2) throw Error(ErrorCode::ConfigError, "a Sybil attacker needs >= 2 identities");
    } else if (const auto* o = std::get_if<OutsourcingAttacker>(&behavior)) {
        if (o->holder_id.empty()) throw Error(ErrorCode::ConfigError, "outsourcing attacker needs a holder");
    }
}

std::string_view to_string(Protocol p) {
    switch (p) {
        case Protocol::Pos: return "pos";
        case Protocol::PoRep: return "porep";
        case Protocol::PoSt: return "post";
    }
    return "unknown";
}

Protocol protocol_from_string(std::string_view s) {
    if (s == "pos") return Protocol::Pos;
    if (s == "porep") return Protocol::PoRep;
    if (s == "post") return Protocol::PoSt;
    throw Error(ErrorCode::ConfigError, "unknown protocol '" + std::string(s) + "'");
}

std::string identity_tag(const std::string& node_id, std::uint32_t identity) {
    return identity == 0 ? node_id : node_id + "#" + std::to_string(identity);
}

std::vector<std::size_t> round_robin_placement(std::uint64_t leaf_count, std::size_t node_count) {
    if (node_count == 0) throw Error(ErrorCode::ConfigError, "placement needs at least one node");
    std::vector<std::size_t> owner(leaf_count);
    for (std::uint64_t i = 0; i < leaf_count; ++i) owner[i] = i % node_count;
    return owner;
}

std::shared_ptr<const Replica> SealCache::get(const StoredFile& file, const std::string& tag,
                                              const AuditParams& params) {
    auto key = std::make_tuple(file.manifest.file_id, tag, params.delay_iters, params.salt);
    {
        std::lock_guard lock(mutex_);
        if (auto it = replicas_.find(key); it != replicas_.end()) return it->second;
    }
    auto replica = std::make_shared<const Replica>(seal_file(file.blocks, seal_params_for(tag, params)));
    std::lock_guard lock(mutex_);
    return replicas_.try_emplace(key, std::move(replica)).first->second;
}

SimWorld::SimWorld(Seed rng_seed, CostModel costs, std::shared_ptr<SealCache> cache)
    : rng_seed_(rng_seed), costs_(costs), cache_(cache ? std::move(cache) : std::make_shared<SealCache>()) {
    costs_.validate();
}

void SimWorld::add_file(std::shared_ptr<const StoredFile> file) {
    auto id = file->manifest.file_id;
    files_[id] = std::move(file);
}

void SimWorld::add_node(std::string node_id, NodeBehavior behavior) {
    validate(behavior);
    nodes_[std::move(node_id)] = Node{std::move(behavior)};
}

void SimWorld::assign(const std::string& node_id, const std::string& file_id) {
    const auto& n = node(node_id);
    file(file_id);
    if (const auto* o = std::get_if<OutsourcingAttacker>(&n.behavior)) node(o->holder_id);
    assignments_.emplace_back(node_id, file_id);
}

const SimWorld::Node& SimWorld::node(const std::string& id) const {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw Error(ErrorCode::ConfigError, "unknown node '" + id + "'");
    return it->second;
}

const StoredFile& SimWorld::file(const std::string& id) const {
    auto it = files_.find(id);
    if (it == files_.end()) throw Error(ErrorCode::ConfigError, "unknown file '" + id + "'");
    return *it->second;
}

void SimWorld::schedule(SimTime at, std::function<void()> action) {
    events_.push(Event{at, next_seq_++, std::move(action)});
}

void SimWorld::run_until_idle() {
    while (!events_.empty()) {
        auto event = events_.top();
        events_.pop();
        if (event.time < now_) throw Error(ErrorCode::ConfigError, "event scheduled in the past");
        now_ = event.time;
        event.action();
    }
}

std::vector<bool> SimWorld::presence_mask(const NodeBehavior& behavior, const StoredFile& file) const {
    const auto k = file.manifest.k;
    std::vector<bool> present(k, true);
    const auto* d = std::get_if<Dropper>(&behavior);
    if (!d) return present;
    const auto base = "drop:" + file.manifest.file_id;
    if (d->mode == DropMode::Independent) {
        // Coupled across drop fractions: block i is dropped iff u_i < fraction.
        PrfStream prf(derive_seed(derive_seed(rng_seed_, base), d->seed));
        for (std::uint64_t i = 0; i < k; ++i) present[i] = prf.next_unit() >= d->drop_fraction;
    } else {
        const auto dropped = static_cast<std::uint64_t>(std::llround(d->drop_fraction * static_cast<double>(k)));
        std::vector<std::uint64_t> order(k);
        std::iota(order.begin(), order.end(), 0);
        PrfStream prf(derive_seed(derive_seed(Seed{}, base), d->seed));
        for (std::uint64_t i = 0; i < dropped; ++i) {
            auto j = i + prf.uniform_below(k - i);
            std::swap(order[i], order[j]);
            present[order[i]] = false;
        }
    }
    return present;
}

std::unique_ptr<ReplicaProver> SimWorld::make_prover(const std::string& node_id, std::uint32_t identity,
                                                     const StoredFile& f, const AuditParams& params) {
    const auto& behavior = node(node_id).behavior;
    auto file_ptr = files_.at(f.manifest.file_id);
    auto replica = [&](const std::string& tag) { return cache_->get(f, tag, params); };
    const auto tag = identity_tag(node_id, identity);
    return std::visit(
        overloaded{
            [&](const Honest&) -> std::unique_ptr<ReplicaProver> {
                return std::make_unique<HonestReplicaProver>(replica(tag), costs_);
            },
            [&](const Dropper&) -> std::unique_ptr<ReplicaProver> {
                return std::make_unique<MaskedReplicaProver>(replica(tag), presence_mask(behavior, f), costs_);
            },
            [&](const GenerationAttacker&) -> std::unique_ptr<ReplicaProver> {
                return std::make_unique<ResealingProver>(file_ptr, replica(tag), nullptr, costs_);
            },
            [&](const SybilAttacker&) -> std::unique_ptr<ReplicaProver> {
                if (identity == 0) return std::make_unique<HonestReplicaProver>(replica(tag), costs_);
                return std::make_unique<ResealingProver>(file_ptr, replica(tag), replica(identity_tag(node_id, 0)),
                                                         costs_);
            },
            [&](const OutsourcingAttacker& o) -> std::unique_ptr<ReplicaProver> {
                node(o.holder_id);
                return std::make_unique<FetchingProver>(replica(tag), costs_);
            },
            [&](const DropThenReseal& d) -> std::unique_ptr<ReplicaProver> {
                return std::make_unique<ResealingProver>(file_ptr, replica(tag), nullptr, costs_, d.keep_proofs);
            },
        },
        behavior);
}

AuditRecord SimWorld::audit_pos(const std::string& node_id, std::uint32_t identity, const StoredFile& f,
                                std::uint64_t epoch, const AuditParams& params, SimTime start) {
    const auto& behavior = node(node_id).behavior;
    auto seed = Hasher().update(f.manifest.merkle_root).update_le64(epoch).finish();
    auto challenge = derive_sampling_challenge(seed, epoch, f.manifest.k, params.k_prime);

    auto blocks = std::shared_ptr<const std::vector<Block>>(files_.at(f.manifest.file_id), &f.blocks);
    BlockStore store(blocks, presence_mask(behavior, f));
    const bool remote = std::holds_alternative<OutsourcingAttacker>(behavior);

    SimClock clock(start);
    auto response = respond_sampling(store, f.tree, challenge, f.manifest.block_size);
    for (const auto& item : response.items)
        clock.advance((remote ? costs_.fetch_remote_cost : costs_.block_read_cost) +
                      costs_.path_cost(item.path.siblings.size()));

    AuditRecord rec;
    rec.epoch = epoch;
    rec.node_id = node_id;
    rec.identity = identity;
    rec.file_id = f.manifest.file_id;
    rec.protocol = Protocol::Pos;
    rec.accepted = verify_sampling(f.manifest, challenge, response);
    if (!rec.accepted) rec.reject_reason = std::string(to_string(RejectReason::BadResponse));
    rec.elapsed = clock.now() - start;
    rec.proof_bytes = canonical_encode(PoRepProof{challenge, std::move(response), start, clock.now()}).size();
    rec.completed_at = clock.now();
    return rec;
}

AuditRecord SimWorld::audit_replica(const std::string& node_id, std::uint32_t identity, const StoredFile& f,
                                    std::uint64_t epoch, Protocol protocol, const AuditParams& params,
                                    SimTime start) {
    const auto tag = identity_tag(node_id, identity);
    // The verifier knows the registered replica root of every identity.
    const auto registered = cache_->get(f, tag, params);
    const auto& root = registered->replica_root();
    auto policy = AuditPolicy::defaults(costs_, params.k_prime);
    if (params.t_max != 0) policy.t_max = params.t_max;

    auto prover = make_prover(node_id, identity, f, params);
    SimClock clock(start);
    AuditRecord rec;
    rec.epoch = epoch;
    rec.node_id = node_id;
    rec.identity = identity;
    rec.file_id = f.manifest.file_id;
    rec.protocol = protocol;
    Verdict verdict;
    auto c0 = essential_challenge(root, epoch);
    if (protocol == Protocol::PoRep) {
        auto challenge = derive_sampling_challenge(c0, epoch, f.manifest.k, params.k_prime);
        auto proof = prover->respond(challenge, clock);
        verdict = proof.challenge == challenge ? porep_verify(f.manifest, root, proof, policy)
                                               : Verdict::reject(RejectReason::BadChallenge);
        rec.elapsed = proof.elapsed();
        rec.proof_bytes = canonical_encode(proof).size();
    } else {
        auto post = generate_post(*prover, c0, params.post_length, f.manifest.k, params.k_prime, clock);
        verdict = verify_post(f.manifest, root, post, policy);
        rec.elapsed = post.total_cost;
        rec.proof_bytes = proof_size_bytes(post);
    }
    rec.accepted = verdict.accepted;
    if (!verdict.accepted) rec.reject_reason = std::string(to_string(verdict.reason));
    rec.completed_at = clock.now();
    return rec;
}

std::vector<AuditRecord> SimWorld::run_audit_epoch(std::uint64_t epoch, Protocol protocol,
                                                   const AuditParams& params) {
    auto records = std::make_shared<std::vector<AuditRecord>>();
    for (const auto& [node_id, file_id] : assignments_) {
        const auto identities = identity_count(node(node_id).behavior);
        for (std::uint32_t identity = 0; identity < identities; ++identity) {
            schedule(now_, [this, records, node_id, file_id, identity, epoch, protocol, params] {
                const auto issued = now_;
                const auto& f = file(file_id);
                // One physical lane per (node, file): a node's identities share a disk.
                auto& busy = lane_busy_[{node_id, file_id}];
                const auto start = std::max(issued + costs_.network_latency, busy);
                auto rec = protocol == Protocol::Pos ? audit_pos(node_id, identity, f, epoch, params, start)
                                                     : audit_replica(node_id, identity, f, epoch, protocol, params, start);
                busy = rec.completed_at;
                rec.issued_at = issued;
                rec.completed_at += costs_.network_latency;
                schedule(rec.completed_at, [this, records, rec = std::move(rec)] {
                    audit_log_.push_back(rec);
                    records->push_back(rec);
                });
            });
        }
    }
    run_until_idle();
    return std::move(*records);
}

}  // namespace porstore::sim
