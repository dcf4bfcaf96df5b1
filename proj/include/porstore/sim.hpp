#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <string>
#include <variant>
#include <vector>

#include "porstore/cost.hpp"
#include "porstore/hash.hpp"
#include "porstore/manifest.hpp"
#include "porstore/porep.hpp"
#include "porstore/pos.hpp"
#include "porstore/post.hpp"

namespace porstore::sim {

struct Honest {
    bool operator==(const Honest&) const = default;
};

enum class DropMode { Independent, FixedSubset };

/// Independent: each block dropped with probability drop_fraction, afresh per
/// world. FixedSubset: exactly round(drop_fraction * k) blocks, chosen by
/// `seed` alone and so identical in every world.
struct Dropper {
    double drop_fraction = 0.5;
    DropMode mode = DropMode::Independent;
    std::uint64_t seed = 0;
    bool operator==(const Dropper&) const = default;
};

/// Keeps only the raw blocks (and the replica's tree digests) and reseals
/// challenged blocks on demand.
struct GenerationAttacker {
    bool operator==(const GenerationAttacker&) const = default;
};

/// Registers identity_count identities but keeps the replica of the first only.
struct SybilAttacker {
    std::uint32_t identity_count = 2;
    bool operator==(const SybilAttacker&) const = default;
};

/// Its replica lives at another node; every challenged block is fetched.
struct OutsourcingAttacker {
    std::string holder_id;
    bool operator==(const OutsourcingAttacker&) const = default;
};

/// Holds the replica for the first keep_proofs proofs of a run, then discards
/// it (keeping raw data) and reseals on demand.
struct DropThenReseal {
    std::uint64_t keep_proofs = 1;
    bool operator==(const DropThenReseal&) const = default;
};

using NodeBehavior =
    std::variant<Honest, Dropper, GenerationAttacker, SybilAttacker, OutsourcingAttacker, DropThenReseal>;

std::string behavior_label(const NodeBehavior& behavior);
std::uint32_t identity_count(const NodeBehavior& behavior);
/// Throws ConfigError on out-of-range parameters.
void validate(const NodeBehavior& behavior);

enum class Protocol { Pos, PoRep, PoSt };
std::string_view to_string(Protocol p);
Protocol protocol_from_string(std::string_view s);

struct AuditRecord {
    std::uint64_t epoch = 0;
    std::string node_id;
    std::uint32_t identity = 0;
    std::string file_id;
    Protocol protocol = Protocol::Pos;
    bool accepted = false;
    SimTime elapsed = 0;
    std::optional<std::string> reject_reason;
    std::size_t proof_bytes = 0;
    SimTime issued_at = 0;
    SimTime completed_at = 0;
};

struct AuditParams {
    std::size_t k_prime = kDefaultKPrime;
    SimTime t_max = 0;  // 0: AuditPolicy::defaults
    std::uint64_t post_length = kDefaultPostLength;
    std::uint64_t delay_iters = kDefaultDelayIters;
    Seed salt;
};

/// Replicas keyed by (file, identity tag). Sealing dominates setup cost, so
/// independent worlds of one experiment share a cache.
class SealCache {
public:
    std::shared_ptr<const Replica> get(const StoredFile& file, const std::string& tag, const AuditParams& params);

private:
    std::mutex mutex_;
    std::map<std::tuple<std::string, std::string, std::uint64_t, Seed>, std::shared_ptr<const Replica>> replicas_;
};

std::string identity_tag(const std::string& node_id, std::uint32_t identity);

/// Leaf i goes to node i mod node_count. With n_total <= node_count every
/// node holds at most one shard of each stripe. Throws ConfigError for 0 nodes.
std::vector<std::size_t> round_robin_placement(std::uint64_t leaf_count, std::size_t node_count);

/// Single-lane discrete-event simulation. The auditor issues challenges,
/// nodes answer per their behavior on per-(node, file) lanes, responses are
/// verified on arrival. Deterministic given the rng seed.
class SimWorld {
public:
    SimWorld(Seed rng_seed, CostModel costs = {}, std::shared_ptr<SealCache> cache = nullptr);

    void add_file(std::shared_ptr<const StoredFile> file);
    void add_node(std::string node_id, NodeBehavior behavior);
    /// Throws ConfigError for unknown nodes or files.
    void assign(const std::string& node_id, const std::string& file_id);

    std::vector<AuditRecord> run_audit_epoch(std::uint64_t epoch, Protocol protocol, const AuditParams& params);

    SimTime now() const { return now_; }
    const Seed& rng_seed() const { return rng_seed_; }
    const CostModel& costs() const { return costs_; }
    const std::vector<AuditRecord>& audit_log() const { return audit_log_; }

    /// Block presence of a dropper in this world (true everywhere for others).
    std::vector<bool> presence_mask(const NodeBehavior& behavior, const StoredFile& file) const;

private:
    struct Node {
        NodeBehavior behavior;
    };
    struct Event {
        SimTime time;
        std::uint64_t seq;
        std::function<void()> action;
        bool operator>(const Event& o) const { return time != o.time ? time > o.time : seq > o.seq; }
    };

    void schedule(SimTime at, std::function<void()> action);
    void run_until_idle();
    const Node& node(const std::string& id) const;
    const StoredFile& file(const std::string& id) const;

    std::unique_ptr<ReplicaProver> make_prover(const std::string& node_id, std::uint32_t identity,
                                               const StoredFile& file, const AuditParams& params);
    AuditRecord audit_pos(const std::string& node_id, std::uint32_t identity, const StoredFile& file,
                          std::uint64_t epoch, const AuditParams& params, SimTime start);
    AuditRecord audit_replica(const std::string& node_id, std::uint32_t identity, const StoredFile& file,
                              std::uint64_t epoch, Protocol protocol, const AuditParams& params, SimTime start);

    Seed rng_seed_;
    CostModel costs_;
    std::shared_ptr<SealCache> cache_;
    std::map<std::string, std::shared_ptr<const StoredFile>> files_;
    std::map<std::string, Node> nodes_;
    std::vector<std::pair<std::string, std::string>> assignments_;
    std::map<std::pair<std::string, std::string>, SimTime> lane_busy_;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
    std::uint64_t next_seq_ = 0;
    SimTime now_ = 0;
    std::vector<AuditRecord> audit_log_;
};

}  // namespace porstore::sim
