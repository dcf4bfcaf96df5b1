#pragma once

#include <cstdint>

namespace porstore {

using SimTime = std::uint64_t;

/// Simulated prices, in abstract time units, of the primitive actions a
/// prover performs. Timing arguments are evaluated on these, not wall clock.
struct CostModel {
    SimTime hash_cost = 1;
    SimTime block_read_cost = 2;
    SimTime network_latency = 5;
    SimTime fetch_remote_cost = 50;

    bool operator==(const CostModel&) const = default;
    /// Throws ConfigError unless fetch_remote_cost > block_read_cost.
    void validate() const;

    /// Keystream derivation for one block: d chained hashes, which cannot be
    /// spread across workers because each step consumes the previous one.
    SimTime keystream_cost(std::uint64_t delay_iters) const { return delay_iters * hash_cost; }
    SimTime path_cost(std::size_t siblings) const { return siblings * hash_cost; }
};

/// Monotone simulated clock owned by one prover lane.
class SimClock {
public:
    explicit SimClock(SimTime start = 0) : now_(start) {}

    SimTime now() const { return now_; }
    void advance(SimTime dt) { now_ += dt; }
    /// Never moves backwards.
    void advance_to(SimTime t) {
        if (t > now_) now_ = t;
    }

private:
    SimTime now_;
};

}  // namespace porstore
