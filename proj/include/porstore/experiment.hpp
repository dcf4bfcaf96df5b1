#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "porstore/cost.hpp"
#include "porstore/erasure.hpp"
#include "porstore/hash.hpp"
#include "porstore/sim.hpp"

namespace porstore::sim {

struct ExperimentConfig {
    Protocol protocol = Protocol::Pos;
    std::uint64_t k = 1024;  // data blocks before coding
    std::vector<std::size_t> k_primes{kDefaultKPrime};
    std::size_t block_size = kDefaultBlockSize;
    std::optional<CodeParams> coding;
    std::uint64_t delay_iters = kDefaultDelayIters;
    std::optional<SimTime> t_max;  // default: 10 * k' * block_read_cost
    std::uint64_t post_length = kDefaultPostLength;
    std::vector<NodeBehavior> behaviors;
    std::uint64_t trials = 1;
    Seed rng_seed;
    CostModel costs;
    unsigned threads = 1;
};

/// Throws ConfigError on invalid values, ParseError on malformed JSON.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);

struct DetectionRow {
    std::size_t k_prime = 0;
    SimTime t_max = 0;
    std::size_t behavior_index = 0;
    std::string behavior;
    std::uint32_t identity = 0;
    std::uint64_t audits = 0;
    std::uint64_t accepted = 0;
    std::uint64_t elapsed_sum = 0;
    std::uint64_t proof_bytes_sum = 0;
    std::map<std::string, std::uint64_t> reject_reasons;
    std::optional<double> expected_accept_rate;

    double accept_rate() const { return audits ? static_cast<double>(accepted) / static_cast<double>(audits) : 0.0; }
    double detection_rate() const { return audits ? 1.0 - accept_rate() : 0.0; }
};

struct DetectionReport {
    ExperimentConfig config;
    std::uint64_t leaves = 0;
    std::vector<DetectionRow> rows;

    const DetectionRow& row(std::size_t behavior_index, std::uint32_t identity = 0, std::size_t k_prime = 0) const;
};

/// Trial t runs in its own world seeded hash(rng_seed || t_le64) and audits
/// epoch t. The file content and salt derive from rng_seed, so replicas are
/// sealed once per experiment. Results depend only on (config, rng_seed),
/// not on the thread count: workers aggregate counts, merged in trial order.
DetectionReport run_experiment(const ExperimentConfig& config);

nlohmann::json report_to_json(const DetectionReport& report);
std::string report_to_csv(const DetectionReport& report);

/// Closed-form accept probability of a dropper, if one is known.
std::optional<double> expected_accept_rate(const NodeBehavior& behavior, std::uint64_t leaves, std::size_t k_prime);

}  // namespace porstore::sim
