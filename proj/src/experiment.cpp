#include "porstore/experiment.hpp"

#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "porstore/error.hpp"
#include "porstore/transcript.hpp"

namespace porstore::sim {

using nlohmann::json;

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key) || j[key].is_null()) return fallback;
    try {
        return j[key].get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("field '") + key + "': " + e.what());
    }
}

NodeBehavior behavior_from_json(const json& j) {
    const auto type = get_or<std::string>(j, "type", "");
    if (type == "honest") return Honest{};
    if (type == "dropper") {
        Dropper d;
        d.drop_fraction = get_or<double>(j, "drop_fraction", 0.5);
        const auto mode = get_or<std::string>(j, "mode", "independent");
        if (mode == "independent") d.mode = DropMode::Independent;
        else if (mode == "fixed_subset") d.mode = DropMode::FixedSubset;
        else throw Error(ErrorCode::ConfigError, "unknown drop mode '" + mode + "'");
        d.seed = get_or<std::uint64_t>(j, "seed", 0);
        return d;
    }
    if (type == "generation") return GenerationAttacker{};
    if (type == "sybil") return SybilAttacker{get_or<std::uint32_t>(j, "identity_count", 2)};
    if (type == "outsourcing") return OutsourcingAttacker{get_or<std::string>(j, "holder", "holder")};
    if (type == "drop_then_reseal") return DropThenReseal{get_or<std::uint64_t>(j, "keep_proofs", 1)};
    throw Error(ErrorCode::ConfigError, "unknown behavior type '" + type + "'");
}

json behavior_to_json(const NodeBehavior& b) {
    if (std::holds_alternative<Honest>(b)) return {{"type", "honest"}};
    if (const auto* d = std::get_if<Dropper>(&b))
        return {{"type", "dropper"},
                {"drop_fraction", d->drop_fraction},
                {"mode", d->mode == DropMode::Independent ? "independent" : "fixed_subset"},
                {"seed", d->seed}};
    if (std::holds_alternative<GenerationAttacker>(b)) return {{"type", "generation"}};
    if (const auto* s = std::get_if<SybilAttacker>(&b)) return {{"type", "sybil"}, {"identity_count", s->identity_count}};
    if (const auto* o = std::get_if<OutsourcingAttacker>(&b)) return {{"type", "outsourcing"}, {"holder", o->holder_id}};
    const auto& d = std::get<DropThenReseal>(b);
    return {{"type", "drop_then_reseal"}, {"keep_proofs", d.keep_proofs}};
}

std::string node_name(std::size_t i) { return "node" + std::to_string(i); }

struct Tally {
    std::uint64_t audits = 0;
    std::uint64_t accepted = 0;
    std::uint64_t elapsed_sum = 0;
    std::uint64_t proof_bytes_sum = 0;
    std::map<std::string, std::uint64_t> reasons;

    void merge(const Tally& o) {
        audits += o.audits;
        accepted += o.accepted;
        elapsed_sum += o.elapsed_sum;
        proof_bytes_sum += o.proof_bytes_sum;
        for (const auto& [r, n] : o.reasons) reasons[r] += n;
    }
};

// (k' position, behavior index, identity)
using TallyKey = std::tuple<std::size_t, std::size_t, std::uint32_t>;
using Tallies = std::map<TallyKey, Tally>;

}  // namespace

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "experiment config must be an object");
    ExperimentConfig c;
    c.protocol = protocol_from_string(get_or<std::string>(j, "protocol", "pos"));
    c.k = get_or<std::uint64_t>(j, "k", c.k);
    if (j.contains("k_prime")) {
        if (j["k_prime"].is_array()) c.k_primes = get_or<std::vector<std::size_t>>(j, "k_prime", {});
        else c.k_primes = {get_or<std::size_t>(j, "k_prime", kDefaultKPrime)};
    }
    c.block_size = get_or<std::size_t>(j, "block_size", c.block_size);
    if (j.contains("coding") && !j["coding"].is_null())
        c.coding = CodeParams{get_or<std::uint32_t>(j["coding"], "k_data", 1), get_or<std::uint32_t>(j["coding"], "n_total", 2)};
    if (j.contains("seal") && j["seal"].is_object()) {
        c.delay_iters = get_or<std::uint64_t>(j["seal"], "d", c.delay_iters);
        if (j["seal"].contains("t_max") && !j["seal"]["t_max"].is_null())
            c.t_max = get_or<SimTime>(j["seal"], "t_max", 0);
    }
    c.post_length = get_or<std::uint64_t>(j, "post_length", c.post_length);
    if (j.contains("behaviors")) {
        if (!j["behaviors"].is_array()) throw Error(ErrorCode::ParseError, "behaviors must be an array");
        for (const auto& b : j["behaviors"]) c.behaviors.push_back(behavior_from_json(b));
    }
    c.trials = get_or<std::uint64_t>(j, "trials", c.trials);
    if (j.contains("rng_seed_hex")) c.rng_seed = Digest::from_hex(get_or<std::string>(j, "rng_seed_hex", ""));
    if (j.contains("cost_model")) c.costs = json_io::cost_model_from_json(j["cost_model"], c.costs);
    c.threads = get_or<unsigned>(j, "threads", 1);

    if (c.k == 0 || c.block_size == 0) throw Error(ErrorCode::ConfigError, "k and block_size must be positive");
    if (c.trials == 0) throw Error(ErrorCode::ConfigError, "trials must be >= 1");
    if (c.k_primes.empty()) throw Error(ErrorCode::ConfigError, "k_prime list is empty");
    if (c.behaviors.empty()) throw Error(ErrorCode::ConfigError, "no behaviors configured");
    if (c.delay_iters == 0) throw Error(ErrorCode::ConfigError, "seal.d must be >= 1");
    if (c.post_length == 0) throw Error(ErrorCode::ConfigError, "post_length must be >= 1");
    if (c.coding) c.coding->validate();
    for (const auto& b : c.behaviors) validate(b);
    c.costs.validate();
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json behaviors = json::array();
    for (const auto& b : c.behaviors) behaviors.push_back(behavior_to_json(b));
    json j = {{"protocol", std::string(to_string(c.protocol))},
              {"k", c.k},
              {"k_prime", c.k_primes},
              {"block_size", c.block_size},
              {"coding", nullptr},
              {"seal", {{"d", c.delay_iters}, {"t_max", nullptr}}},
              {"post_length", c.post_length},
              {"behaviors", behaviors},
              {"trials", c.trials},
              {"rng_seed_hex", c.rng_seed.hex()},
              {"cost_model", json_io::cost_model_to_json(c.costs)}};
    if (c.coding) j["coding"] = {{"k_data", c.coding->k_data}, {"n_total", c.coding->n_total}};
    if (c.t_max) j["seal"]["t_max"] = *c.t_max;
    return j;
}

std::optional<double> expected_accept_rate(const NodeBehavior& behavior, std::uint64_t leaves, std::size_t k_prime) {
    if (std::holds_alternative<Honest>(behavior)) return 1.0;
    const auto* d = std::get_if<Dropper>(&behavior);
    if (!d) return std::nullopt;
    if (d->mode == DropMode::Independent) return std::pow(1.0 - d->drop_fraction, static_cast<double>(k_prime));
    // Challenge avoids a fixed set of m dropped leaves: C(K - m, k') / C(K, k').
    const auto m = static_cast<double>(std::llround(d->drop_fraction * static_cast<double>(leaves)));
    const auto total = static_cast<double>(leaves);
    double p = 1.0;
    for (std::size_t i = 0; i < k_prime; ++i) p *= std::max(0.0, (total - m - static_cast<double>(i)) / (total - static_cast<double>(i)));
    return p;
}

const DetectionRow& DetectionReport::row(std::size_t behavior_index, std::uint32_t identity, std::size_t k_prime) const {
    for (const auto& r : rows)
        if (r.behavior_index == behavior_index && r.identity == identity && (k_prime == 0 || r.k_prime == k_prime))
            return r;
    throw Error(ErrorCode::ConfigError, "no such report row");
}

DetectionReport run_experiment(const ExperimentConfig& config) {
    if (config.trials == 0) throw Error(ErrorCode::ConfigError, "trials must be >= 1");
    config.costs.validate();

    auto data = PrfStream(derive_seed(config.rng_seed, "file-data")).next_bytes(config.k * config.block_size);
    auto file = std::make_shared<const StoredFile>(prepare_file("file0", data, config.block_size, config.coding));
    const auto leaves = file->manifest.k;
    for (auto kp : config.k_primes)
        if (kp == 0 || kp > leaves) throw Error(ErrorCode::ConfigError, "k_prime must lie in [1, leaves]");

    auto cache = std::make_shared<SealCache>();
    std::set<std::string> holders;
    for (const auto& b : config.behaviors)
        if (const auto* o = std::get_if<OutsourcingAttacker>(&b)) holders.insert(o->holder_id);

    const auto salt = derive_seed(config.rng_seed, "salt");
    auto params_for = [&](std::size_t k_prime) {
        AuditParams p;
        p.k_prime = k_prime;
        p.t_max = config.t_max.value_or(AuditPolicy::defaults(config.costs, k_prime).t_max);
        p.post_length = config.post_length;
        p.delay_iters = config.delay_iters;
        p.salt = salt;
        return p;
    };

    auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
        Tallies local;
        for (std::uint64_t t = begin; t < end; ++t) {
            SimWorld world(derive_seed(config.rng_seed, t), config.costs, cache);
            world.add_file(file);
            for (const auto& h : holders) world.add_node(h, Honest{});
            for (std::size_t i = 0; i < config.behaviors.size(); ++i) {
                world.add_node(node_name(i), config.behaviors[i]);
                world.assign(node_name(i), file->manifest.file_id);
            }
            for (std::size_t kp = 0; kp < config.k_primes.size(); ++kp) {
                for (const auto& rec : world.run_audit_epoch(t, config.protocol, params_for(config.k_primes[kp]))) {
                    const auto behavior_index = std::stoul(rec.node_id.substr(4));
                    auto& tally = local[{kp, behavior_index, rec.identity}];
                    ++tally.audits;
                    tally.accepted += rec.accepted ? 1 : 0;
                    tally.elapsed_sum += rec.elapsed;
                    tally.proof_bytes_sum += rec.proof_bytes;
                    if (rec.reject_reason) ++tally.reasons[*rec.reject_reason];
                }
            }
        }
        return local;
    };

    // Seal every registered identity up front so workers only read the cache.
    if (config.protocol != Protocol::Pos) {
        for (std::size_t i = 0; i < config.behaviors.size(); ++i)
            for (std::uint32_t id = 0; id < identity_count(config.behaviors[i]); ++id)
                cache->get(*file, identity_tag(node_name(i), id), params_for(config.k_primes.front()));
    }

    const auto workers = std::max<std::uint64_t>(1, std::min<std::uint64_t>(config.threads, config.trials));
    std::vector<Tallies> parts(workers);
    if (workers == 1) {
        parts[0] = run_range(0, config.trials);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        for (std::uint64_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    parts[w] = run_range(config.trials * w / workers, config.trials * (w + 1) / workers);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    Tallies total;
    for (const auto& part : parts)
        for (const auto& [key, tally] : part) total[key].merge(tally);

    DetectionReport report{config, leaves, {}};
    for (const auto& [key, tally] : total) {
        const auto& [kp, bi, identity] = key;
        DetectionRow row;
        row.k_prime = config.k_primes[kp];
        row.t_max = params_for(row.k_prime).t_max;
        row.behavior_index = bi;
        row.behavior = behavior_label(config.behaviors[bi]);
        row.identity = identity;
        row.audits = tally.audits;
        row.accepted = tally.accepted;
        row.elapsed_sum = tally.elapsed_sum;
        row.proof_bytes_sum = tally.proof_bytes_sum;
        row.reject_reasons = tally.reasons;
        // A PoSt chain re-samples one fixed mask L times, so no simple closed form.
        if (config.protocol != Protocol::PoSt || std::holds_alternative<Honest>(config.behaviors[bi]))
            row.expected_accept_rate = expected_accept_rate(config.behaviors[bi], leaves, row.k_prime);
        report.rows.push_back(std::move(row));
    }
    return report;
}

json report_to_json(const DetectionReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        json row = {{"k_prime", r.k_prime},
                    {"t_max", r.t_max},
                    {"behavior_index", r.behavior_index},
                    {"behavior", r.behavior},
                    {"identity", r.identity},
                    {"audits", r.audits},
                    {"accepted", r.accepted},
                    {"rejected", r.audits - r.accepted},
                    {"accept_rate", r.accept_rate()},
                    {"detection_rate", r.detection_rate()},
                    {"expected_accept_rate", nullptr},
                    {"mean_elapsed", r.audits ? static_cast<double>(r.elapsed_sum) / static_cast<double>(r.audits) : 0.0},
                    {"mean_proof_bytes",
                     r.audits ? static_cast<double>(r.proof_bytes_sum) / static_cast<double>(r.audits) : 0.0},
                    {"reject_reasons", r.reject_reasons}};
        if (r.expected_accept_rate) row["expected_accept_rate"] = *r.expected_accept_rate;
        rows.push_back(std::move(row));
    }
    return {{"config", config_to_json(report.config)}, {"leaves", report.leaves}, {"rows", rows}};
}

std::string report_to_csv(const DetectionReport& report) {
    std::ostringstream os;
    os << "protocol,k,leaves,k_prime,t_max,behavior_index,behavior,identity,audits,accepted,rejected,"
          "accept_rate,detection_rate,expected_accept_rate,mean_elapsed,mean_proof_bytes\n";
    os << std::setprecision(10);
    for (const auto& r : report.rows) {
        os << to_string(report.config.protocol) << ',' << report.config.k << ',' << report.leaves << ',' << r.k_prime
           << ',' << r.t_max << ',' << r.behavior_index << ",\"" << r.behavior << "\"," << r.identity << ','
           << r.audits << ',' << r.accepted << ',' << (r.audits - r.accepted) << ',' << r.accept_rate() << ','
           << r.detection_rate() << ',';
        if (r.expected_accept_rate) os << *r.expected_accept_rate;
        os << ',' << (r.audits ? static_cast<double>(r.elapsed_sum) / static_cast<double>(r.audits) : 0.0) << ','
           << (r.audits ? static_cast<double>(r.proof_bytes_sum) / static_cast<double>(r.audits) : 0.0) << '\n';
    }
    return os.str();
}

}  // namespace porstore::sim
