// porstore: store, audit, seal, prove and simulate storage proofs.
//
// Exit codes: 0 success/accept, 1 protocol rejection, 2 usage or I/O error.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "porstore/error.hpp"
#include "porstore/experiment.hpp"
#include "porstore/manifest.hpp"
#include "porstore/porep.hpp"
#include "porstore/pos.hpp"
#include "porstore/post.hpp"
#include "porstore/shamir.hpp"
#include "porstore/transcript.hpp"

namespace fs = std::filesystem;
using namespace porstore;
using nlohmann::json;

namespace {

constexpr int kExitAccept = 0;
constexpr int kExitReject = 1;
constexpr int kExitUsage = 2;

Bytes read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
    return Bytes(std::istreambuf_iterator<char>(in), {});
}

std::optional<Bytes> read_optional(const fs::path& path) {
    if (!fs::exists(path)) return std::nullopt;
    return read_file(path);
}

void write_file(const fs::path& path, ByteView data) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

void write_json(const fs::path& path, const json& j) {
    auto text = j.dump(2) + "\n";
    write_file(path, as_bytes(text));
}

json read_json(const fs::path& path) {
    auto raw = read_file(path);
    return json_io::parse(std::string(raw.begin(), raw.end()));
}

Seed parse_seed_or_entropy(const std::string& hex) {
    if (!hex.empty()) return Digest::from_hex(hex);
    std::random_device rd;
    Seed s;
    for (auto& b : s.bytes) b = static_cast<std::uint8_t>(rd());
    return s;
}

CostModel cost_model_from_env(CostModel base = {}) {
    if (const char* path = std::getenv("PORSTORE_COST_MODEL"); path && *path)
        base = json_io::cost_model_from_json(read_json(path), base);
    base.validate();
    return base;
}

// An unset k' (0) means the default, capped at the leaf count.
std::size_t resolve_k_prime(std::size_t requested, std::uint64_t k) {
    if (requested) return requested;
    return static_cast<std::size_t>(std::min<std::uint64_t>(kDefaultKPrime, k));
}

fs::path shard_path(const fs::path& dir, const std::string& file_id, std::uint64_t i) {
    return dir / (file_id + ".shard" + std::to_string(i));
}
fs::path sealed_path(const fs::path& dir, const std::string& file_id, const std::string& tag, std::uint64_t i) {
    return dir / (file_id + "." + tag + ".sealed" + std::to_string(i));
}
fs::path manifest_path(const fs::path& dir, const std::string& file_id) { return dir / (file_id + ".manifest.json"); }
fs::path leaves_path(const fs::path& dir, const std::string& file_id) { return dir / (file_id + ".leaves.json"); }
fs::path replica_path(const fs::path& dir, const std::string& file_id, const std::string& tag) {
    return dir / (file_id + "." + tag + ".replica.json");
}

// Prints either the JSON object or aligned "key  value" lines.
void emit(const json& j, bool as_json) {
    if (as_json) {
        std::cout << j.dump() << "\n";
        return;
    }
    std::size_t width = 0;
    for (const auto& [key, _] : j.items()) width = std::max(width, key.size());
    for (const auto& [key, value] : j.items()) {
        std::cout << key << std::string(width - key.size() + 2, ' ');
        if (value.is_string()) std::cout << value.get<std::string>();
        else std::cout << value.dump();
        std::cout << "\n";
    }
}

std::vector<std::optional<Bytes>> load_leaves(const FileManifest& m, const fs::path& dir) {
    std::vector<std::optional<Bytes>> leaves(m.k);
    for (std::uint64_t i = 0; i < m.k; ++i) leaves[i] = read_optional(shard_path(dir, m.file_id, i));
    return leaves;
}

Replica load_replica(const json_io::ReplicaManifest& rm, std::uint64_t k, const fs::path& dir) {
    const std::string tag(rm.params.node_tag.begin(), rm.params.node_tag.end());
    std::vector<Block> sealed;
    for (std::uint64_t i = 0; i < k; ++i) sealed.push_back({i, read_file(sealed_path(dir, rm.file_id, tag, i))});
    auto tree = MerkleTree::build(sealed);
    if (tree.root() != rm.replica_root)
        throw Error(ErrorCode::IoError, "sealed blocks do not match the registered replica root");
    return Replica{rm.params, std::move(sealed), std::move(tree)};
}

// ---- commands ----------------------------------------------------------

struct StoreArgs {
    std::string in, out_dir, file_id;
    std::size_t block_size = kDefaultBlockSize;
    std::uint32_t coding_k = 0, coding_n = 0;
    bool json = false;
};

int cmd_store(const StoreArgs& a) {
    auto data = read_file(a.in);
    std::optional<CodeParams> coding;
    if (a.coding_k > 0) coding = CodeParams{a.coding_k, a.coding_n ? a.coding_n : 2 * a.coding_k};
    else if (a.coding_n > 0) throw Error(ErrorCode::InvalidParams, "--coding-n requires --coding-k");
    const auto id = a.file_id.empty() ? fs::path(a.in).filename().string() : a.file_id;
    auto stored = prepare_file(id, data, a.block_size, coding);
    const fs::path dir = a.out_dir;
    fs::create_directories(dir);
    for (const auto& b : stored.blocks) write_file(shard_path(dir, id, b.index), b.data);
    json leaves = json::array();
    for (const auto& d : stored.tree.levels().front()) leaves.push_back(d.hex());
    write_json(leaves_path(dir, id), {{"file_id", id}, {"leaves", leaves}});
    write_json(manifest_path(dir, id), json_io::manifest_to_json(stored.manifest));
    emit({{"file_id", id},
          {"manifest", manifest_path(dir, id).string()},
          {"k", stored.manifest.k},
          {"total_length", stored.manifest.total_length},
          {"merkle_root_hex", stored.manifest.merkle_root.hex()},
          {"tree", json_io::tree_to_json(stored.tree)}},
         a.json);
    return kExitAccept;
}

struct AuditArgs {
    std::string manifest, store, seed_hex, transcript_dir;
    std::size_t k_prime = 0;
    std::uint64_t epoch = 0, epochs = 1;
    bool json = false;
};

int cmd_audit(const AuditArgs& a) {
    const auto manifest = json_io::manifest_from_json(read_json(a.manifest));
    const fs::path dir = a.store;
    const auto seed = parse_seed_or_entropy(a.seed_hex);

    // Storage-node side: shards on disk plus the leaf digests kept at store time.
    auto leaf_json = read_json(leaves_path(dir, manifest.file_id));
    std::vector<Digest> leaf_digests;
    for (const auto& h : leaf_json.at("leaves")) leaf_digests.push_back(Digest::from_hex(h.get<std::string>()));
    if (leaf_digests.size() != manifest.k) throw Error(ErrorCode::IoError, "leaf list does not match manifest");
    auto tree = MerkleTree::from_leaf_digests(std::move(leaf_digests));
    auto blocks = std::make_shared<std::vector<Block>>();
    std::vector<bool> present(manifest.k);
    for (std::uint64_t i = 0; i < manifest.k; ++i) {
        auto data = read_optional(shard_path(dir, manifest.file_id, i));
        present[i] = data.has_value();
        blocks->push_back({i, data.value_or(Bytes{})});
    }
    BlockStore store(blocks, present);

    const auto k_prime = resolve_k_prime(a.k_prime, manifest.k);
    std::uint64_t accepted = 0;
    SamplingChallenge last_challenge;
    SamplingResponse last_response;
    for (std::uint64_t e = a.epoch; e < a.epoch + a.epochs; ++e) {
        last_challenge = derive_sampling_challenge(seed, e, manifest.k, k_prime);
        last_response = respond_sampling(store, tree, last_challenge, manifest.block_size);
        if (verify_sampling(manifest, last_challenge, last_response)) ++accepted;
    }
    const fs::path tdir = a.transcript_dir.empty() ? dir : fs::path(a.transcript_dir);
    write_json(tdir / (manifest.file_id + ".challenge.json"), json_io::challenge_to_json(manifest.file_id, last_challenge));
    write_json(tdir / (manifest.file_id + ".response.json"), json_io::response_to_json(manifest.file_id, last_response));
    const bool ok = accepted == a.epochs;
    emit({{"verdict", ok ? "accept" : "reject"},
          {"file_id", manifest.file_id},
          {"seed_hex", seed.hex()},
          {"epoch", a.epoch},
          {"epochs", a.epochs},
          {"accepted", accepted},
          {"k", manifest.k},
          {"k_prime", k_prime},
          {"missing_blocks", store.missing_count()}},
         a.json);
    return ok ? kExitAccept : kExitReject;
}

struct SealArgs {
    std::string manifest, store, node_tag, salt_hex, out_dir;
    std::uint64_t delay = kDefaultDelayIters;
    bool json = false;
};

int cmd_seal(const SealArgs& a) {
    auto manifest = json_io::manifest_from_json(read_json(a.manifest));
    const fs::path dir = a.store;
    const fs::path out = a.out_dir.empty() ? dir : fs::path(a.out_dir);
    if (a.node_tag.empty()) throw Error(ErrorCode::InvalidParams, "--node-tag must be non-empty");
    std::vector<Block> blocks;
    for (std::uint64_t i = 0; i < manifest.k; ++i) blocks.push_back({i, read_file(shard_path(dir, manifest.file_id, i))});
    SealParams params{a.delay, Bytes(a.node_tag.begin(), a.node_tag.end()), parse_seed_or_entropy(a.salt_hex)};
    auto replica = seal_file(blocks, params);
    for (const auto& b : replica.sealed_blocks) write_file(sealed_path(out, manifest.file_id, a.node_tag, b.index), b.data);
    json_io::ReplicaManifest rm{manifest.file_id, params, replica.replica_root()};
    write_json(replica_path(out, manifest.file_id, a.node_tag), json_io::replica_manifest_to_json(rm));
    manifest.seal_tag = a.node_tag;
    manifest.replica_root = replica.replica_root();
    write_json(a.manifest, json_io::manifest_to_json(manifest));
    const auto costs = cost_model_from_env();
    emit({{"file_id", manifest.file_id},
          {"node_tag", a.node_tag},
          {"salt_hex", params.salt.hex()},
          {"delay_iters", params.delay_iters},
          {"replica_root_hex", replica.replica_root().hex()},
          {"replica_manifest", replica_path(out, manifest.file_id, a.node_tag).string()},
          {"simulated_seal_cost", seal_cost(manifest.k, params, costs)}},
         a.json);
    return kExitAccept;
}

struct PostArgs {
    std::string manifest, replica, store, proof, out;
    std::uint64_t length = kDefaultPostLength, epoch = 0;
    std::optional<std::uint64_t> check_epoch;
    std::size_t k_prime = 0;
    SimTime t_max = 0;
    bool json = false;
};

int cmd_post_gen(const PostArgs& a) {
    const auto manifest = json_io::manifest_from_json(read_json(a.manifest));
    const auto rm = json_io::replica_manifest_from_json(read_json(a.replica));
    const fs::path dir = a.store.empty() ? fs::path(a.replica).parent_path() : fs::path(a.store);
    auto replica = load_replica(rm, manifest.k, dir);
    const auto costs = cost_model_from_env();
    SimClock clock;
    auto c0 = essential_challenge(replica.replica_root(), a.epoch);
    auto post = generate_post(replica, c0, a.length, clock, resolve_k_prime(a.k_prime, manifest.k), costs);
    write_json(a.out, json_io::post_to_json(manifest.file_id, post));
    emit({{"file_id", manifest.file_id},
          {"c0_hex", c0.hex()},
          {"epoch", a.epoch},
          {"length", post.length},
          {"total_cost", post.total_cost},
          {"proof_bytes", proof_size_bytes(post)},
          {"out", a.out}},
         a.json);
    return kExitAccept;
}

int cmd_post_verify(const PostArgs& a) {
    const auto manifest = json_io::manifest_from_json(read_json(a.manifest));
    const auto rm = json_io::replica_manifest_from_json(read_json(a.replica));
    const auto post = json_io::post_from_json(read_json(a.proof));
    const auto costs = cost_model_from_env();
    auto policy = AuditPolicy::defaults(costs, resolve_k_prime(a.k_prime, manifest.k));
    if (a.t_max) policy.t_max = a.t_max;
    Verdict verdict;
    if (a.check_epoch && post.initial_challenge != essential_challenge(rm.replica_root, *a.check_epoch))
        verdict = Verdict::reject(RejectReason::ChainLink);
    else
        verdict = verify_post(manifest, rm.replica_root, post, policy);
    emit({{"verdict", verdict.accepted ? "accept" : "reject"},
          {"reason", std::string(to_string(verdict.reason))},
          {"length", post.length},
          {"k_prime", policy.k_prime},
          {"t_max", policy.t_max}},
         a.json);
    return verdict.accepted ? kExitAccept : kExitReject;
}

int cmd_post_stats(const PostArgs& a) {
    const auto raw = read_file(a.proof);
    const auto post = json_io::post_from_json(json_io::parse(std::string(raw.begin(), raw.end())));
    SimTime min_elapsed = ~SimTime{0}, max_elapsed = 0;
    std::uint64_t blocks = 0, siblings = 0;
    for (const auto& p : post.proofs) {
        min_elapsed = std::min(min_elapsed, p.elapsed());
        max_elapsed = std::max(max_elapsed, p.elapsed());
        for (const auto& item : p.response.items) {
            ++blocks;
            siblings += item.path.siblings.size();
        }
    }
    if (post.proofs.empty()) min_elapsed = 0;
    emit({{"length", post.length},
          {"proof_bytes", proof_size_bytes(post)},
          {"transcript_bytes", raw.size()},
          {"total_cost", post.total_cost},
          {"min_proof_elapsed", min_elapsed},
          {"max_proof_elapsed", max_elapsed},
          {"blocks_opened", blocks},
          // leaf hashes + one per sibling + one chain seed per proof
          {"verifier_hash_calls", blocks + siblings + post.proofs.size()}},
         a.json);
    return kExitAccept;
}

struct ShareArgs {
    std::string in, out, out_dir, name, seed_hex;
    std::uint32_t t = 2, n = 3;
    std::vector<std::string> shares;
    bool json = false;
};

int cmd_share_split(const ShareArgs& a) {
    auto data = read_file(a.in);
    ShareParams params{a.t, a.n};
    const auto seed = parse_seed_or_entropy(a.seed_hex);
    auto set = split_secret(data, params, seed);
    const auto name = a.name.empty() ? fs::path(a.in).filename().string() : a.name;
    const fs::path dir = a.out_dir;
    json files = json::array();
    for (std::size_t j = 0; j < set.shares.size(); ++j) {
        auto path = dir / (name + ".share" + std::to_string(j) + ".json");
        write_json(path, json_io::share_to_json(params, set.shares[j], set.original_length));
        files.push_back(path.string());
    }
    emit({{"t", params.threshold}, {"n", params.share_count}, {"seed_hex", seed.hex()}, {"files", files}}, a.json);
    return kExitAccept;
}

int cmd_share_join(const ShareArgs& a) {
    std::vector<Share> shares;
    std::optional<json_io::ShareFile> first;
    for (const auto& path : a.shares) {
        auto f = json_io::share_from_json(read_json(path));
        if (first && (f.params != first->params || f.original_length != first->original_length))
            throw Error(ErrorCode::InvalidParams, "share files come from different splits");
        if (!first) first = f;
        shares.push_back(std::move(f.share));
    }
    if (!first) throw Error(ErrorCode::InsufficientShares, "no share files given");
    auto data = reconstruct(shares, first->params, first->original_length);
    write_file(a.out, data);
    emit({{"out", a.out}, {"shares_used", shares.size()}, {"bytes", data.size()}}, a.json);
    return kExitAccept;
}

struct ExperimentArgs {
    std::string config, out, csv;
    unsigned threads = 0;
    bool json = false;
};

int cmd_experiment(const ExperimentArgs& a) {
    auto cfg_json = read_json(a.config);
    auto config = sim::config_from_json(cfg_json);
    if (std::getenv("PORSTORE_COST_MODEL")) config.costs = cost_model_from_env(config.costs);
    if (a.threads) config.threads = a.threads;
    auto report = sim::run_experiment(config);
    auto report_json = sim::report_to_json(report);
    if (!a.out.empty()) write_json(a.out, report_json);
    if (!a.csv.empty()) {
        auto csv = sim::report_to_csv(report);
        write_file(a.csv, as_bytes(csv));
    }
    if (a.json) {
        std::cout << report_json.dump() << "\n";
        return kExitAccept;
    }
    std::printf("%-8s %-34s %-4s %10s %10s %12s %12s %12s\n", "k_prime", "behavior", "id", "audits", "accepted",
                "accept_rate", "expected", "mean_elapsed");
    for (const auto& r : report.rows) {
        std::printf("%-8zu %-34s %-4u %10llu %10llu %12.6g %12s %12.1f\n", r.k_prime, r.behavior.c_str(), r.identity,
                    static_cast<unsigned long long>(r.audits), static_cast<unsigned long long>(r.accepted),
                    r.accept_rate(),
                    r.expected_accept_rate ? std::to_string(*r.expected_accept_rate).c_str() : "-",
                    r.audits ? static_cast<double>(r.elapsed_sum) / static_cast<double>(r.audits) : 0.0);
    }
    return kExitAccept;
}

struct RetrieveArgs {
    std::string manifest, store, replica, out;
    bool json = false;
};

int cmd_retrieve(const RetrieveArgs& a) {
    const auto manifest = json_io::manifest_from_json(read_json(a.manifest));
    std::vector<std::optional<Bytes>> leaves;
    if (a.replica.empty()) {
        leaves = load_leaves(manifest, a.store);
    } else {
        const auto rm = json_io::replica_manifest_from_json(read_json(a.replica));
        auto replica = load_replica(rm, manifest.k, a.store.empty() ? fs::path(a.replica).parent_path() : fs::path(a.store));
        for (const auto& b : replica.sealed_blocks) leaves.push_back(unseal_block(b.data, replica.params, b.index));
    }
    auto data = reassemble_file(manifest, leaves);
    write_file(a.out, data);
    emit({{"out", a.out}, {"bytes", data.size()}}, a.json);
    return kExitAccept;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"porstore: proofs of storage, replication and spacetime"};
    app.require_subcommand(1);

    StoreArgs store;
    auto* s = app.add_subcommand("store", "split a file into blocks (optionally erasure-coded) and write a manifest");
    s->add_option("--in", store.in, "input file")->required();
    s->add_option("--out-dir", store.out_dir, "store directory")->required();
    s->add_option("--file-id", store.file_id, "file identifier (default: input file name)");
    s->add_option("--block-size", store.block_size, "block size in bytes")->check(CLI::PositiveNumber);
    s->add_option("--coding-k", store.coding_k, "data shards per stripe");
    s->add_option("--coding-n", store.coding_n, "total shards per stripe (default 2k)");
    s->add_flag("--json", store.json);

    AuditArgs audit;
    auto* au = app.add_subcommand("audit", "challenge the store for k' sampled blocks and verify");
    au->add_option("--manifest", audit.manifest)->required();
    au->add_option("--store", audit.store)->required();
    au->add_option("--k-prime", audit.k_prime)->check(CLI::PositiveNumber);
    au->add_option("--seed", audit.seed_hex, "32-byte hex seed (default: system entropy)");
    au->add_option("--epoch", audit.epoch);
    au->add_option("--epochs", audit.epochs, "audit this many consecutive epochs")->check(CLI::PositiveNumber);
    au->add_option("--transcript-dir", audit.transcript_dir);
    au->add_flag("--json", audit.json);

    SealArgs seal;
    auto* se = app.add_subcommand("seal", "seal a stored file into an identity-bound replica");
    se->add_option("--manifest", seal.manifest)->required();
    se->add_option("--store", seal.store)->required();
    se->add_option("--node-tag", seal.node_tag)->required();
    se->add_option("--delay", seal.delay, "sequential hash iterations per block")->check(CLI::PositiveNumber);
    se->add_option("--salt", seal.salt_hex);
    se->add_option("--out-dir", seal.out_dir);
    se->add_flag("--json", seal.json);

    PostArgs post;
    auto* po = app.add_subcommand("post", "proof-of-spacetime chains");
    po->require_subcommand(1);
    auto* pg = po->add_subcommand("gen", "generate a chain over a sealed replica");
    pg->add_option("--manifest", post.manifest)->required();
    pg->add_option("--replica", post.replica)->required();
    pg->add_option("--store", post.store);
    pg->add_option("--length", post.length)->check(CLI::PositiveNumber);
    pg->add_option("--epoch", post.epoch);
    pg->add_option("--k-prime", post.k_prime)->check(CLI::PositiveNumber);
    pg->add_option("--out", post.out)->required();
    pg->add_flag("--json", post.json);
    auto* pv = po->add_subcommand("verify", "verify a chain transcript");
    pv->add_option("--manifest", post.manifest)->required();
    pv->add_option("--replica", post.replica)->required();
    pv->add_option("--proof", post.proof)->required();
    pv->add_option("--k-prime", post.k_prime)->check(CLI::PositiveNumber);
    pv->add_option("--t-max", post.t_max);
    pv->add_option("--epoch", post.check_epoch, "also require c0 to be the challenge of this epoch");
    pv->add_flag("--json", post.json);
    auto* ps = po->add_subcommand("stats", "report chain size and cost");
    ps->add_option("--proof", post.proof)->required();
    ps->add_flag("--json", post.json);

    ShareArgs share;
    auto* sh = app.add_subcommand("share", "t-of-n secret sharing of a file");
    sh->require_subcommand(1);
    auto* ss = sh->add_subcommand("split", "split a file into share files");
    ss->add_option("--in", share.in)->required();
    ss->add_option("--t", share.t)->required();
    ss->add_option("--n", share.n)->required();
    ss->add_option("--seed", share.seed_hex);
    ss->add_option("--out-dir", share.out_dir)->required();
    ss->add_option("--name", share.name);
    ss->add_flag("--json", share.json);
    auto* sj = sh->add_subcommand("join", "reconstruct a file from share files");
    sj->add_option("--out", share.out)->required();
    sj->add_option("shares", share.shares, "share files")->required();
    sj->add_flag("--json", share.json);

    ExperimentArgs exp;
    auto* ex = app.add_subcommand("experiment", "run a detection experiment from a JSON config");
    ex->add_option("--config", exp.config)->required();
    ex->add_option("--out", exp.out, "write the JSON report here");
    ex->add_option("--csv", exp.csv, "write the CSV report here");
    ex->add_option("--threads", exp.threads);
    ex->add_flag("--json", exp.json);

    RetrieveArgs ret;
    auto* rt = app.add_subcommand("retrieve", "reassemble the original file from a store or a replica");
    rt->add_option("--manifest", ret.manifest)->required();
    rt->add_option("--store", ret.store);
    rt->add_option("--replica", ret.replica);
    rt->add_option("--out", ret.out)->required();
    rt->add_flag("--json", ret.json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        auto rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*s) return cmd_store(store);
        if (*au) return cmd_audit(audit);
        if (*se) return cmd_seal(seal);
        if (*pg) return cmd_post_gen(post);
        if (*pv) return cmd_post_verify(post);
        if (*ps) return cmd_post_stats(post);
        if (*ss) return cmd_share_split(share);
        if (*sj) return cmd_share_join(share);
        if (*ex) return cmd_experiment(exp);
        if (*rt) {
            if (ret.store.empty() && ret.replica.empty()) throw Error(ErrorCode::InvalidParams, "need --store or --replica");
            return cmd_retrieve(ret);
        }
    } catch (const Error& e) {
        std::cerr << "porstore: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "porstore: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
