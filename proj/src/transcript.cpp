#include "porstore/transcript.hpp"

#include "porstore/error.hpp"

namespace porstore::json_io {

namespace {

template <class T>
T field(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("field '") + key + "': " + e.what());
    }
}

const json& sub(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing '") + key + "'");
    return j.at(key);
}

Digest digest_field(const json& j, const char* key) { return Digest::from_hex(field<std::string>(j, key)); }

json path_to_json(const MerklePath& path) {
    json steps = json::array();
    for (const auto& s : path.siblings)
        steps.push_back({{"side", s.side == Side::Left ? "left" : "right"}, {"digest_hex", s.digest.hex()}});
    return steps;
}

MerklePath path_from_json(std::uint64_t leaf_index, const json& j) {
    if (!j.is_array()) throw Error(ErrorCode::ParseError, "path must be an array");
    MerklePath path{leaf_index, {}};
    for (const auto& s : j) {
        auto side = field<std::string>(s, "side");
        if (side != "left" && side != "right") throw Error(ErrorCode::ParseError, "side must be left or right");
        path.siblings.push_back({digest_field(s, "digest_hex"), side == "left" ? Side::Left : Side::Right});
    }
    return path;
}

}  // namespace

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

json tree_to_json(const MerkleTree& tree) {
    return {{"leaf_count", tree.leaf_count()}, {"root_hex", tree.root().hex()}};
}

json manifest_to_json(const FileManifest& m) {
    json j = {{"file_id", m.file_id},
              {"total_length", m.total_length},
              {"block_size", m.block_size},
              {"k", m.k},
              {"merkle_root_hex", m.merkle_root.hex()},
              {"coding", nullptr},
              {"seal_tag", nullptr},
              {"replica_root_hex", nullptr}};
    if (m.coding) j["coding"] = {{"k_data", m.coding->k_data}, {"n_total", m.coding->n_total}};
    if (m.seal_tag) j["seal_tag"] = *m.seal_tag;
    if (m.replica_root) j["replica_root_hex"] = m.replica_root->hex();
    return j;
}

FileManifest manifest_from_json(const json& j) {
    FileManifest m;
    m.file_id = field<std::string>(j, "file_id");
    m.total_length = field<std::uint64_t>(j, "total_length");
    m.block_size = field<std::uint64_t>(j, "block_size");
    m.k = field<std::uint64_t>(j, "k");
    m.merkle_root = digest_field(j, "merkle_root_hex");
    if (j.contains("coding") && !j["coding"].is_null())
        m.coding = CodeParams{field<std::uint32_t>(j["coding"], "k_data"), field<std::uint32_t>(j["coding"], "n_total")};
    if (j.contains("seal_tag") && !j["seal_tag"].is_null()) m.seal_tag = field<std::string>(j, "seal_tag");
    if (j.contains("replica_root_hex") && !j["replica_root_hex"].is_null())
        m.replica_root = digest_field(j, "replica_root_hex");
    if (m.block_size == 0 || m.k == 0) throw Error(ErrorCode::ParseError, "manifest has zero block_size or k");
    return m;
}

json challenge_to_json(const std::string& file_id, const SamplingChallenge& c) {
    return {{"file_id", file_id}, {"seed_hex", c.seed.hex()}, {"epoch", c.epoch},
            {"k", c.k},           {"k_prime", c.k_prime()},   {"indices", c.indices}};
}

SamplingChallenge challenge_from_json(const json& j) {
    SamplingChallenge c;
    c.seed = digest_field(j, "seed_hex");
    c.epoch = field<std::uint64_t>(j, "epoch");
    c.k = field<std::uint64_t>(j, "k");
    c.indices = field<std::vector<std::uint64_t>>(j, "indices");
    if (field<std::uint64_t>(j, "k_prime") != c.indices.size())
        throw Error(ErrorCode::ParseError, "k_prime does not match the index list");
    return c;
}

json response_to_json(const std::string& file_id, const SamplingResponse& r) {
    json items = json::array();
    for (const auto& item : r.items)
        items.push_back({{"index", item.block.index},
                         {"data_b64", base64_encode(item.block.data)},
                         {"path", path_to_json(item.path)}});
    return {{"file_id", file_id}, {"items", items}};
}

SamplingResponse response_from_json(const json& j) {
    SamplingResponse r;
    const auto& items = sub(j, "items");
    if (!items.is_array()) throw Error(ErrorCode::ParseError, "items must be an array");
    for (const auto& it : items) {
        ResponseItem item;
        item.block.index = field<std::uint64_t>(it, "index");
        item.block.data = base64_decode(field<std::string>(it, "data_b64"));
        item.path = path_from_json(item.block.index, sub(it, "path"));
        r.items.push_back(std::move(item));
    }
    return r;
}

json porep_proof_to_json(const std::string& file_id, const PoRepProof& p) {
    auto j = response_to_json(file_id, p.response);
    j["challenge"] = challenge_to_json(file_id, p.challenge);
    j["started_at"] = p.started_at;
    j["finished_at"] = p.finished_at;
    return j;
}

PoRepProof porep_proof_from_json(const json& j) {
    PoRepProof p;
    p.challenge = challenge_from_json(sub(j, "challenge"));
    p.response = response_from_json(j);
    p.started_at = field<SimTime>(j, "started_at");
    p.finished_at = field<SimTime>(j, "finished_at");
    return p;
}

json post_to_json(const std::string& file_id, const PoStProof& p) {
    json proofs = json::array();
    for (const auto& proof : p.proofs) proofs.push_back(porep_proof_to_json(file_id, proof));
    return {{"file_id", file_id},
            {"c0_hex", p.initial_challenge.hex()},
            {"length", p.length},
            {"proofs", proofs},
            {"total_cost", p.total_cost}};
}

PoStProof post_from_json(const json& j) {
    PoStProof p;
    p.initial_challenge = digest_field(j, "c0_hex");
    p.length = field<std::uint64_t>(j, "length");
    const auto& proofs = sub(j, "proofs");
    if (!proofs.is_array()) throw Error(ErrorCode::ParseError, "proofs must be an array");
    for (const auto& proof : proofs) p.proofs.push_back(porep_proof_from_json(proof));
    p.total_cost = field<SimTime>(j, "total_cost");
    return p;
}

json replica_manifest_to_json(const ReplicaManifest& r) {
    return {{"file_id", r.file_id},
            {"node_tag", std::string(r.params.node_tag.begin(), r.params.node_tag.end())},
            {"salt_hex", r.params.salt.hex()},
            {"delay_iters", r.params.delay_iters},
            {"replica_root_hex", r.replica_root.hex()}};
}

ReplicaManifest replica_manifest_from_json(const json& j) {
    ReplicaManifest r;
    r.file_id = field<std::string>(j, "file_id");
    auto tag = field<std::string>(j, "node_tag");
    r.params.node_tag.assign(tag.begin(), tag.end());
    r.params.salt = digest_field(j, "salt_hex");
    r.params.delay_iters = field<std::uint64_t>(j, "delay_iters");
    r.replica_root = digest_field(j, "replica_root_hex");
    return r;
}

json share_to_json(const ShareParams& params, const Share& share, std::uint64_t original_length) {
    json ys = json::array();
    for (auto y : share.y_values) ys.push_back(std::to_string(y));
    return {{"params", {{"t", params.threshold}, {"n", params.share_count}, {"p", std::to_string(params.modulus)}}},
            {"x", std::to_string(share.x)},
            {"y_values", ys},
            {"original_length", original_length}};
}

ShareFile share_from_json(const json& j) {
    auto decimal = [](const std::string& s) {
        std::size_t used = 0;
        std::uint64_t v = 0;
        try {
            v = std::stoull(s, &used, 10);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "invalid decimal '" + s + "'");
        }
        if (used != s.size() || s.empty() || s[0] == '-') throw Error(ErrorCode::ParseError, "invalid decimal '" + s + "'");
        return v;
    };
    ShareFile f;
    const auto& params = sub(j, "params");
    f.params.threshold = field<std::uint32_t>(params, "t");
    f.params.share_count = field<std::uint32_t>(params, "n");
    f.params.modulus = decimal(field<std::string>(params, "p"));
    f.share.x = decimal(field<std::string>(j, "x"));
    for (const auto& y : field<std::vector<std::string>>(j, "y_values")) f.share.y_values.push_back(decimal(y));
    f.original_length = field<std::uint64_t>(j, "original_length");
    return f;
}

json cost_model_to_json(const CostModel& c) {
    return {{"hash_cost", c.hash_cost},
            {"block_read_cost", c.block_read_cost},
            {"network_latency", c.network_latency},
            {"fetch_remote_cost", c.fetch_remote_cost}};
}

CostModel cost_model_from_json(const json& j, CostModel base) {
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "cost model must be an object");
    auto opt = [&](const char* key, SimTime& out) {
        if (j.contains(key)) out = field<SimTime>(j, key);
    };
    opt("hash_cost", base.hash_cost);
    opt("block_read_cost", base.block_read_cost);
    opt("network_latency", base.network_latency);
    opt("fetch_remote_cost", base.fetch_remote_cost);
    return base;
}

}  // namespace porstore::json_io
