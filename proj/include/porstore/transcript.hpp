#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "porstore/cost.hpp"
#include "porstore/manifest.hpp"
#include "porstore/merkle.hpp"
#include "porstore/porep.hpp"
#include "porstore/pos.hpp"
#include "porstore/post.hpp"
#include "porstore/shamir.hpp"

// JSON forms of every on-disk artifact. Digests and seeds are lowercase hex,
// block data base64, field elements decimal strings. Parsers throw
// Error(ParseError) on missing or mistyped fields.
namespace porstore::json_io {

using nlohmann::json;

json tree_to_json(const MerkleTree& tree);

json manifest_to_json(const FileManifest& m);
FileManifest manifest_from_json(const json& j);

json challenge_to_json(const std::string& file_id, const SamplingChallenge& c);
SamplingChallenge challenge_from_json(const json& j);

json response_to_json(const std::string& file_id, const SamplingResponse& r);
SamplingResponse response_from_json(const json& j);

json porep_proof_to_json(const std::string& file_id, const PoRepProof& p);
PoRepProof porep_proof_from_json(const json& j);

json post_to_json(const std::string& file_id, const PoStProof& p);
PoStProof post_from_json(const json& j);

struct ReplicaManifest {
    std::string file_id;
    SealParams params;
    Digest replica_root;
};
json replica_manifest_to_json(const ReplicaManifest& r);
ReplicaManifest replica_manifest_from_json(const json& j);

json share_to_json(const ShareParams& params, const Share& share, std::uint64_t original_length);
struct ShareFile {
    ShareParams params;
    Share share;
    std::uint64_t original_length = 0;
};
ShareFile share_from_json(const json& j);

json cost_model_to_json(const CostModel& c);
/// Missing keys keep their current value in `base`.
CostModel cost_model_from_json(const json& j, CostModel base = {});

/// Parses JSON text, mapping syntax errors to Error(ParseError).
json parse(const std::string& text);

}  // namespace porstore::json_io
