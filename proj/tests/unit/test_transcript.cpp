#include <doctest.h>

#include "helpers.hpp"
#include "porstore/error.hpp"
#include "porstore/post.hpp"
#include "porstore/transcript.hpp"

using namespace porstore;
using namespace porstore::json_io;

TEST_CASE("manifest JSON round trips") {
    std::mt19937_64 rng(80);
    auto stored = prepare_file("f.bin", testutil::random_bytes(rng, 5000), 512, CodeParams{2, 3});
    auto m = stored.manifest;
    CHECK(manifest_from_json(manifest_to_json(m)) == m);
    m.seal_tag = "node-1";
    m.replica_root = hash_bytes(as_bytes("r"));
    CHECK(manifest_from_json(manifest_to_json(m)) == m);
    auto j = manifest_to_json(m);
    j.erase("merkle_root_hex");
    CHECK_THROWS_AS(manifest_from_json(j), Error);
    CHECK(tree_to_json(stored.tree)["leaf_count"] == stored.tree.leaf_count());
}

TEST_CASE("challenge, response, porep and post transcripts round trip") {
    std::mt19937_64 rng(81);
    auto stored = prepare_file("f", testutil::random_bytes(rng, 64 * 40), 64);
    SealParams params{3, testutil::str_bytes("n"), testutil::random_seed(rng)};
    auto replica = seal_file(stored.blocks, params);
    SimClock clock;
    auto post = generate_post(replica, Seed{}, 3, clock);
    const auto& proof = post.proofs[1];
    CHECK(challenge_from_json(challenge_to_json("f", proof.challenge)) == proof.challenge);
    CHECK(response_from_json(response_to_json("f", proof.response)) == proof.response);
    CHECK(porep_proof_from_json(porep_proof_to_json("f", proof)) == proof);
    auto text = post_to_json("f", post).dump();
    CHECK(post_from_json(parse(text)) == post);
    CHECK(verify_post(stored.manifest, replica.replica_root(), post_from_json(parse(text)),
                      AuditPolicy::defaults(CostModel{}))
              .accepted);

    ReplicaManifest rm{"f", params, replica.replica_root()};
    auto back = replica_manifest_from_json(replica_manifest_to_json(rm));
    CHECK(back.replica_root == rm.replica_root);
    CHECK(back.params.node_tag == params.node_tag);
    CHECK(back.params.salt == params.salt);
    CHECK(back.params.delay_iters == params.delay_iters);
}

TEST_CASE("share files and cost models round trip") {
    ShareParams params{2, 3};
    auto set = split_secret(testutil::str_bytes("hello shares"), params, Seed{});
    auto f = share_from_json(share_to_json(params, set.shares[1], set.original_length));
    CHECK(f.params == params);
    CHECK(f.share == set.shares[1]);
    CHECK(f.original_length == set.original_length);

    CostModel c{3, 4, 5, 60};
    CHECK(cost_model_from_json(cost_model_to_json(c)) == c);
    auto partial = cost_model_from_json(nlohmann::json{{"hash_cost", 7}});
    CHECK(partial.hash_cost == 7);
    CHECK(partial.block_read_cost == CostModel{}.block_read_cost);
}

TEST_CASE("malformed JSON is a ParseError") {
    try {
        parse("{not json");
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
    }
    CHECK_THROWS_AS(challenge_from_json(nlohmann::json{{"seed_hex", "zz"}}), Error);
    CHECK_THROWS_AS(response_from_json(nlohmann::json::array()), Error);
}
