#include <doctest.h>

#include "helpers.hpp"
#include "porstore/error.hpp"
#include "porstore/manifest.hpp"
#include "porstore/post.hpp"
#include "vectors.hpp"

using namespace porstore;

namespace {

struct Setup {
    StoredFile stored;
    Replica replica;
    AuditPolicy policy;
};

Setup make_setup(std::uint64_t seed, std::size_t blocks = 64) {
    std::mt19937_64 rng(seed);
    auto stored = prepare_file("f", testutil::random_bytes(rng, blocks * 64), 64);
    SealParams p{4, testutil::str_bytes("node"), testutil::random_seed(rng)};
    auto replica = seal_file(stored.blocks, p);
    return {std::move(stored), std::move(replica), AuditPolicy::defaults(CostModel{})};
}

}  // namespace

TEST_CASE("seed rule and essential challenge") {
    auto c0 = Digest::from_hex(vectors::kTestSeed);
    CHECK(chain_seed(c0, 0, nullptr).hex() == vectors::kPostSeed0);
    CHECK(essential_challenge(c0, 3).hex() == vectors::kEssentialE3);
}

TEST_CASE("L=1 is a single proof seeded by hash(c0 || 0)") {
    auto s = make_setup(50);
    SimClock clock;
    auto c0 = essential_challenge(s.replica.replica_root(), 0);
    auto post = generate_post(s.replica, c0, 1, clock);
    REQUIRE(post.proofs.size() == 1);
    CHECK(post.proofs[0].challenge.seed == chain_seed(c0, 0, nullptr));
    CHECK(verify_post(s.stored.manifest, s.replica.replica_root(), post, s.policy).accepted);
    CHECK_THROWS_AS(generate_post(s.replica, c0, 0, clock), Error);
}

TEST_CASE("honest chains verify and cost L times a single proof") {
    auto s = make_setup(51);
    CostModel costs;
    SimClock one_clock;
    auto single = porep_respond(s.replica, derive_sampling_challenge(Seed{}, 0, s.stored.manifest.k, 20), one_clock, costs);
    for (std::uint64_t L : {3u, 12u}) {
        SimClock clock(77);
        auto c0 = essential_challenge(s.replica.replica_root(), L);
        auto post = generate_post(s.replica, c0, L, clock);
        CHECK(verify_post(s.stored.manifest, s.replica.replica_root(), post, s.policy).accepted);
        CHECK(post.total_cost >= L * single.elapsed());
        CHECK(post.total_cost == L * single.elapsed());
        CHECK(post.proofs.front().started_at == 77);
        // Re-running gives a byte-identical chain.
        SimClock again(77);
        CHECK(generate_post(s.replica, c0, L, again) == post);
    }
}

TEST_CASE("canonical encoding round trips and rejects malformed input") {
    auto s = make_setup(52);
    SimClock clock;
    auto post = generate_post(s.replica, Seed{}, 4, clock);
    for (const auto& p : post.proofs) {
        auto bytes = canonical_encode(p);
        CHECK(canonical_decode(bytes) == p);
        Bytes truncated(bytes.begin(), bytes.end() - 1);
        CHECK_THROWS_AS(canonical_decode(truncated), Error);
        auto extended = bytes;
        extended.push_back(0);
        CHECK_THROWS_AS(canonical_decode(extended), Error);
    }
}

TEST_CASE("a proof for a different seed breaks the chain link") {
    auto s = make_setup(53);
    SimClock clock;
    auto c0 = essential_challenge(s.replica.replica_root(), 1);
    auto post = generate_post(s.replica, c0, 3, clock);
    SimClock other_clock(post.proofs[1].started_at);
    auto other = generate_post(s.replica, essential_challenge(s.replica.replica_root(), 2), 2, other_clock);
    post.proofs[1] = other.proofs[1];
    auto v = verify_post(s.stored.manifest, s.replica.replica_root(), post, s.policy);
    CHECK_FALSE(v.accepted);
    CHECK(v.reason == RejectReason::ChainLink);
}

TEST_CASE("perturbing proof 0 changes seed 1") {
    auto s = make_setup(54);
    SimClock clock;
    auto post = generate_post(s.replica, Seed{}, 2, clock);
    auto p0 = post.proofs[0];
    auto base = chain_seed(Seed{}, 1, &p0);
    CHECK(base == post.proofs[1].challenge.seed);
    p0.finished_at += 1;
    CHECK(chain_seed(Seed{}, 1, &p0) != base);
    p0 = post.proofs[0];
    p0.response.items[0].block.data[3] ^= 1;
    CHECK(chain_seed(Seed{}, 1, &p0) != base);
}

TEST_CASE("mutating any byte of any proof rejects") {
    auto s = make_setup(55, 32);
    SimClock clock;
    auto c0 = essential_challenge(s.replica.replica_root(), 9);
    auto post = generate_post(s.replica, c0, 4, clock);
    REQUIRE(verify_post(s.stored.manifest, s.replica.replica_root(), post, s.policy).accepted);
    std::size_t mutations = 0;
    for (std::size_t i = 0; i < post.proofs.size(); ++i) {
        auto bytes = canonical_encode(post.proofs[i]);
        for (std::size_t pos = 0; pos < bytes.size(); pos += 7) {
            auto m = bytes;
            m[pos] ^= 0x5a;
            auto mutated = post;
            try {
                mutated.proofs[i] = canonical_decode(m);
            } catch (const Error&) {
                ++mutations;
                continue;  // undecodable transcript: rejected before verification
            }
            CHECK_FALSE(verify_post(s.stored.manifest, s.replica.replica_root(), mutated, s.policy).accepted);
            ++mutations;
        }
    }
    CHECK(mutations > 100);
}

TEST_CASE("structural mutations reject") {
    auto s = make_setup(56);
    SimClock clock;
    auto post = generate_post(s.replica, Seed{}, 3, clock);
    const auto& root = s.replica.replica_root();
    auto m = post;
    m.proofs.pop_back();
    CHECK_FALSE(verify_post(s.stored.manifest, root, m, s.policy));
    m = post;
    m.length = 2;
    CHECK_FALSE(verify_post(s.stored.manifest, root, m, s.policy));
    m = post;
    m.total_cost -= 1;
    CHECK_FALSE(verify_post(s.stored.manifest, root, m, s.policy));
    m = post;
    std::swap(m.proofs[0], m.proofs[1]);
    CHECK_FALSE(verify_post(s.stored.manifest, root, m, s.policy));
    m = post;
    m.initial_challenge.bytes[0] ^= 1;
    CHECK_FALSE(verify_post(s.stored.manifest, root, m, s.policy));
    auto strict = s.policy;
    strict.t_max = post.proofs[0].elapsed() - 1;
    CHECK(verify_post(s.stored.manifest, root, post, strict).reason == RejectReason::TooSlow);
    auto other_k = s.policy;
    other_k.k_prime = 10;
    CHECK(verify_post(s.stored.manifest, root, post, other_k).reason == RejectReason::BadChallenge);
}

TEST_CASE("proof size accounts every proof") {
    auto s = make_setup(57);
    SimClock clock;
    auto post = generate_post(s.replica, Seed{}, 5, clock);
    std::size_t sum = 48;
    for (const auto& p : post.proofs) sum += canonical_encode(p).size();
    CHECK(proof_size_bytes(post) == sum);
}
