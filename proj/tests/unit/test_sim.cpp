#include <doctest.h>

#include <bit>
#include <cmath>

#include "helpers.hpp"
#include "porstore/error.hpp"
#include "porstore/experiment.hpp"
#include "porstore/manifest.hpp"
#include "porstore/sim.hpp"

using namespace porstore;
using namespace porstore::sim;

namespace {

ExperimentConfig base_config(Protocol protocol, std::vector<NodeBehavior> behaviors, std::uint64_t trials) {
    ExperimentConfig c;
    c.protocol = protocol;
    c.k = 64;
    c.block_size = 64;
    c.k_primes = {20};
    c.behaviors = std::move(behaviors);
    c.trials = trials;
    c.rng_seed = derive_seed(Seed{}, "sim-test");
    return c;
}

}  // namespace

TEST_CASE("all-honest worlds accept under every protocol") {
    for (auto protocol : {Protocol::Pos, Protocol::PoRep, Protocol::PoSt}) {
        auto c = base_config(protocol, {Honest{}, Honest{}}, 20);
        c.k_primes = {1, 5, 20, 64};
        auto report = run_experiment(c);
        CHECK(report.rows.size() == 8);
        for (const auto& row : report.rows) {
            CHECK(row.audits == 20);
            CHECK(row.accept_rate() == 1.0);
            REQUIRE(row.expected_accept_rate.has_value());
            CHECK(*row.expected_accept_rate == 1.0);
        }
    }
}

TEST_CASE("attackers are rejected under their protocols with default costs") {
    auto porep = base_config(Protocol::PoRep,
                             {Honest{}, GenerationAttacker{}, SybilAttacker{2}, OutsourcingAttacker{"node0"}}, 30);
    auto report = run_experiment(porep);
    CHECK(report.row(0).accept_rate() == 1.0);
    CHECK(report.row(1).accept_rate() == 0.0);
    CHECK(report.row(2, 0).accept_rate() == 1.0);  // the one replica it really holds
    CHECK(report.row(2, 1).accept_rate() == 0.0);
    CHECK(report.row(3).accept_rate() == 0.0);
    CHECK(report.row(1).reject_reasons.at("too_slow") == 30);
    CHECK(report.row(3).reject_reasons.at("too_slow") == 30);

    auto post = base_config(Protocol::PoSt, {Honest{}, DropThenReseal{1}}, 10);
    auto post_report = run_experiment(post);
    CHECK(post_report.row(0).accept_rate() == 1.0);
    CHECK(post_report.row(1).accept_rate() == 0.0);

    auto pos = base_config(Protocol::Pos, {Dropper{0.5, DropMode::Independent, 1}}, 500);
    CHECK(run_experiment(pos).row(0).accept_rate() <= 0.001);
}

TEST_CASE("outsourcing cheaply enough is accepted") {
    // With a fetch cost under the honest budget the timing check cannot help.
    auto c = base_config(Protocol::PoRep, {Honest{}, OutsourcingAttacker{"node0"}}, 5);
    c.costs.fetch_remote_cost = 3;
    CHECK(run_experiment(c).row(1).accept_rate() == 1.0);
}

TEST_CASE("reports are identical across reruns and thread counts") {
    auto c = base_config(Protocol::Pos, {Honest{}, Dropper{0.25, DropMode::Independent, 3},
                                         Dropper{0.5, DropMode::FixedSubset, 4}}, 300);
    c.k_primes = {5, 10};
    auto a = report_to_json(run_experiment(c)).dump();
    auto b = report_to_json(run_experiment(c)).dump();
    c.threads = 4;
    auto d = report_to_json(run_experiment(c)).dump();
    CHECK(a == b);
    CHECK(a == d);
    CHECK(report_to_csv(run_experiment(c)) == report_to_csv(run_experiment(c)));
}

TEST_CASE("detection is monotone in k' and in drop fraction") {
    std::vector<NodeBehavior> droppers;
    for (double delta : {0.0, 0.1, 0.25, 0.5, 0.75}) droppers.push_back(Dropper{delta, DropMode::Independent, 9});
    auto c = base_config(Protocol::Pos, droppers, 400);
    c.k = 256;
    c.block_size = 16;
    c.k_primes = {1, 2, 5, 10, 20};
    auto report = run_experiment(c);
    for (std::size_t b = 0; b < droppers.size(); ++b)
        for (std::size_t i = 1; i < c.k_primes.size(); ++i)
            CHECK(report.row(b, 0, c.k_primes[i]).detection_rate() >= report.row(b, 0, c.k_primes[i - 1]).detection_rate());
    for (auto kp : c.k_primes)
        for (std::size_t b = 1; b < droppers.size(); ++b)
            CHECK(report.row(b, 0, kp).detection_rate() >= report.row(b - 1, 0, kp).detection_rate());
}

TEST_CASE("closed-form accept rates") {
    CHECK(*expected_accept_rate(Honest{}, 100, 10) == 1.0);
    CHECK(*expected_accept_rate(Dropper{0.5, DropMode::Independent, 0}, 1024, 10) == doctest::Approx(std::pow(0.5, 10)));
    // C(50,2)/C(100,2)
    CHECK(*expected_accept_rate(Dropper{0.5, DropMode::FixedSubset, 0}, 100, 2) == doctest::Approx(1225.0 / 4950.0));
    CHECK_FALSE(expected_accept_rate(GenerationAttacker{}, 100, 10).has_value());
}

TEST_CASE("fixed-subset masks drop exactly round(delta k) blocks") {
    std::mt19937_64 rng(70);
    auto file = prepare_file("f", testutil::random_bytes(rng, 1000), 10);
    SimWorld w(Seed{});
    for (double delta : {0.0, 0.1, 0.5, 1.0}) {
        auto mask = w.presence_mask(Dropper{delta, DropMode::FixedSubset, 5}, file);
        CHECK(static_cast<double>(std::count(mask.begin(), mask.end(), false)) == std::round(delta * 100));
    }
    auto honest = w.presence_mask(Honest{}, file);
    CHECK(std::count(honest.begin(), honest.end(), true) == 100);
}

TEST_CASE("world bookkeeping: clock monotonicity and lanes") {
    std::mt19937_64 rng(71);
    auto file = std::make_shared<const StoredFile>(prepare_file("f", testutil::random_bytes(rng, 64 * 64), 64));
    SimWorld world(derive_seed(Seed{}, 1));
    world.add_file(file);
    world.add_node("a", Honest{});
    world.add_node("s", SybilAttacker{3});
    world.assign("a", "f");
    world.assign("s", "f");
    CHECK_THROWS_AS(world.assign("nobody", "f"), Error);
    CHECK_THROWS_AS(world.assign("a", "nofile"), Error);
    world.add_node("o", OutsourcingAttacker{"ghost"});
    CHECK_THROWS_AS(world.assign("o", "f"), Error);
    CHECK_THROWS_AS(world.add_node("bad", Dropper{1.5}), Error);
    CHECK_THROWS_AS(world.add_node("bad", SybilAttacker{1}), Error);

    AuditParams params;
    params.delay_iters = 50;
    for (std::uint64_t e = 0; e < 3; ++e) {
        auto records = world.run_audit_epoch(e, Protocol::PoRep, params);
        CHECK(records.size() == 4);
    }
    const auto& log = world.audit_log();
    REQUIRE(log.size() == 12);
    for (std::size_t i = 1; i < log.size(); ++i) CHECK(log[i].completed_at >= log[i - 1].completed_at);
    for (const auto& r : log) {
        CHECK(r.issued_at <= r.completed_at);
        CHECK(r.proof_bytes > 0);
    }
    CHECK(world.now() >= log.back().completed_at);
}

TEST_CASE("config JSON round trips") {
    auto c = base_config(Protocol::PoSt, {Honest{}, Dropper{0.25, DropMode::FixedSubset, 2}, SybilAttacker{3},
                                          OutsourcingAttacker{"node0"}, GenerationAttacker{}, DropThenReseal{2}},
                         7);
    c.coding = CodeParams{2, 4};
    c.t_max = 123;
    c.k_primes = {3, 4};
    auto j = config_to_json(c);
    auto back = config_from_json(j);
    CHECK(config_to_json(back) == j);
    CHECK(back.behaviors == c.behaviors);
    CHECK(back.coding == c.coding);
    CHECK(back.t_max == c.t_max);

    auto bad = j;
    bad["protocol"] = "smoke-signals";
    CHECK_THROWS_AS(config_from_json(bad), Error);
    bad = j;
    bad["behaviors"] = nlohmann::json::array({{{"type", "wizard"}}});
    CHECK_THROWS_AS(config_from_json(bad), Error);
    bad = j;
    bad["trials"] = 0;
    CHECK_THROWS_AS(config_from_json(bad), Error);
}

TEST_CASE("round-robin placement over n nodes survives losing n - k of them") {
    std::mt19937_64 rng(72);
    auto data = testutil::random_bytes(rng, 3 * 4 * 128 + 5);
    auto stored = prepare_file("f", data, 128, CodeParams{4, 8});
    auto owner = round_robin_placement(stored.manifest.k, 8);
    CHECK_THROWS_AS(round_robin_placement(4, 0), Error);
    for (std::uint32_t lost = 0; lost < 256; ++lost) {
        if (std::popcount(lost) != 4) continue;
        std::vector<std::optional<Bytes>> leaves;
        for (const auto& b : stored.blocks) {
            if (lost & (1u << owner[b.index])) leaves.emplace_back();
            else leaves.emplace_back(b.data);
        }
        CHECK(reassemble_file(stored.manifest, leaves) == data);
    }
}
