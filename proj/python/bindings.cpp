#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "porstore/erasure.hpp"
#include "porstore/error.hpp"
#include "porstore/experiment.hpp"
#include "porstore/manifest.hpp"
#include "porstore/merkle.hpp"
#include "porstore/pos.hpp"
#include "porstore/post.hpp"
#include "porstore/shamir.hpp"
#include "porstore/transcript.hpp"

namespace py = pybind11;
using namespace porstore;

namespace {

Bytes to_vec(const py::bytes& b) {
    std::string_view sv = b;
    return Bytes(sv.begin(), sv.end());
}

py::bytes to_py(ByteView v) { return py::bytes(reinterpret_cast<const char*>(v.data()), v.size()); }

Digest to_digest(const py::bytes& b) { return Digest::from_bytes(to_vec(b)); }

std::vector<Block> to_blocks(const std::vector<py::bytes>& data) {
    std::vector<Block> out;
    for (std::size_t i = 0; i < data.size(); ++i) out.push_back({i, to_vec(data[i])});
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Storage proofs: Merkle audits, erasure coding, sealing, spacetime chains, secret sharing";

    static py::exception<Error> error(m, "PorstoreError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = error;
            py::object instance = exc(e.what());
            instance.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(error.ptr(), instance.ptr());
        }
    });

    m.def("hash_bytes", [](const py::bytes& data) { return to_py(hash_bytes(to_vec(data)).view()); });
    m.def("leaf_digest", [](std::uint64_t index, const py::bytes& data) {
        return to_py(leaf_digest(index, to_vec(data)).view());
    });

    py::enum_<Side>(m, "Side").value("LEFT", Side::Left).value("RIGHT", Side::Right);

    py::class_<MerklePath>(m, "MerklePath")
        .def_readonly("leaf_index", &MerklePath::leaf_index)
        .def_property_readonly("siblings", [](const MerklePath& p) {
            py::list out;
            for (const auto& s : p.siblings) out.append(py::make_tuple(to_py(s.digest.view()), s.side));
            return out;
        });

    py::class_<MerkleTree>(m, "MerkleTree")
        .def(py::init([](const std::vector<py::bytes>& blocks) { return MerkleTree::build(to_blocks(blocks)); }),
             py::arg("blocks"))
        .def_property_readonly("root", [](const MerkleTree& t) { return to_py(t.root().view()); })
        .def_property_readonly("leaf_count", &MerkleTree::leaf_count)
        .def("prove", &MerkleTree::prove, py::arg("index"));

    m.def(
        "verify_leaf",
        [](const py::bytes& root, std::uint64_t index, const py::bytes& data, const MerklePath& path) {
            return verify_leaf(to_digest(root), index, to_vec(data), path);
        },
        py::arg("root"), py::arg("index"), py::arg("data"), py::arg("path"));

    m.def(
        "encode",
        [](const std::vector<py::bytes>& blocks, std::uint32_t k, std::uint32_t n) {
            std::vector<Bytes> data;
            for (const auto& b : blocks) data.push_back(to_vec(b));
            std::vector<py::bytes> out;
            for (const auto& s : encode(data, {k, n}).shards) out.push_back(to_py(s.data));
            return out;
        },
        py::arg("blocks"), py::arg("k"), py::arg("n"), "Systematic shards 0..n-1 of k equal-length blocks.");
    m.def(
        "decode",
        [](const std::map<std::uint32_t, py::bytes>& shards, std::uint32_t k, std::uint32_t n, std::size_t block_size) {
            std::vector<Shard> in;
            for (const auto& [i, d] : shards) in.push_back({i, to_vec(d)});
            std::vector<py::bytes> out;
            for (const auto& b : decode(in, {k, n}, block_size)) out.push_back(to_py(b));
            return out;
        },
        py::arg("shards"), py::arg("k"), py::arg("n"), py::arg("block_size"),
        "Recovers the k data blocks from a {shard_index: bytes} mapping.");

    m.def(
        "sampling_challenge",
        [](const py::bytes& seed, std::uint64_t epoch, std::uint64_t k, std::size_t k_prime) {
            return derive_sampling_challenge(to_digest(seed), epoch, k, k_prime).indices;
        },
        py::arg("seed"), py::arg("epoch"), py::arg("k"), py::arg("k_prime"));

    m.def(
        "audit",
        [](const std::vector<py::bytes>& blocks, const std::vector<bool>& present, const py::bytes& seed,
           std::uint64_t epoch, std::size_t k_prime) {
            auto owned = std::make_shared<std::vector<Block>>(to_blocks(blocks));
            auto tree = MerkleTree::build(*owned);
            const auto bs = owned->front().data.size();
            BlockStore store(owned, present);
            auto c = derive_sampling_challenge(to_digest(seed), epoch, owned->size(), k_prime);
            return verify_sampling(tree.root(), c, respond_sampling(store, tree, c, bs));
        },
        py::arg("blocks"), py::arg("present"), py::arg("seed"), py::arg("epoch"), py::arg("k_prime"),
        "One challenge/response round against a store holding only the `present` blocks.");

    m.def(
        "keystream",
        [](const py::bytes& tag, const py::bytes& salt, std::uint64_t index, std::uint64_t d, std::size_t size) {
            return to_py(keystream({d, to_vec(tag), to_digest(salt)}, index, size));
        },
        py::arg("node_tag"), py::arg("salt"), py::arg("index"), py::arg("delay_iters"), py::arg("size"));

    m.def(
        "seal",
        [](const std::vector<py::bytes>& blocks, const py::bytes& tag, const py::bytes& salt, std::uint64_t d) {
            auto replica = seal_file(to_blocks(blocks), {d, to_vec(tag), to_digest(salt)});
            std::vector<py::bytes> sealed;
            for (const auto& b : replica.sealed_blocks) sealed.push_back(to_py(b.data));
            return py::make_tuple(sealed, to_py(replica.replica_root().view()));
        },
        py::arg("blocks"), py::arg("node_tag"), py::arg("salt"), py::arg("delay_iters") = kDefaultDelayIters,
        "Returns (sealed_blocks, replica_root).");

    m.def(
        "post_roundtrip",
        [](const std::vector<py::bytes>& blocks, const py::bytes& tag, const py::bytes& salt, std::uint64_t d,
           std::uint64_t epoch, std::uint64_t length, std::size_t k_prime) {
            auto raw = to_blocks(blocks);
            auto replica = seal_file(raw, {d, to_vec(tag), to_digest(salt)});
            FileManifest manifest{"py", 0, raw.front().data.size(), raw.size(), MerkleTree::build(raw).root()};
            SimClock clock;
            auto post = generate_post(replica, essential_challenge(replica.replica_root(), epoch), length, clock,
                                      k_prime);
            auto verdict = verify_post(manifest, replica.replica_root(), post, AuditPolicy::defaults({}, k_prime));
            return py::make_tuple(verdict.accepted, std::string(to_string(verdict.reason)), post.total_cost,
                                  json_io::post_to_json("py", post).dump());
        },
        py::arg("blocks"), py::arg("node_tag"), py::arg("salt"), py::arg("delay_iters"), py::arg("epoch"),
        py::arg("length") = kDefaultPostLength, py::arg("k_prime") = kDefaultKPrime,
        "Seals, generates a chain and verifies it. Returns (accepted, reason, total_cost, transcript_json).");

    m.def(
        "split_secret",
        [](const py::bytes& data, std::uint32_t t, std::uint32_t n, const py::bytes& seed) {
            auto set = split_secret(to_vec(data), {t, n}, to_digest(seed));
            std::vector<std::pair<std::uint64_t, std::vector<std::uint64_t>>> out;
            for (const auto& s : set.shares) out.emplace_back(s.x, s.y_values);
            return out;
        },
        py::arg("data"), py::arg("t"), py::arg("n"), py::arg("seed"), "Shares as (x, y_values) pairs.");
    m.def(
        "reconstruct",
        [](const std::vector<std::pair<std::uint64_t, std::vector<std::uint64_t>>>& shares, std::uint32_t t,
           std::uint32_t n, std::uint64_t length) {
            std::vector<Share> in;
            for (const auto& [x, ys] : shares) in.push_back({x, ys});
            return to_py(reconstruct(in, {t, n}, length));
        },
        py::arg("shares"), py::arg("t"), py::arg("n"), py::arg("length"));
    m.def("reconstruction_coefficients", [](const std::vector<std::uint64_t>& xs, std::uint64_t modulus) {
        return reconstruction_coefficients(PrimeField(modulus), xs);
    }, py::arg("xs"), py::arg("modulus") = kMersenne61);

    m.def(
        "run_experiment",
        [](const std::string& config_json) {
            auto config = sim::config_from_json(json_io::parse(config_json));
            py::gil_scoped_release release;
            return sim::report_to_json(sim::run_experiment(config)).dump();
        },
        py::arg("config_json"), "Runs a detection experiment; JSON config in, JSON report out.");
}
