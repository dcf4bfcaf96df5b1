#include "porstore/erasure.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "porstore/error.hpp"

namespace porstore {

namespace {

constexpr PrimeField kField{kErasureModulus};

std::size_t symbol_count(std::size_t block_size) { return (block_size * 8 + kDataSymbolBits - 1) / kDataSymbolBits; }

std::vector<std::uint64_t> shard_symbols(const Shard& shard, const CodeParams& params, std::size_t block_size) {
    if (shard.data.size() != shard_size(params, shard.index, block_size))
        throw Error(ErrorCode::RaggedInput, "shard " + std::to_string(shard.index) + " has the wrong length");
    if (shard.index < params.k_data) return pack_symbols(shard.data, kDataSymbolBits);
    auto symbols = pack_symbols(shard.data, kParitySymbolBits);
    symbols.resize(symbol_count(block_size));
    for (auto s : symbols)
        if (s >= kErasureModulus) throw Error(ErrorCode::InvalidParams, "parity symbol outside the field");
    return symbols;
}

}  // namespace

void CodeParams::validate() const {
    if (k_data < 1 || k_data > n_total || n_total > kErasureModulus - 1)
        throw Error(ErrorCode::InvalidParams, "need 1 <= k_data <= n_total <= 65536");
}

std::size_t parity_shard_size(std::size_t block_size) {
    return (symbol_count(block_size) * kParitySymbolBits + 7) / 8;
}

std::size_t shard_size(const CodeParams& params, std::uint32_t index, std::size_t block_size) {
    return index < params.k_data ? block_size : parity_shard_size(block_size);
}

EncodedBlocks encode(std::span<const Bytes> data_blocks, const CodeParams& params) {
    params.validate();
    if (data_blocks.size() != params.k_data)
        throw Error(ErrorCode::InvalidParams, "expected k_data data blocks");
    const auto block_size = data_blocks.front().size();
    for (const auto& b : data_blocks)
        if (b.size() != block_size) throw Error(ErrorCode::RaggedInput, "data blocks differ in length");

    EncodedBlocks out{params, block_size, {}};
    out.shards.reserve(params.n_total);
    std::vector<std::vector<std::uint64_t>> columns;
    columns.reserve(params.k_data);
    for (std::uint32_t j = 0; j < params.k_data; ++j) {
        out.shards.push_back({j, data_blocks[j]});
        columns.push_back(pack_symbols(data_blocks[j], kDataSymbolBits));
    }

    std::vector<PrimeField::Element> xs(params.k_data);
    for (std::uint32_t j = 0; j < params.k_data; ++j) xs[j] = j + 1;
    const auto symbols = symbol_count(block_size);
    std::vector<std::uint64_t> parity(symbols);
    for (std::uint32_t i = params.k_data; i < params.n_total; ++i) {
        auto weights = lagrange_weights(kField, xs, i + 1);
        std::fill(parity.begin(), parity.end(), 0);
        for (std::uint32_t j = 0; j < params.k_data; ++j)
            for (std::size_t s = 0; s < symbols; ++s) parity[s] = kField.add(parity[s], kField.mul(weights[j], columns[j][s]));
        out.shards.push_back({i, unpack_symbols(parity, kParitySymbolBits, parity_shard_size(block_size))});
    }
    return out;
}

std::vector<Bytes> decode(std::span<const Shard> shards, const CodeParams& params, std::size_t block_size) {
    params.validate();
    std::set<std::uint32_t> seen;
    for (const auto& s : shards) {
        if (s.index >= params.n_total) throw Error(ErrorCode::InvalidParams, "shard index out of range");
        if (!seen.insert(s.index).second) throw Error(ErrorCode::DuplicateShard, "shard " + std::to_string(s.index));
    }
    if (shards.size() < params.k_data)
        throw Error(ErrorCode::InsufficientShards,
                    std::to_string(shards.size()) + " shards, need " + std::to_string(params.k_data));

    std::vector<const Bytes*> present(params.k_data, nullptr);
    for (const auto& s : shards)
        if (s.index < params.k_data) present[s.index] = &s.data;

    // Prefer systematic shards, fill up with parity.
    std::vector<const Shard*> basis;
    for (const auto& s : shards)
        if (s.index < params.k_data) basis.push_back(&s);
    for (const auto& s : shards)
        if (basis.size() < params.k_data && s.index >= params.k_data) basis.push_back(&s);

    std::vector<Bytes> out(params.k_data);
    if (std::all_of(present.begin(), present.end(), [](auto* p) { return p != nullptr; })) {
        for (std::uint32_t j = 0; j < params.k_data; ++j) {
            if (present[j]->size() != block_size) throw Error(ErrorCode::RaggedInput, "data shard has the wrong length");
            out[j] = *present[j];
        }
        return out;
    }

    std::vector<PrimeField::Element> xs;
    std::vector<std::vector<std::uint64_t>> columns;
    for (const auto* s : basis) {
        xs.push_back(s->index + 1);
        columns.push_back(shard_symbols(*s, params, block_size));
    }
    const auto symbols = symbol_count(block_size);
    std::vector<std::uint64_t> recovered(symbols);
    for (std::uint32_t j = 0; j < params.k_data; ++j) {
        if (present[j]) {
            if (present[j]->size() != block_size) throw Error(ErrorCode::RaggedInput, "data shard has the wrong length");
            out[j] = *present[j];
            continue;
        }
        auto weights = lagrange_weights(kField, xs, j + 1);
        std::fill(recovered.begin(), recovered.end(), 0);
        for (std::size_t b = 0; b < basis.size(); ++b)
            for (std::size_t s = 0; s < symbols; ++s)
                recovered[s] = kField.add(recovered[s], kField.mul(weights[b], columns[b][s]));
        out[j] = unpack_symbols(recovered, kDataSymbolBits, block_size);
    }
    return out;
}

}  // namespace porstore
