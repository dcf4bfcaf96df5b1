#include "porstore/shamir.hpp"

#include <bit>
#include <set>

#include "porstore/error.hpp"

namespace porstore {

void ShareParams::validate() const {
    if (modulus < 3) throw Error(ErrorCode::InvalidParams, "modulus too small");
    if (threshold < 1 || threshold > share_count || share_count >= modulus)
        throw Error(ErrorCode::InvalidParams, "need 1 <= t <= n < p");
}

unsigned ShareParams::chunk_bits() const { return static_cast<unsigned>(std::bit_width(modulus)) - 1; }

std::size_t chunk_count(const ShareParams& params, std::uint64_t original_length) {
    const auto bits = params.chunk_bits();
    return static_cast<std::size_t>((original_length * 8 + bits - 1) / bits);
}

std::vector<PrimeField::Element> share_chunk(const PrimeField& field, PrimeField::Element secret,
                                             std::span<const PrimeField::Element> coefficients,
                                             std::uint32_t share_count) {
    std::vector<PrimeField::Element> poly;
    poly.reserve(coefficients.size() + 1);
    poly.push_back(secret);
    poly.insert(poly.end(), coefficients.begin(), coefficients.end());
    std::vector<PrimeField::Element> ys(share_count);
    for (std::uint32_t j = 0; j < share_count; ++j) ys[j] = field.evaluate(poly, j + 1);
    return ys;
}

ShareSet split_secret(ByteView data, const ShareParams& params, const Seed& seed) {
    params.validate();
    const auto field = params.field();
    const auto chunks = pack_symbols(data, params.chunk_bits());
    const unsigned width = static_cast<unsigned>(std::bit_width(params.modulus));
    const std::uint64_t mask = width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;

    ShareSet set{params, data.size(), {}};
    set.shares.resize(params.share_count);
    for (std::uint32_t j = 0; j < params.share_count; ++j) {
        set.shares[j].x = j + 1;
        set.shares[j].y_values.reserve(chunks.size());
    }
    PrfStream prf(seed);
    std::vector<PrimeField::Element> coefficients(params.threshold - 1);
    for (auto chunk : chunks) {
        for (auto& c : coefficients) {
            do {
                c = prf.next_u64() & mask;
            } while (c >= params.modulus);
        }
        auto ys = share_chunk(field, chunk, coefficients, params.share_count);
        for (std::uint32_t j = 0; j < params.share_count; ++j) set.shares[j].y_values.push_back(ys[j]);
    }
    return set;
}

std::vector<PrimeField::Element> reconstruction_coefficients(const PrimeField& field,
                                                             std::span<const PrimeField::Element> xs) {
    std::set<PrimeField::Element> seen;
    for (auto x : xs) {
        if (x % field.modulus() == 0) throw Error(ErrorCode::InvalidParams, "share x must be nonzero");
        if (!seen.insert(x).second) throw Error(ErrorCode::DuplicateShare, "x = " + std::to_string(x));
    }
    return lagrange_weights(field, xs, 0);
}

Bytes reconstruct(std::span<const Share> shares, const ShareParams& params, std::uint64_t original_length) {
    params.validate();
    const auto field = params.field();
    std::vector<PrimeField::Element> xs;
    xs.reserve(shares.size());
    for (const auto& s : shares) xs.push_back(s.x);
    auto lambdas = reconstruction_coefficients(field, xs);
    if (shares.size() < params.threshold)
        throw Error(ErrorCode::InsufficientShares,
                    std::to_string(shares.size()) + " shares, need " + std::to_string(params.threshold));
    const auto chunks = chunk_count(params, original_length);
    for (const auto& s : shares)
        if (s.y_values.size() != chunks) throw Error(ErrorCode::InvalidParams, "share length does not match data length");

    std::vector<std::uint64_t> secret(chunks, 0);
    for (std::size_t c = 0; c < chunks; ++c)
        for (std::size_t j = 0; j < shares.size(); ++j)
            secret[c] = field.add(secret[c], field.mul(lambdas[j], shares[j].y_values[c] % field.modulus()));
    return unpack_symbols(secret, params.chunk_bits(), original_length);
}

}  // namespace porstore
