#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "porstore/bytes.hpp"
#include "porstore/field.hpp"
#include "porstore/hash.hpp"

namespace porstore {

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

struct ShareParams {
    std::uint32_t threshold = 2;
    std::uint32_t share_count = 3;
    std::uint64_t modulus = kMersenne61;

    bool operator==(const ShareParams&) const = default;
    /// Throws InvalidParams unless 1 <= t <= n < p.
    void validate() const;
    PrimeField field() const { return PrimeField(modulus); }
    /// Secret bytes are cut into chunks of bit_width(p) - 1 bits so every chunk is < p.
    unsigned chunk_bits() const;
};

struct Share {
    PrimeField::Element x = 0;
    std::vector<PrimeField::Element> y_values;  // one per data chunk

    bool operator==(const Share&) const = default;
};

struct ShareSet {
    ShareParams params;
    std::uint64_t original_length = 0;
    std::vector<Share> shares;
};

/// Evaluations at x = 1..n of secret + c_1 x + ... + c_{t-1} x^{t-1}.
std::vector<PrimeField::Element> share_chunk(const PrimeField& field, PrimeField::Element secret,
                                             std::span<const PrimeField::Element> coefficients,
                                             std::uint32_t share_count);

/// Coefficients come from PrfStream(seed), chunk-major, rejection-sampled below p.
ShareSet split_secret(ByteView data, const ShareParams& params, const Seed& seed);

/// Lagrange weights at 0: secret == sum_j lambda_j * y_j.
/// Throws DuplicateShare for repeated x, InvalidParams for x == 0.
std::vector<PrimeField::Element> reconstruction_coefficients(const PrimeField& field,
                                                             std::span<const PrimeField::Element> xs);

/// Throws InsufficientShares, DuplicateShare, InvalidParams.
Bytes reconstruct(std::span<const Share> shares, const ShareParams& params, std::uint64_t original_length);

std::size_t chunk_count(const ShareParams& params, std::uint64_t original_length);

}  // namespace porstore
