#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "porstore/bytes.hpp"

namespace porstore {

/// A 32-byte SHA-256 output.
struct Digest {
    std::array<std::uint8_t, 32> bytes{};

    ByteView view() const { return bytes; }
    std::string hex() const { return to_hex(bytes); }
    static Digest from_hex(std::string_view hex);
    static Digest from_bytes(ByteView data);

    auto operator<=>(const Digest&) const = default;
};

/// 32-byte seeds are carried in the same fixed-width type as digests.
using Seed = Digest;

/// Incremental SHA-256 so concatenated inputs need not be materialised.
class Hasher {
public:
    Hasher();
    ~Hasher();
    Hasher(const Hasher&) = delete;
    Hasher& operator=(const Hasher&) = delete;

    Hasher& update(ByteView data);
    Hasher& update(const Digest& d) { return update(d.view()); }
    Hasher& update_byte(std::uint8_t b);
    Hasher& update_le64(std::uint64_t v);
    Digest finish();

private:
    struct State;
    std::unique_ptr<State> state_;
};

Digest hash_bytes(ByteView data);

/// Counter-mode PRF: block i is hash(seed || epoch_le64 || i_le64).
class PrfStream {
public:
    explicit PrfStream(const Seed& seed, std::uint64_t epoch = 0) : seed_(seed), epoch_(epoch) {}

    Digest block(std::uint64_t counter) const;
    Digest next_block();
    std::uint64_t next_u64();
    /// Uniform in [0, bound); bound must be nonzero.
    std::uint64_t uniform_below(std::uint64_t bound);
    /// Uniform in [0, 1) with 53 bits of precision.
    double next_unit();
    Bytes next_bytes(std::size_t n);

private:
    Seed seed_;
    std::uint64_t epoch_;
    std::uint64_t counter_ = 0;
    Digest buffer_{};
    std::size_t offset_ = sizeof(Digest::bytes);
};

/// hash(seed || label): derives independent sub-seeds from one root seed.
Seed derive_seed(const Seed& root, std::string_view label);
Seed derive_seed(const Seed& root, std::uint64_t index);

}  // namespace porstore
