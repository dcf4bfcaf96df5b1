#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "porstore/bytes.hpp"
#include "porstore/hash.hpp"
#include "porstore/merkle.hpp"

namespace testutil {

inline porstore::Bytes random_bytes(std::mt19937_64& rng, std::size_t n) {
    porstore::Bytes out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(rng());
    return out;
}

inline porstore::Seed random_seed(std::mt19937_64& rng) {
    porstore::Seed s;
    for (auto& b : s.bytes) b = static_cast<std::uint8_t>(rng());
    return s;
}

inline std::vector<porstore::Block> random_blocks(std::mt19937_64& rng, std::size_t count, std::size_t size) {
    std::vector<porstore::Block> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back({i, random_bytes(rng, size)});
    return out;
}

inline porstore::Bytes str_bytes(const std::string& s) { return porstore::Bytes(s.begin(), s.end()); }

}  // namespace testutil
