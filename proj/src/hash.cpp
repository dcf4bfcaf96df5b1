#include "porstore/hash.hpp"

// The one-shot EVP path re-fetches the digest on every call, which dominates
// the cost of the short hash chains used by sealing.
#define OPENSSL_SUPPRESS_DEPRECATED
#include <openssl/sha.h>

#include <cstring>

#include "porstore/error.hpp"

namespace porstore {

Digest Digest::from_hex(std::string_view hex) {
    auto raw = porstore::from_hex(hex);
    return from_bytes(raw);
}

Digest Digest::from_bytes(ByteView data) {
    if (data.size() != 32) throw Error(ErrorCode::ParseError, "digest must be 32 bytes");
    Digest d;
    std::memcpy(d.bytes.data(), data.data(), 32);
    return d;
}

struct Hasher::State {
    SHA256_CTX ctx;
};

Hasher::Hasher() : state_(std::make_unique<State>()) { SHA256_Init(&state_->ctx); }

Hasher::~Hasher() = default;

Hasher& Hasher::update(ByteView data) {
    SHA256_Update(&state_->ctx, data.data(), data.size());
    return *this;
}

Hasher& Hasher::update_byte(std::uint8_t b) {
    SHA256_Update(&state_->ctx, &b, 1);
    return *this;
}

Hasher& Hasher::update_le64(std::uint64_t v) {
    std::uint8_t buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<std::uint8_t>(v >> (8 * i));
    SHA256_Update(&state_->ctx, buf, sizeof buf);
    return *this;
}

Digest Hasher::finish() {
    Digest d;
    SHA256_Final(d.bytes.data(), &state_->ctx);
    SHA256_Init(&state_->ctx);
    return d;
}

Digest hash_bytes(ByteView data) {
    Digest d;
    SHA256_CTX ctx;
    SHA256_Init(&ctx);
    SHA256_Update(&ctx, data.data(), data.size());
    SHA256_Final(d.bytes.data(), &ctx);
    return d;
}

Digest PrfStream::block(std::uint64_t counter) const {
    std::uint8_t buf[48];
    std::memcpy(buf, seed_.bytes.data(), 32);
    for (int i = 0; i < 8; ++i) {
        buf[32 + i] = static_cast<std::uint8_t>(epoch_ >> (8 * i));
        buf[40 + i] = static_cast<std::uint8_t>(counter >> (8 * i));
    }
    return hash_bytes(buf);
}

Digest PrfStream::next_block() {
    offset_ = sizeof(Digest::bytes);
    return block(counter_++);
}

std::uint64_t PrfStream::next_u64() {
    if (offset_ + 8 > buffer_.bytes.size()) {
        buffer_ = block(counter_++);
        offset_ = 0;
    }
    auto v = load_le64(buffer_.bytes.data() + offset_);
    offset_ += 8;
    return v;
}

std::uint64_t PrfStream::uniform_below(std::uint64_t bound) {
    if (bound == 0) throw Error(ErrorCode::InvalidParams, "uniform_below(0)");
    // Reject the low residue class so every value of [0, bound) is equally likely.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        auto r = next_u64();
        if (r >= threshold) return r % bound;
    }
}

double PrfStream::next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

Bytes PrfStream::next_bytes(std::size_t n) {
    Bytes out;
    out.reserve(n);
    while (out.size() < n) {
        auto b = next_block();
        auto take = std::min(n - out.size(), b.bytes.size());
        out.insert(out.end(), b.bytes.begin(), b.bytes.begin() + static_cast<std::ptrdiff_t>(take));
    }
    return out;
}

Seed derive_seed(const Seed& root, std::string_view label) {
    return Hasher().update(root).update(as_bytes(label)).finish();
}

Seed derive_seed(const Seed& root, std::uint64_t index) {
    return Hasher().update(root).update_le64(index).finish();
}

}  // namespace porstore
