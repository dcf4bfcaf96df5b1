#include <doctest.h>

#include <map>

#include "helpers.hpp"
#include "porstore/error.hpp"
#include "porstore/shamir.hpp"

using namespace porstore;

namespace {

template <typename F>
void for_each_subset(std::size_t n, std::size_t r, F&& f) {
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != r) continue;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) idx.push_back(i);
        f(idx);
    }
}

ErrorCode error_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no throw");
    return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("lagrange weights at zero") {
    PrimeField f(kMersenne61);
    const auto p = kMersenne61;
    std::vector<std::uint64_t> x12{1, 2}, x123{1, 2, 3}, x1{1};
    CHECK(reconstruction_coefficients(f, x12) == std::vector<std::uint64_t>{2, p - 1});
    CHECK(reconstruction_coefficients(f, x123) == std::vector<std::uint64_t>{3, p - 3, 1});
    CHECK(reconstruction_coefficients(f, x1) == std::vector<std::uint64_t>{1});
    std::vector<std::uint64_t> dup{1, 1}, zero{0, 1};
    CHECK(error_of([&] { reconstruction_coefficients(f, dup); }) == ErrorCode::DuplicateShare);
    CHECK(error_of([&] { reconstruction_coefficients(f, zero); }) == ErrorCode::InvalidParams);
}

TEST_CASE("t=1 shares carry the chunked secret") {
    std::mt19937_64 rng(60);
    auto data = testutil::random_bytes(rng, 100);
    ShareParams params{1, 4};
    auto set = split_secret(data, params, testutil::random_seed(rng));
    for (const auto& s : set.shares) {
        CHECK(s.y_values == set.shares[0].y_values);
        CHECK(reconstruct(std::vector<Share>{s}, params, data.size()) == data);
    }
}

TEST_CASE("t=n=2: (1, s+a), (2, s+2a) reconstruct to s") {
    PrimeField f(kMersenne61);
    std::mt19937_64 rng(61);
    for (int t = 0; t < 100; ++t) {
        auto s = rng() % kMersenne61, a = rng() % kMersenne61;
        std::vector<std::uint64_t> coeffs{a};
        auto ys = share_chunk(f, s, coeffs, 2);
        CHECK(ys[0] == f.add(s, a));
        CHECK(ys[1] == f.add(s, f.mul(2, a)));
        std::vector<std::uint64_t> xs{1, 2};
        auto lam = reconstruction_coefficients(f, xs);
        CHECK(f.add(f.mul(lam[0], ys[0]), f.mul(lam[1], ys[1])) == s);
    }
}

TEST_CASE("every t-subset reconstructs for n <= 6, and t-1 shares are refused") {
    std::mt19937_64 rng(62);
    for (std::uint32_t n = 1; n <= 6; ++n)
        for (std::uint32_t t = 1; t <= n; ++t) {
            ShareParams params{t, n};
            auto data = testutil::random_bytes(rng, 1024 + rng() % 9);
            auto set = split_secret(data, params, testutil::random_seed(rng));
            REQUIRE(set.shares.size() == n);
            for (std::uint32_t r = t; r <= n; ++r)
                for_each_subset(n, r, [&](const std::vector<std::size_t>& idx) {
                    std::vector<Share> subset;
                    for (auto i : idx) subset.push_back(set.shares[i]);
                    CHECK(reconstruct(subset, params, data.size()) == data);
                });
            if (t > 1)
                for_each_subset(n, t - 1, [&](const std::vector<std::size_t>& idx) {
                    std::vector<Share> subset;
                    for (auto i : idx) subset.push_back(set.shares[i]);
                    CHECK(error_of([&] { reconstruct(subset, params, data.size()); }) ==
                          ErrorCode::InsufficientShares);
                });
        }
}

TEST_CASE("reconstruction is the linear combination sum lambda_j y_j") {
    std::mt19937_64 rng(63);
    ShareParams params{3, 5};
    auto f = params.field();
    auto data = testutil::random_bytes(rng, 200);
    auto set = split_secret(data, params, testutil::random_seed(rng));
    auto reference = split_secret(data, ShareParams{1, 1}, Seed{}).shares[0].y_values;  // chunks themselves
    for_each_subset(5, 3, [&](const std::vector<std::size_t>& idx) {
        std::vector<std::uint64_t> xs;
        for (auto i : idx) xs.push_back(set.shares[i].x);
        auto lam = reconstruction_coefficients(f, xs);
        for (std::size_t c = 0; c < reference.size(); ++c) {
            std::uint64_t acc = 0;
            for (std::size_t j = 0; j < idx.size(); ++j) acc = f.add(acc, f.mul(lam[j], set.shares[idx[j]].y_values[c]));
            CHECK(acc == reference[c]);
        }
    });
}

TEST_CASE("perfect secrecy over p=13, t=2, n=3") {
    PrimeField f(13);
    // For every share position, the distribution of y over all coefficients
    // must be the same for every secret.
    for (std::uint32_t pos = 0; pos < 3; ++pos) {
        std::map<std::uint64_t, int> first;
        for (std::uint64_t s = 0; s < 13; ++s) {
            std::map<std::uint64_t, int> hist;
            for (std::uint64_t a = 0; a < 13; ++a) {
                std::vector<std::uint64_t> coeffs{a};
                ++hist[share_chunk(f, s, coeffs, 3)[pos]];
            }
            CHECK(hist.size() == 13);
            for (const auto& [y, c] : hist) CHECK(c == 1);
            if (s == 0) first = hist;
            CHECK(hist == first);
        }
    }
}

TEST_CASE("shares add homomorphically") {
    PrimeField f(kMersenne61);
    std::mt19937_64 rng(64);
    for (int t = 0; t < 50; ++t) {
        auto s1 = rng() % kMersenne61, s2 = rng() % kMersenne61;
        std::vector<std::uint64_t> c1{rng() % kMersenne61, rng() % kMersenne61};
        std::vector<std::uint64_t> c2{rng() % kMersenne61, rng() % kMersenne61};
        auto y1 = share_chunk(f, s1, c1, 5), y2 = share_chunk(f, s2, c2, 5);
        std::vector<std::uint64_t> xs{2, 4, 5}, sum;
        for (auto x : xs) sum.push_back(f.add(y1[x - 1], y2[x - 1]));
        auto lam = reconstruction_coefficients(f, xs);
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < 3; ++j) acc = f.add(acc, f.mul(lam[j], sum[j]));
        CHECK(acc == f.add(s1, s2));
    }
}

TEST_CASE("parameter and input errors") {
    CHECK_THROWS_AS(ShareParams({0, 3}).validate(), Error);
    CHECK_THROWS_AS(ShareParams({4, 3}).validate(), Error);
    CHECK_THROWS_AS(ShareParams({2, 13, 13}).validate(), Error);
    CHECK(ShareParams{}.chunk_bits() == 60);
    ShareParams params{2, 3};
    auto data = testutil::str_bytes("secret bytes");
    auto set = split_secret(data, params, Seed{});
    std::vector<Share> dup{set.shares[0], set.shares[0]};
    CHECK(error_of([&] { reconstruct(dup, params, data.size()); }) == ErrorCode::DuplicateShare);
    CHECK(split_secret(data, params, Seed{}).shares == set.shares);
    CHECK(reconstruct(std::vector<Share>{set.shares[2], set.shares[0]}, params, data.size()) == data);
    CHECK_THROWS_AS(reconstruct(std::vector<Share>{set.shares[2], set.shares[0]}, params, 0), Error);
}
