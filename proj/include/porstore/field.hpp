#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace porstore {

/// Arithmetic modulo a prime below 2^63. Elements are canonical residues.
class PrimeField {
public:
    using Element = std::uint64_t;

    explicit constexpr PrimeField(std::uint64_t modulus) : p_(modulus) {}

    constexpr std::uint64_t modulus() const { return p_; }

    constexpr Element reduce(std::uint64_t v) const { return v % p_; }
    constexpr Element add(Element a, Element b) const {
        auto s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    constexpr Element sub(Element a, Element b) const { return a >= b ? a - b : a + p_ - b; }
    constexpr Element neg(Element a) const { return a == 0 ? 0 : p_ - a; }
    constexpr Element mul(Element a, Element b) const {
        return static_cast<Element>((static_cast<unsigned __int128>(a) * b) % p_);
    }
    constexpr Element pow(Element base, std::uint64_t exp) const {
        Element result = 1 % p_;
        while (exp) {
            if (exp & 1) result = mul(result, base);
            base = mul(base, base);
            exp >>= 1;
        }
        return result;
    }
    /// Fermat inverse; throws InvalidParams for zero.
    Element inv(Element a) const;

    /// Evaluates a polynomial (coefficients low degree first) at x.
    Element evaluate(std::span<const Element> coefficients, Element x) const;

private:
    std::uint64_t p_;
};

/// Lagrange basis weights at `at` for the distinct nodes `xs`:
/// f(at) == sum_j weights[j] * f(xs[j]) for every f of degree < xs.size().
std::vector<PrimeField::Element> lagrange_weights(const PrimeField& field,
                                                  std::span<const PrimeField::Element> xs,
                                                  PrimeField::Element at);

/// Packs a little-endian bitstream into `bits`-wide symbols (last one zero-padded).
std::vector<std::uint64_t> pack_symbols(std::span<const std::uint8_t> data, unsigned bits);
/// Inverse of pack_symbols, truncated to `byte_length`.
std::vector<std::uint8_t> unpack_symbols(std::span<const std::uint64_t> symbols, unsigned bits,
                                         std::size_t byte_length);

}  // namespace porstore
