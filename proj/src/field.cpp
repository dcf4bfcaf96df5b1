#include "porstore/field.hpp"

#include "porstore/error.hpp"

namespace porstore {

PrimeField::Element PrimeField::inv(Element a) const {
    if (a % p_ == 0) throw Error(ErrorCode::InvalidParams, "inverse of zero");
    return pow(a, p_ - 2);
}

PrimeField::Element PrimeField::evaluate(std::span<const Element> coefficients, Element x) const {
    Element acc = 0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = add(mul(acc, x), *it);
    return acc;
}

std::vector<PrimeField::Element> lagrange_weights(const PrimeField& field,
                                                  std::span<const PrimeField::Element> xs,
                                                  PrimeField::Element at) {
    std::vector<PrimeField::Element> weights(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        PrimeField::Element num = 1;
        PrimeField::Element den = 1;
        for (std::size_t m = 0; m < xs.size(); ++m) {
            if (m == j) continue;
            num = field.mul(num, field.sub(at, xs[m]));
            den = field.mul(den, field.sub(xs[j], xs[m]));
        }
        weights[j] = field.mul(num, field.inv(den));
    }
    return weights;
}

std::vector<std::uint64_t> pack_symbols(std::span<const std::uint8_t> data, unsigned bits) {
    const std::size_t total_bits = data.size() * 8;
    std::vector<std::uint64_t> out((total_bits + bits - 1) / bits, 0);
    for (std::size_t bit = 0; bit < total_bits; ++bit) {
        if ((data[bit / 8] >> (bit % 8)) & 1u) out[bit / bits] |= std::uint64_t{1} << (bit % bits);
    }
    return out;
}

std::vector<std::uint8_t> unpack_symbols(std::span<const std::uint64_t> symbols, unsigned bits,
                                         std::size_t byte_length) {
    std::vector<std::uint8_t> out(byte_length, 0);
    const std::size_t total_bits = std::min(byte_length * 8, symbols.size() * bits);
    for (std::size_t bit = 0; bit < total_bits; ++bit) {
        if ((symbols[bit / bits] >> (bit % bits)) & 1u) out[bit / 8] |= static_cast<std::uint8_t>(1u << (bit % 8));
    }
    return out;
}

}  // namespace porstore
