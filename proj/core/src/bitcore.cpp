#include "rbit/bitcore.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rbit {

namespace {

void check_precision(int p) {
    if (p < 1 || p > kMaxBits)
        throw std::invalid_argument("bit count must be in [1, 63], got " + std::to_string(p));
}

std::uint64_t splitmix64(std::uint64_t& x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

double DyadicValue::value() const noexcept {
    // (2k - 1) * 2^-(p+1); 2k - 1 < 2^64 for p <= 63.
    return std::ldexp(static_cast<double>(2 * index - 1), -(precision + 1));
}

std::uint64_t DyadicValue::mirror_index() const noexcept {
    return (std::uint64_t{1} << precision) + 1 - index;
}

double DyadicValue::complement() const noexcept {
    return std::ldexp(static_cast<double>(2 * mirror_index() - 1), -(precision + 1));
}

bool DyadicValue::upper_half() const noexcept {
    return index > (std::uint64_t{1} << (precision - 1));
}

BitSource::BitSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

std::uint64_t BitSource::pull(int n) {
    // n in [1, 64], n <= buffered_
    const std::uint64_t out = n == 64 ? buffer_ : buffer_ >> (64 - n);
    buffer_ = n == 64 ? 0 : buffer_ << n;
    buffered_ -= n;
    return out;
}

std::uint64_t BitSource::draw_bits(int p) {
    check_precision(p);
    std::uint64_t out = 0;
    int need = p;
    while (need > 0) {
        if (buffered_ == 0) {
            buffer_ = engine_();
            buffered_ = 64;
        }
        const int take = need < buffered_ ? need : buffered_;
        out = (out << take) | pull(take);
        need -= take;
    }
    bits_drawn_ += static_cast<std::uint64_t>(p);
    return out;
}

DyadicValue sample_dyadic_uniform(BitSource& src, int p) {
    return DyadicValue{src.draw_bits(p) + 1, p};
}

DyadicValue truncate(double u, int p) {
    check_precision(p);
    if (!(u >= 0.0 && u < 1.0))
        throw std::invalid_argument("truncate: u must lie in [0, 1)");
    // 2^p * u is exact in binary floating point; floor of it fits in 63 bits.
    const auto cell = static_cast<std::uint64_t>(std::floor(std::ldexp(u, p)));
    return DyadicValue{cell + 1, p};
}

DyadicValue truncate(const DyadicValue& d, int q) {
    check_precision(q);
    if (q > d.precision)
        throw std::invalid_argument("truncate: target precision exceeds source precision");
    return DyadicValue{(d.bits() >> (d.precision - q)) + 1, q};
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) noexcept {
    std::uint64_t x = base;
    std::uint64_t h = splitmix64(x);
    x = h ^ (stream * 0xD1B54A32D192ED03ULL);
    h = splitmix64(x);
    x = h ^ (index * 0xABC98388FB8FAC03ULL);
    return splitmix64(x);
}

} // namespace rbit
