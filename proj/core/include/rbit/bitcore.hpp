#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace rbit {

inline constexpr int kMaxBits = 63;

/// An element of the shifted dyadic grid with `precision` bits:
/// value = index * 2^-p - 2^-(p+1), index in [1, 2^p].
///
/// Stored as the integer index so re-truncation to fewer bits is exact.
struct DyadicValue {
    std::uint64_t index = 1;
    int precision = 1;

    double value() const noexcept;
    /// 1 - value(), exact (the grid is symmetric about 1/2).
    double complement() const noexcept;
    /// Cell index counted from zero, i.e. the raw bit pattern.
    std::uint64_t bits() const noexcept { return index - 1; }
    /// Index of the mirrored point 1 - value().
    std::uint64_t mirror_index() const noexcept;
    bool upper_half() const noexcept;

    friend bool operator==(const DyadicValue&, const DyadicValue&) = default;
};

/// Per-coefficient bit counts and their total.
struct BitAllocation {
    std::vector<int> bits;
    std::uint64_t total = 0;

    std::size_t size() const noexcept { return bits.size(); }
    int operator[](std::size_t i) const { return bits[i]; }
};

/// Counted stream of fair bits. Single owner; not safe for concurrent use.
///
/// Bits come from the high end of each generator word and are handed out
/// most-significant-first, so the stream does not depend on how draws are
/// partitioned into calls.
class BitSource {
public:
    explicit BitSource(std::uint64_t seed = 0);

    /// p fresh bits packed into an integer, first bit most significant.
    std::uint64_t draw_bits(int p);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t bits_drawn() const noexcept { return bits_drawn_; }

private:
    std::uint64_t pull(int n);

    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::uint64_t buffer_ = 0;
    int buffered_ = 0;
    std::uint64_t bits_drawn_ = 0;
};

/// Uniform draw from the dyadic grid with p bits; consumes exactly p bits.
DyadicValue sample_dyadic_uniform(BitSource& src, int p);

/// Cell midpoint of u on the p-bit grid (floor convention at boundaries).
DyadicValue truncate(double u, int p);

/// Re-truncates a dyadic value to q <= d.precision bits without rounding.
DyadicValue truncate(const DyadicValue& d, int q);

/// Reproducible seed for replication streams: (base, stream, index) mixed
/// through splitmix64.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index = 0) noexcept;

} // namespace rbit
