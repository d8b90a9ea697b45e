#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rbit/bitcore.hpp"
#include "rbit/normal.hpp"
#include "rbit/path.hpp"

namespace rbit {

/// Position of a Schauder function: i = 2^level + offset - 1, offset >= 1.
struct SchauderIndex {
    std::uint64_t i;
    int level;
    std::uint64_t offset;

    explicit SchauderIndex(std::uint64_t i);
    double left() const noexcept;
    double right() const noexcept;
    double height() const noexcept; ///< 2^(-level/2 - 1)
};

/// Hat function of height 2^(-m/2-1) on [(k-1) 2^-m, k 2^-m].
double schauder(std::uint64_t i, double t);
/// ||s_i||^2 = 2^(-2m-2) / 3.
double schauder_norm_sq(std::uint64_t i);
/// s_i on the uniform grid with 2^(level+1) intervals.
PiecewiseLinear schauder_function(std::uint64_t i);

inline constexpr int kMaxBridgeLevel = 30;

/// p_i = 2 (level - floor(log2 i)), i = 1 .. 2^level - 1.
BitAllocation allocation_bridge(int level);
/// 2^(level+2) - 2 level - 4.
std::uint64_t bridge_bits(int level);

/// Truncated Levy-Ciesielski bridge with random-bit coefficients.
struct BridgePath {
    int level = 0;
    std::vector<double> coeffs;          ///< coefficient of s_1 .. s_{2^level - 1}
    std::vector<DyadicValue> retained;   ///< uniforms behind each coefficient
    BitAllocation allocation;

    /// Values at j 2^-level, j = 0 .. 2^level (exact: the path is linear in between).
    PiecewiseLinear nodal() const;
    /// Direct coefficient sum at t.
    double eval(double t) const;
};

/// Nodal values of sum_i coeffs[i-1] s_i on the 2^level grid, by midpoint
/// displacement; coeffs.size() must be 2^level - 1.
PiecewiseLinear bridge_nodal(int level, std::span<const double> coeffs);

BridgePath sample_bridge(BitSource& src, int level);

/// Builds the bit path from higher-precision uniforms (one per coefficient),
/// truncating each to its allocated bit count.
BridgePath bridge_from_uniforms(int level, std::span<const DyadicValue> uniforms);

/// Re-truncates the retained uniforms to the coarser allocation; draws nothing.
BridgePath coarsen(const BridgePath& path, int coarse_level);

/// sum_{i >= 2^level} ||s_i||^2 = 2^-level / 6.
double bridge_truncation_error_sq(int level);

/// E||B - B^(level, p)||^2 = sum_i mse(p_i) ||s_i||^2 + 2^-level / 6.
/// `exact` is false when some p_i exceeds the enumeration limit.
MseValue bridge_bit_error_sq(int level);

/// sum_i 2^-p_i / p_i * i^-2 over the allocation.
double bridge_precision_sum(int level);

} // namespace rbit
