#include "rbit/bridge.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rbit/summation.hpp"

namespace rbit {

namespace {

void check_level(int level, int max_level, const char* what) {
    if (level < 1 || level > max_level)
        throw std::invalid_argument(std::string(what) + ": level must be in [1, " +
                                    std::to_string(max_level) + "], got " + std::to_string(level));
}

int floor_log2(std::uint64_t i) { return std::bit_width(i) - 1; }

} // namespace

SchauderIndex::SchauderIndex(std::uint64_t idx) : i(idx), level(0), offset(0) {
    if (idx == 0)
        throw std::invalid_argument("SchauderIndex: index must be positive");
    level = floor_log2(idx);
    offset = idx - (std::uint64_t{1} << level) + 1;
}

double SchauderIndex::left() const noexcept {
    return std::ldexp(static_cast<double>(offset - 1), -level);
}
double SchauderIndex::right() const noexcept { return std::ldexp(static_cast<double>(offset), -level); }
double SchauderIndex::height() const noexcept { return std::exp2(-0.5 * level - 1.0); }

double schauder(std::uint64_t i, double t) {
    const SchauderIndex s(i);
    const double lo = s.left();
    const double hi = s.right();
    if (t <= lo || t >= hi)
        return 0.0;
    const double mid = 0.5 * (lo + hi);
    const double slope = s.height() / (mid - lo);
    return t <= mid ? slope * (t - lo) : slope * (hi - t);
}

double schauder_norm_sq(std::uint64_t i) {
    const int m = SchauderIndex(i).level;
    return std::ldexp(1.0, -2 * m - 2) / 3.0;
}

PiecewiseLinear schauder_function(std::uint64_t i) {
    const SchauderIndex s(i);
    const std::size_t n = std::size_t{1} << (s.level + 1);
    PiecewiseLinear f;
    f.nodes.assign(n + 1, 0.0);
    f.nodes[2 * s.offset - 1] = s.height();
    return f;
}

BitAllocation allocation_bridge(int level) {
    check_level(level, kMaxBridgeLevel, "allocation_bridge");
    const std::uint64_t n = (std::uint64_t{1} << level) - 1;
    BitAllocation a;
    a.bits.resize(n);
    for (std::uint64_t i = 1; i <= n; ++i) {
        a.bits[i - 1] = 2 * (level - floor_log2(i));
        a.total += static_cast<std::uint64_t>(a.bits[i - 1]);
    }
    return a;
}

std::uint64_t bridge_bits(int level) {
    check_level(level, 60, "bridge_bits");
    return (std::uint64_t{1} << (level + 2)) - 2 * static_cast<std::uint64_t>(level) - 4;
}

PiecewiseLinear bridge_nodal(int level, std::span<const double> coeffs) {
    const std::size_t n = std::size_t{1} << level;
    if (coeffs.size() != n - 1)
        throw std::invalid_argument("bridge_nodal: expected 2^level - 1 coefficients");
    PiecewiseLinear f;
    f.nodes.assign(n + 1, 0.0);
    for (int m = 0; m < level; ++m) {
        const std::size_t half = n >> (m + 1);
        const double h = std::exp2(-0.5 * m - 1.0);
        const std::size_t first = std::size_t{1} << m;
        for (std::size_t k = 0; k < first; ++k) {
            const std::size_t lo = 2 * k * half;
            const std::size_t mid = lo + half;
            f.nodes[mid] = 0.5 * (f.nodes[lo] + f.nodes[lo + 2 * half]) + h * coeffs[first + k - 1];
        }
    }
    return f;
}

PiecewiseLinear BridgePath::nodal() const { return bridge_nodal(level, coeffs); }

double BridgePath::eval(double t) const {
    CompensatedSum s;
    for (std::size_t i = 1; i <= coeffs.size(); ++i)
        s += coeffs[i - 1] * schauder(i, t);
    return s.value();
}

BridgePath sample_bridge(BitSource& src, int level) {
    check_level(level, 25, "sample_bridge");
    BridgePath path;
    path.level = level;
    path.allocation = allocation_bridge(level);
    const std::size_t n = path.allocation.size();
    path.coeffs.resize(n);
    path.retained.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const DyadicValue u = sample_dyadic_uniform(src, path.allocation[i]);
        path.retained[i] = u;
        path.coeffs[i] = normal_quantile(u);
    }
    return path;
}

BridgePath bridge_from_uniforms(int level, std::span<const DyadicValue> uniforms) {
    check_level(level, 25, "bridge_from_uniforms");
    BridgePath path;
    path.level = level;
    path.allocation = allocation_bridge(level);
    const std::size_t n = path.allocation.size();
    if (uniforms.size() != n)
        throw std::invalid_argument("bridge_from_uniforms: expected 2^level - 1 uniforms");
    path.coeffs.resize(n);
    path.retained.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const DyadicValue u = truncate(uniforms[i], path.allocation[i]);
        path.retained[i] = u;
        path.coeffs[i] = normal_quantile(u);
    }
    return path;
}

BridgePath coarsen(const BridgePath& path, int coarse_level) {
    if (coarse_level < 1 || coarse_level >= path.level)
        throw std::invalid_argument("coarsen: target level must be in [1, level)");
    BridgePath out;
    out.level = coarse_level;
    out.allocation = allocation_bridge(coarse_level);
    const std::size_t n = out.allocation.size();
    out.coeffs.resize(n);
    out.retained.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const DyadicValue u = truncate(path.retained[i], out.allocation[i]);
        out.retained[i] = u;
        out.coeffs[i] = normal_quantile(u);
    }
    return out;
}

double bridge_truncation_error_sq(int level) {
    if (level < 0)
        throw std::invalid_argument("bridge_truncation_error_sq: level must be non-negative");
    return std::ldexp(1.0, -level) / 6.0;
}

MseValue bridge_bit_error_sq(int level) {
    check_level(level, kMaxBridgeLevel, "bridge_bit_error_sq");
    // All 2^m indices of level m share p = 2 (level - m) and ||s_i||^2.
    CompensatedSum s;
    bool exact = true;
    for (int m = 0; m < level; ++m) {
        const MseValue e = bit_normal_mse_any(2 * (level - m));
        exact = exact && e.exact;
        s += std::ldexp(e.value, m) * std::ldexp(1.0, -2 * m - 2) / 3.0;
    }
    s += bridge_truncation_error_sq(level);
    return {s.value(), exact};
}

double bridge_precision_sum(int level) {
    const BitAllocation a = allocation_bridge(level);
    CompensatedSum s;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        const int p = a[i - 1];
        const double di = static_cast<double>(i);
        s += std::ldexp(1.0, -p) / p / (di * di);
    }
    return s.value();
}

} // namespace rbit
