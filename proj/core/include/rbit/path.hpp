#pragma once

#include <cstddef>
#include <vector>

namespace rbit {

/// Continuous piecewise-linear function on [0, 1] with nodes at j / n.
struct PiecewiseLinear {
    std::vector<double> nodes; // n + 1 values

    std::size_t intervals() const noexcept { return nodes.empty() ? 0 : nodes.size() - 1; }
    double operator()(double t) const;

    /// The same function on a grid refined by an integer factor.
    PiecewiseLinear refined(std::size_t factor) const;
};

/// Exact L2 inner product; the grids must be nested (one count divides the other).
double inner(const PiecewiseLinear& f, const PiecewiseLinear& g);
double l2_norm_sq(const PiecewiseLinear& f);
double l2_norm(const PiecewiseLinear& f);
PiecewiseLinear operator-(const PiecewiseLinear& f, const PiecewiseLinear& g);

} // namespace rbit
