#pragma once

#include <span>
#include <vector>

#include "rbit/quantile.hpp"

namespace rbit {

/// Equal-weight measure on a sorted point set.
class DiscreteUniform {
public:
    /// Throws std::invalid_argument if `points` is empty or unsorted.
    explicit DiscreteUniform(std::vector<double> points);

    std::span<const double> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    double mass() const noexcept { return 1.0 / static_cast<double>(points_.size()); }

private:
    std::vector<double> points_;
};

/// W2 between a law and a measure with 2^p equal atoms, via the monotone
/// coupling. Normal and uniform laws use closed-form cell integrals.
double w2_uniform(const QuantileSpec& law, const DiscreteUniform& nu);

/// Smallest W2 distance from the law to any equal-weight 2^p-point measure.
double rbit_error(const QuantileSpec& law, int p);

/// Exact W2 between two empirical measures of equal size.
double w2_empirical(std::span<const double> a, std::span<const double> b);

} // namespace rbit
