#pragma once

#include <span>

namespace rbit {

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_max = 0.0;
    int n_points = 0;
};

/// Least squares y = intercept + slope x on raw values; at least 3 points,
/// xs not all equal.
RateFit fit_line(std::span<const double> xs, std::span<const double> ys);

/// Least squares on (ln x, ln y); all values must be positive.
RateFit fit_rate(std::span<const double> xs, std::span<const double> ys);

} // namespace rbit
