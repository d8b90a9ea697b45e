#include "rbit/ratefit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace rbit {

RateFit fit_line(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("fit_line: xs and ys differ in length");
    if (xs.size() < 3)
        throw std::invalid_argument("fit_line: need at least 3 points");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0))
        throw std::invalid_argument("fit_line: xs are all equal");
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.n_points = static_cast<int>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        fit.residual_max =
            std::max(fit.residual_max, std::abs(ys[i] - (fit.intercept + fit.slope * xs[i])));
    return fit;
}

RateFit fit_rate(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("fit_rate: xs and ys differ in length");
    std::vector<double> lx(xs.size());
    std::vector<double> ly(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
            throw std::invalid_argument("fit_rate: values must be positive");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
    }
    return fit_line(lx, ly);
}

} // namespace rbit
