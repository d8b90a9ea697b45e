#include "rbit/path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rbit/summation.hpp"

namespace rbit {

double PiecewiseLinear::operator()(double t) const {
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("PiecewiseLinear: t must lie in [0, 1]");
    const std::size_t n = intervals();
    if (n == 0)
        throw std::invalid_argument("PiecewiseLinear: empty function");
    const double s = t * static_cast<double>(n);
    const std::size_t j = std::min(static_cast<std::size_t>(s), n - 1);
    const double w = s - static_cast<double>(j);
    return nodes[j] + w * (nodes[j + 1] - nodes[j]);
}

PiecewiseLinear PiecewiseLinear::refined(std::size_t factor) const {
    if (factor == 0)
        throw std::invalid_argument("PiecewiseLinear::refined: factor must be positive");
    if (factor == 1)
        return *this;
    const std::size_t n = intervals();
    PiecewiseLinear out;
    out.nodes.resize(n * factor + 1);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t r = 0; r < factor; ++r) {
            const double w = static_cast<double>(r) / static_cast<double>(factor);
            out.nodes[j * factor + r] = nodes[j] + w * (nodes[j + 1] - nodes[j]);
        }
    }
    out.nodes[n * factor] = nodes[n];
    return out;
}

namespace {

double inner_same_grid(const std::vector<double>& f, const std::vector<double>& g) {
    const std::size_t n = f.size() - 1;
    CompensatedSum s;
    for (std::size_t j = 0; j < n; ++j)
        s += 2.0 * f[j] * g[j] + f[j] * g[j + 1] + f[j + 1] * g[j] + 2.0 * f[j + 1] * g[j + 1];
    return s.value() / (6.0 * static_cast<double>(n));
}

} // namespace

double inner(const PiecewiseLinear& f, const PiecewiseLinear& g) {
    const std::size_t nf = f.intervals();
    const std::size_t ng = g.intervals();
    if (nf == 0 || ng == 0)
        throw std::invalid_argument("inner: empty function");
    if (nf == ng)
        return inner_same_grid(f.nodes, g.nodes);
    if (ng % nf == 0)
        return inner_same_grid(f.refined(ng / nf).nodes, g.nodes);
    if (nf % ng == 0)
        return inner_same_grid(f.nodes, g.refined(nf / ng).nodes);
    throw std::invalid_argument("inner: grids are not nested");
}

double l2_norm_sq(const PiecewiseLinear& f) {
    const std::size_t n = f.intervals();
    if (n == 0)
        throw std::invalid_argument("l2_norm_sq: empty function");
    CompensatedSum s;
    for (std::size_t j = 0; j < n; ++j) {
        const double a = f.nodes[j];
        const double b = f.nodes[j + 1];
        s += a * a + a * b + b * b;
    }
    return s.value() / (3.0 * static_cast<double>(n));
}

double l2_norm(const PiecewiseLinear& f) { return std::sqrt(l2_norm_sq(f)); }

PiecewiseLinear operator-(const PiecewiseLinear& f, const PiecewiseLinear& g) {
    std::size_t nf = f.intervals();
    std::size_t ng = g.intervals();
    PiecewiseLinear a = f;
    PiecewiseLinear b = g;
    if (nf != ng) {
        if (ng % nf == 0)
            a = f.refined(ng / nf);
        else if (nf % ng == 0)
            b = g.refined(nf / ng);
        else
            throw std::invalid_argument("operator-: grids are not nested");
    }
    for (std::size_t j = 0; j < a.nodes.size(); ++j)
        a.nodes[j] -= b.nodes[j];
    return a;
}

} // namespace rbit
