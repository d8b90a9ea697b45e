#include "rbit/quantile.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "rbit/errors.hpp"
#include "rbit/normal.hpp"
#include "rbit/summation.hpp"

namespace rbit {

namespace {
constexpr double kTailCut = 0x1p-40;
}

QuantileSpec QuantileSpec::standard_normal() {
    QuantileSpec q;
    q.name = "normal";
    q.quantile = [](double u) { return normal_quantile(u); };
    q.upper_tail = [](double t) { return normal_quantile_upper_tail(t); };
    q.second_moment = 1.0;
    q.family = LawFamily::standard_normal;
    return q;
}

QuantileSpec QuantileSpec::uniform(double lo, double hi) {
    if (!(lo < hi))
        throw std::invalid_argument("QuantileSpec::uniform: need lo < hi");
    QuantileSpec q;
    q.name = "uniform";
    q.quantile = [lo, hi](double u) { return lo + (hi - lo) * u; };
    q.upper_tail = [lo, hi](double t) { return hi - (hi - lo) * std::exp2(-t); };
    q.second_moment = (lo * lo + lo * hi + hi * hi) / 3.0;
    q.family = LawFamily::uniform;
    q.lower = lo;
    q.upper = hi;
    return q;
}

double QuantileSpec::evaluate(double u, double complement) const {
    if (family == LawFamily::standard_normal)
        return complement < 0.5 ? normal_quantile_complement(complement) : normal_quantile(u);
    if (complement < kTailCut && upper_tail)
        return upper_tail(-std::log2(complement));
    return quantile(u);
}

double quantile_cell_integral(const QuantileSpec& law, std::uint64_t k, int p,
                              const std::function<double(double)>& g, double rel_tol) {
    if (p < 1 || p > kMaxBits)
        throw std::invalid_argument("quantile_cell_integral: bit count must be in [1, 63]");
    const std::uint64_t n = std::uint64_t{1} << p;
    if (k < 1 || k > n)
        throw std::invalid_argument("quantile_cell_integral: cell index out of range");
    const double a = std::ldexp(static_cast<double>(k - 1), -p);
    const double b = std::ldexp(static_cast<double>(k), -p);
    const double ca = std::ldexp(static_cast<double>(n - k + 1), -p); // 1 - a
    const double cb = std::ldexp(static_cast<double>(n - k), -p);     // 1 - b

    double result = 0.0;
    double err = 0.0;
    double l1 = 0.0;
    if (a < kTailCut || cb < kTailCut) {
        boost::math::quadrature::tanh_sinh<double> ts;
        // xc: signed distance to the nearer endpoint (negative on the left half).
        auto f = [&](double x, double xc) {
            const double c = xc > 0 ? cb + xc : ca + xc;
            const double u = xc < 0 ? a - xc : x;
            return g(law.evaluate(u, c));
        };
        try {
            result = ts.integrate(f, a, b, rel_tol, &err, &l1);
        } catch (const std::exception&) {
            result = std::numeric_limits<double>::infinity(); // singular endpoint value
        }
    } else {
        auto f = [&](double u) { return g(law.evaluate(u, 1.0 - u)); };
        result = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, rel_tol,
                                                                               &err, &l1);
    }
    if (!std::isfinite(result) || !std::isfinite(err) || err > 1e-3 * l1 + 1e-300)
        throw std::domain_error("quantile_cell_integral: cell integral of '" + law.name +
                                "' does not converge (cell " + std::to_string(k) + " of 2^" +
                                std::to_string(p) + ")");
    return result;
}

void validate(const QuantileSpec& law, int grid_bits, double rel_tol) {
    if (!law.quantile)
        throw std::invalid_argument("validate: quantile function missing");
    const std::uint64_t n = std::uint64_t{1} << grid_bits;
    double prev = -std::numeric_limits<double>::infinity();
    for (std::uint64_t k = 1; k <= n; ++k) {
        const DyadicValue d{k, grid_bits};
        const double y = law.evaluate(d.value(), d.complement());
        if (!(y >= prev))
            throw InvariantFailure("validate: quantile of '" + law.name + "' decreases at u = " +
                                   std::to_string(d.value()));
        prev = y;
    }
    CompensatedSum m2;
    for (std::uint64_t k = 1; k <= n; ++k)
        m2 += quantile_cell_integral(law, k, grid_bits, [](double y) { return y * y; }, 1e-10);
    const double got = m2.value();
    if (std::abs(got - law.second_moment) > rel_tol * std::max(std::abs(law.second_moment), 1e-300))
        throw InvariantFailure("validate: second moment of '" + law.name + "' is " +
                               std::to_string(got) + ", declared " +
                               std::to_string(law.second_moment));
}

} // namespace rbit
