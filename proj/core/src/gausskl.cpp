#include "rbit/gausskl.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "rbit/errors.hpp"
#include "rbit/normal.hpp"
#include "rbit/summation.hpp"

namespace rbit {

EigenSpec EigenSpec::analytic(double beta, double alpha, double scale) {
    if (!(beta > 1.0))
        throw std::invalid_argument("EigenSpec: beta must exceed 1");
    if (!(scale > 0.0))
        throw std::invalid_argument("EigenSpec: scale must be positive");
    EigenSpec s;
    s.beta = beta;
    s.alpha = alpha;
    s.scale = scale;
    return s;
}

EigenSpec EigenSpec::from_values(std::vector<double> values) {
    if (values.empty())
        throw std::invalid_argument("EigenSpec: empty eigenvalue sequence");
    for (double v : values)
        if (!(v >= 0.0))
            throw std::invalid_argument("EigenSpec: eigenvalues must be non-negative");
    EigenSpec s;
    s.explicit_values = std::move(values);
    return s;
}

double EigenSpec::lambda(std::uint64_t i) const {
    if (i == 0)
        throw std::invalid_argument("EigenSpec::lambda: index starts at 1");
    if (!is_analytic())
        return i <= explicit_values.size() ? explicit_values[i - 1] : 0.0;
    const double x = static_cast<double>(i);
    return scale * std::pow(x, -beta) * std::pow(std::log(x + 1.0), -alpha);
}

double KLVector::norm_sq() const {
    CompensatedSum s;
    for (double c : coeffs)
        s += c * c;
    return s.value();
}

BitAllocation allocation_kl(std::uint64_t m, const EigenSpec& spec) {
    if (m == 0)
        throw std::invalid_argument("allocation_kl: m must be positive");
    if (!spec.is_analytic())
        throw std::invalid_argument("allocation_kl: needs the analytic (beta, alpha) model");
    const double dm = static_cast<double>(m);
    const double log_m1 = std::log2(dm + 1.0);
    const double a = std::max(spec.alpha, 0.0);
    BitAllocation out;
    out.bits.resize(m);
    for (std::uint64_t i = 1; i <= m; ++i) {
        const double di = static_cast<double>(i);
        double pt = spec.beta * std::log2(dm / di);
        if (a > 0.0)
            pt += a * std::log2(log_m1 / std::log2(di + 1.0));
        pt = std::max(pt, 1.0);
        // Values that are integers up to rounding must not be bumped up.
        const double r = std::round(pt);
        if (std::abs(pt - r) < 1e-9)
            pt = r;
        const double c = std::ceil(pt);
        if (c > kMaxBits)
            throw CapacityError("allocation_kl: p_" + std::to_string(i) + " exceeds 63 bits");
        out.bits[i - 1] = static_cast<int>(c);
        out.total += static_cast<std::uint64_t>(c);
    }
    return out;
}

namespace {

KLVector build_kl(std::uint64_t m, const EigenSpec& spec, BitAllocation alloc,
                  const std::vector<DyadicValue>& source, bool retruncate) {
    KLVector x;
    x.m = m;
    x.allocation = std::move(alloc);
    x.coeffs.resize(m);
    x.retained.resize(m);
    for (std::uint64_t i = 0; i < m; ++i) {
        const int p = x.allocation[i];
        if (retruncate && p > source[i].precision)
            throw InvariantFailure("coarsen_kl: coarse allocation p_" + std::to_string(i + 1) +
                                   " = " + std::to_string(p) + " exceeds the fine precision " +
                                   std::to_string(source[i].precision));
        const DyadicValue u = truncate(source[i], p);
        x.retained[i] = u;
        x.coeffs[i] = std::sqrt(spec.lambda(i + 1)) * normal_quantile(u);
    }
    return x;
}

// Integral of lambda(x) over [from, inf).
double tail_integral(const EigenSpec& spec, double from) {
    auto f = [&](double t) {
        const double x = from + t;
        return spec.scale * std::pow(x, -spec.beta) * std::pow(std::log(x + 1.0), -spec.alpha);
    };
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate(f, 1e-12);
}

} // namespace

KLVector sample_kl(BitSource& src, std::uint64_t m, const EigenSpec& spec) {
    BitAllocation alloc = allocation_kl(m, spec);
    KLVector x;
    x.m = m;
    x.coeffs.resize(m);
    x.retained.resize(m);
    for (std::uint64_t i = 0; i < m; ++i) {
        const DyadicValue u = sample_dyadic_uniform(src, alloc[i]);
        x.retained[i] = u;
        x.coeffs[i] = std::sqrt(spec.lambda(i + 1)) * normal_quantile(u);
    }
    x.allocation = std::move(alloc);
    return x;
}

KLVector kl_from_uniforms(std::uint64_t m, const EigenSpec& spec,
                          const std::vector<DyadicValue>& uniforms) {
    if (uniforms.size() != m)
        throw std::invalid_argument("kl_from_uniforms: expected one uniform per coordinate");
    return build_kl(m, spec, allocation_kl(m, spec), uniforms, false);
}

KLVector coarsen_kl(const KLVector& x, std::uint64_t coarse_m, const EigenSpec& spec) {
    if (coarse_m == 0 || coarse_m >= x.m)
        throw std::invalid_argument("coarsen_kl: target dimension must be in [1, m)");
    return build_kl(coarse_m, spec, allocation_kl(coarse_m, spec), x.retained, true);
}

KLError kl_tail(std::uint64_t m, const EigenSpec& spec) {
    if (!spec.is_analytic()) {
        CompensatedSum s;
        for (std::uint64_t i = m + 1; i <= spec.explicit_values.size(); ++i)
            s += spec.explicit_values[i - 1];
        return {s.value(), s.value(), s.value(), true};
    }
    CompensatedSum direct;
    std::uint64_t n = m;
    // Sum directly until the increment is below 1e-6 of the partial tail and
    // the terms have started to decrease.
    for (;;) {
        ++n;
        const double term = spec.lambda(n);
        direct += term;
        if (term < 1e-6 * direct.value() && spec.lambda(n + 1) <= term)
            break;
    }
    // Remainder sum_{i>n} lambda_i lies between the integrals from n+1 and n.
    const double lo = tail_integral(spec, static_cast<double>(n + 1));
    const double hi = tail_integral(spec, static_cast<double>(n));
    const double d = direct.value();
    return {d + 0.5 * (lo + hi), d + lo, d + hi, true};
}

KLError kl_error_sq(std::uint64_t m, const EigenSpec& spec) {
    const BitAllocation alloc = allocation_kl(m, spec);
    CompensatedSum head;
    bool exact = true;
    for (std::uint64_t i = 1; i <= m; ++i) {
        const MseValue e = bit_normal_mse_any(alloc[i - 1]);
        exact = exact && e.exact;
        head += e.value * spec.lambda(i);
    }
    const KLError t = kl_tail(m, spec);
    const double h = head.value();
    return {h + t.value, h + t.lower, h + t.upper, exact};
}

} // namespace rbit
