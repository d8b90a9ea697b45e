#include "rbit/normal.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rbit/errors.hpp"
#include "rbit/quantile.hpp"
#include "rbit/summation.hpp"

namespace rbit {

namespace {

constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
constexpr double kLogSqrt2Pi = 0.918938533204672741780329736406;
constexpr double kSqrt2Pi = 2.50662827463100050241576528481;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Rational initial guess for u in (0, 1/2], relative error about 1e-9.
double quantile_initial_guess(double u) {
    static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                             -2.759285104469687e+02, 1.383577518672690e+02,
                                             -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                             -1.556989798598866e+02, 6.680131188771972e+01,
                                             -1.328068155288572e+01};
    static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                             -2.400758277161838e+00, -2.549732539343734e+00,
                                             4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                             2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    if (u < p_low) {
        const double q = std::sqrt(-2.0 * std::log(u));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = u - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Positive root of log ccdf(y) = log_c, log_c <= log(1/2).
double upper_quantile_from_log(double log_c) {
    double y;
    if (log_c > -690.0) {
        y = -quantile_initial_guess(std::exp(log_c));
    } else {
        y = std::sqrt(-2.0 * log_c);
        y = std::sqrt(-2.0 * log_c - 2.0 * kLogSqrt2Pi - 2.0 * std::log(y));
    }
    if (y < 0.0)
        y = 0.0;
    for (int it = 0; it < 60; ++it) {
        const double step = (normal_log_ccdf(y) - log_c) * mills_ratio(y);
        y += step;
        if (y < 0.0)
            y = 0.0;
        if (std::abs(step) <= 4e-16 * std::max(1.0, y))
            break;
    }
    return y;
}

// u in (0, 1/2]
double lower_quantile(double u) {
    if (u < 1e-300)
        return -upper_quantile_from_log(std::log(u));
    double x = quantile_initial_guess(u);
    for (int it = 0; it < 2; ++it) {
        const double e = normal_cdf(x) - u;
        const double t = e * kSqrt2Pi * std::exp(0.5 * x * x);
        x -= t / (1.0 + 0.5 * x * t);
    }
    return x;
}

void check_enumerable(int p, const char* what) {
    if (p < 1)
        throw std::invalid_argument(std::string(what) + ": bit count must be positive");
    if (p > kMaxEnumerableBits)
        throw CapacityError(std::string(what) + ": p = " + std::to_string(p) +
                            " exceeds the enumeration limit 26; use the asymptotic surrogate");
}

constexpr int kTableBits = 16;

const std::vector<double>& cached_support(int p) {
    static std::array<std::once_flag, kTableBits + 1> flags;
    static std::array<std::vector<double>, kTableBits + 1> tables;
    std::call_once(flags[static_cast<std::size_t>(p)], [p] {
        const std::uint64_t n = std::uint64_t{1} << p;
        auto& t = tables[static_cast<std::size_t>(p)];
        t.resize(n);
        for (std::uint64_t j = 0; j < n / 2; ++j) {
            const double x = lower_quantile(std::ldexp(static_cast<double>(2 * j + 1), -(p + 1)));
            t[j] = x;
            t[n - 1 - j] = -x;
        }
    });
    return tables[static_cast<std::size_t>(p)];
}

// Quantile of the upper-half grid cell boundary k * 2^-p, expressed through the
// complement count (2^p - k).
double upper_boundary_quantile(std::uint64_t complement_count, int p) {
    if (complement_count == 0)
        return kInf;
    return -lower_quantile(std::ldexp(static_cast<double>(complement_count), -p));
}

} // namespace

double normal_pdf(double x) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

double normal_ccdf(double x) noexcept { return 0.5 * std::erfc(x * std::numbers::sqrt2 / 2.0); }

double mills_ratio(double x) {
    if (x < 0.0)
        throw std::invalid_argument("mills_ratio: x must be non-negative");
    if (x < 8.0)
        return normal_ccdf(x) / normal_pdf(x);
    // Continued fraction 1 / (x + 1 / (x + 2 / (x + 3 / ...))), backward.
    double f = x;
    for (int k = 80; k >= 1; --k)
        f = x + k / f;
    return 1.0 / f;
}

double normal_log_ccdf(double x) noexcept {
    if (x < 30.0)
        return std::log(normal_ccdf(x));
    return -0.5 * x * x - kLogSqrt2Pi + std::log(mills_ratio(x));
}

double normal_quantile(double u) {
    if (!(u > 0.0 && u < 1.0))
        throw std::invalid_argument("normal_quantile: u must lie in (0, 1)");
    if (u > 0.5)
        return -lower_quantile(1.0 - u);
    return lower_quantile(u);
}

double normal_quantile_upper_tail(double t) {
    if (!(t >= 1.0))
        throw std::invalid_argument("normal_quantile_upper_tail: t must be >= 1");
    if (t == 1.0)
        return 0.0;
    return upper_quantile_from_log(-t * std::numbers::ln2);
}

double normal_quantile_complement(double c) {
    if (!(c > 0.0 && c < 1.0))
        throw std::invalid_argument("normal_quantile_complement: c must lie in (0, 1)");
    if (c > 0.5)
        return lower_quantile(1.0 - c);
    return -lower_quantile(c);
}

double normal_quantile(const DyadicValue& d) {
    if (d.precision <= kTableBits)
        return cached_support(d.precision)[d.bits()];
    if (d.upper_half())
        return -lower_quantile(d.complement());
    return lower_quantile(d.value());
}

BitNormal::BitNormal(int p) : bits_(p) {
    check_enumerable(p, "BitNormal");
    const std::uint64_t n = std::uint64_t{1} << p;
    support_.resize(n);
    for (std::uint64_t j = 0; j < n / 2; ++j) {
        const double x = lower_quantile(std::ldexp(static_cast<double>(2 * j + 1), -(p + 1)));
        support_[j] = x;
        support_[n - 1 - j] = -x;
    }
}

double BitNormal::mean() const {
    CompensatedSum s;
    for (double x : support_)
        s += x;
    return s.value() / static_cast<double>(support_.size());
}

double BitNormal::moment(int r) const {
    CompensatedSum s;
    for (double x : support_)
        s += std::pow(std::abs(x), r);
    return s.value() / static_cast<double>(support_.size());
}

double bit_normal_sample(BitSource& src, int p) {
    return normal_quantile(sample_dyadic_uniform(src, p));
}

DyadicValue bit_normal_cell(double y, int p) {
    if (p < 1 || p > kMaxBits)
        throw std::invalid_argument("bit_normal_cell: bit count must be in [1, 63]");
    const std::uint64_t n = std::uint64_t{1} << p;
    if (y <= 0.0) {
        const auto j = static_cast<std::uint64_t>(std::floor(std::ldexp(normal_cdf(y), p)));
        return DyadicValue{std::min(j, n - 1) + 1, p};
    }
    const double scaled = std::ceil(std::ldexp(normal_ccdf(y), p));
    const auto up = static_cast<std::uint64_t>(std::max(scaled, 1.0));
    return DyadicValue{n - up + 1, p};
}

double normal_cell_sq_error(double a, double b, double x) {
    if (!(a < b))
        return 0.0;
    if (a == -kInf && b == kInf)
        return 1.0 + x * x;
    if (a == -kInf)
        return normal_cell_sq_error(-b, kInf, -x);
    if (b == kInf) {
        // (1 + x^2)(1 - cdf(a)) + (a - 2x) pdf(a)
        return (1.0 + x * x) * normal_ccdf(a) + (a - 2.0 * x) * normal_pdf(a);
    }
    const double sa = a - x;
    const double sb = b - x;
    auto f = [x](double s) { return s * s * normal_pdf(x + s); };
    return boost::math::quadrature::gauss<double, 10>::integrate(f, sa, sb);
}

double bit_normal_mse(int p) {
    check_enumerable(p, "bit_normal_mse");
    const std::uint64_t n = std::uint64_t{1} << p;
    const std::uint64_t half = n / 2;
    CompensatedSum total;
    // Upper cells k = half+1 .. n; lower edge at z_{k-1}, complement count n-k+1.
    double a = 0.0;
    for (std::uint64_t k = half + 1; k <= n; ++k) {
        const double b = upper_boundary_quantile(n - k, p);
        const double x = -lower_quantile(std::ldexp(static_cast<double>(2 * (n - k) + 1), -(p + 1)));
        total += normal_cell_sq_error(a, b, x);
        a = b;
    }
    return 2.0 * total.value();
}

namespace {
// 2^26 * 26 * bit_normal_mse(26), regenerated by `rbit-experiments normal-error
// --pmin 26 --pmax 26` (scaled_const column); cross-checked in test_normal.
constexpr double kScaledMseAt26 = 1.6984109083535659;
} // namespace

double bit_normal_mse_asymptotic(int p) {
    if (p < 1)
        throw std::invalid_argument("bit_normal_mse_asymptotic: bit count must be positive");
    return kScaledMseAt26 * std::ldexp(1.0, -p) / static_cast<double>(p);
}

MseValue bit_normal_mse_any(int p) {
    if (p <= kMaxEnumerableBits) {
        // Small precisions come up constantly in error sums; memoise them.
        static std::array<std::once_flag, kMaxEnumerableBits + 1> flags;
        static std::array<double, kMaxEnumerableBits + 1> values{};
        if (p < 1)
            throw std::invalid_argument("bit_normal_mse_any: bit count must be positive");
        std::call_once(flags[static_cast<std::size_t>(p)],
                       [p] { values[static_cast<std::size_t>(p)] = bit_normal_mse(p); });
        return {values[static_cast<std::size_t>(p)], true};
    }
    return {bit_normal_mse_asymptotic(p), false};
}

double bit_normal_moment(int p, int r) {
    check_enumerable(p, "bit_normal_moment");
    if (r != 2 && r != 4 && r != 6 && r != 8)
        throw std::invalid_argument("bit_normal_moment: r must be one of 2, 4, 6, 8");
    const std::uint64_t n = std::uint64_t{1} << p;
    CompensatedSum s;
    for (std::uint64_t j = 0; j < n / 2; ++j) {
        const double x = lower_quantile(std::ldexp(static_cast<double>(2 * j + 1), -(p + 1)));
        s += std::pow(x, r);
    }
    return 2.0 * s.value() / static_cast<double>(n);
}

std::vector<double> optimal_points(const QuantileSpec& law, int p) {
    check_enumerable(p, "optimal_points");
    const std::uint64_t n = std::uint64_t{1} << p;
    std::vector<double> pts(n);
    const double scale = std::ldexp(1.0, p);
    switch (law.family) {
    case LawFamily::standard_normal: {
        // 2^p (pdf(a) - pdf(b)) with the difference formed through expm1.
        const std::uint64_t half = n / 2;
        double a = 0.0;
        for (std::uint64_t k = half + 1; k <= n; ++k) {
            const double b = upper_boundary_quantile(n - k, p);
            const double pa = normal_pdf(a);
            const double diff = b == kInf ? pa : -pa * std::expm1(-0.5 * (b - a) * (b + a));
            const double x = scale * diff;
            pts[k - 1] = x;
            pts[n - k] = -x;
            a = b;
        }
        break;
    }
    case LawFamily::uniform:
        for (std::uint64_t k = 1; k <= n; ++k)
            pts[k - 1] = law.lower + (law.upper - law.lower) * DyadicValue{k, p}.value();
        break;
    case LawFamily::general:
        for (std::uint64_t k = 1; k <= n; ++k)
            pts[k - 1] = scale * quantile_cell_integral(law, k, p, [](double y) { return y; }, 1e-12);
        break;
    }
    return pts;
}

double log_exp_half_square_integral(double a) {
    if (a < 0.0)
        throw std::invalid_argument("exp_half_square_integral: a must be non-negative");
    if (a == 0.0)
        return -kInf;
    // h(a) = exp(a^2/2) * integral of exp(-(a-x)(a+x)/2) over [0, a]
    auto f = [a](double x) { return std::exp(-0.5 * (a - x) * (a + x)); };
    double err = 0.0;
    const double scaled =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, a, 15, 1e-12, &err);
    return 0.5 * a * a + std::log(scaled);
}

double exp_half_square_integral(double a) {
    if (a > 40.0)
        throw CapacityError("exp_half_square_integral: a exceeds the overflow guard 40");
    if (a == 0.0)
        return 0.0;
    const double lh = log_exp_half_square_integral(a);
    if (lh > std::log(std::numeric_limits<double>::max()))
        throw CapacityError("exp_half_square_integral: value overflows; use the log form");
    return std::exp(lh);
}

double upper_tail_second_moment(double a) {
    if (a < 0.0)
        throw std::invalid_argument("upper_tail_second_moment: a must be non-negative");
    // (1 + a^2)(1 - cdf(a)) - a pdf(a) = pdf(a) ((1 + a^2) R(a) - a)
    return normal_pdf(a) * ((1.0 + a * a) * mills_ratio(a) - a);
}

std::vector<AppendixRatios> appendix_ratios(std::span<const double> p_grid) {
    constexpr double ln2 = std::numbers::ln2;
    const double ln4 = 2.0 * ln2;
    std::vector<AppendixRatios> out;
    out.reserve(p_grid.size());
    for (double p : p_grid) {
        if (!(p >= 1.0))
            throw std::invalid_argument("appendix_ratios: grid values must be >= 1");
        AppendixRatios r{};
        r.p = p;
        const double a = normal_quantile_upper_tail(p);
        r.quantile_growth = a / std::sqrt(ln4 * p);

        r.h_ratio = std::exp(-p * ln2 + std::log(p) + log_exp_half_square_integral(a)) * kSqrt2Pi * ln4;

        const double a1 = normal_quantile_upper_tail(p + 1.0);
        r.g_ratio = upper_tail_second_moment(a1) * std::exp(p * ln2) * p * ln4;

        // x = 2^-p: pdf(quantile(1 - x)) / (sqrt 2 * x * sqrt(ln(1/x)))
        r.density_ratio = std::exp(-0.5 * a * a - kLogSqrt2Pi + p * ln2) /
                          (std::numbers::sqrt2 * std::sqrt(p * ln2));

        // a' = 1 - 3 * 2^-(p+2), b' = 1 - 2^-(p+1); 1 - a' = 3 * 2^-(p+2), b' - a' = 2^-(p+2)
        const double ta = p + 2.0 - std::log2(3.0);
        const double qb = a1;
        const double qa = normal_quantile_upper_tail(ta);
        r.mean_value_quotient = (qb - qa) * 3.0 * std::sqrt(ta * ln2);
        out.push_back(r);
    }
    return out;
}

} // namespace rbit
