#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rbit/bitcore.hpp"

namespace rbit {

struct QuantileSpec;

// ---------------------------------------------------------------------------
// Standard normal kernel.
//
// The upper tail is always evaluated through complementary functions so that
// relative accuracy is kept far into the tails; nothing here computes 1 - u
// for u close to one.
// ---------------------------------------------------------------------------

double normal_pdf(double x) noexcept;
double normal_cdf(double x) noexcept;
/// 1 - cdf(x) without cancellation.
double normal_ccdf(double x) noexcept;
/// log(1 - cdf(x)), finite for every finite x.
double normal_log_ccdf(double x) noexcept;
/// Mills ratio (1 - cdf(x)) / pdf(x) for x >= 0.
double mills_ratio(double x);

/// Inverse distribution function on (0, 1). Exactly antisymmetric:
/// normal_quantile(1 - u) == -normal_quantile(u) whenever 1 - u is exact.
double normal_quantile(double u);

/// Quantile at 1 - 2^-t, t >= 1 (t real). Solved on log scale, so t may be
/// far beyond the range where 2^-t is representable.
double normal_quantile_upper_tail(double t);

/// Quantile at 1 - c for a small complement c in (0, 1).
double normal_quantile_complement(double c);

/// Quantile of a grid point, using the mirrored index in the upper half.
/// Small precisions are served from cached support tables.
double normal_quantile(const DyadicValue& d);

// ---------------------------------------------------------------------------
// Random-bit normal: quantile of a uniform point on the p-bit dyadic grid.
// ---------------------------------------------------------------------------

inline constexpr int kMaxEnumerableBits = 26;

/// Uniform law on the 2^p quantiles of the dyadic midpoint grid.
class BitNormal {
public:
    explicit BitNormal(int p);

    int bits() const noexcept { return bits_; }
    std::span<const double> support() const noexcept { return support_; }
    double mean() const;
    double moment(int r) const;

private:
    int bits_;
    std::vector<double> support_;
};

/// Draws p bits and maps the grid point through the quantile.
double bit_normal_sample(BitSource& src, int p);

/// The grid cell containing cdf(y) at precision p, i.e. the coupled
/// random-bit version of an exact normal draw y.
DyadicValue bit_normal_cell(double y, int p);

/// E|Y - Y^(p)|^2, enumerated exactly over the 2^(p-1) upper cells.
/// Throws CapacityError for p > 26.
double bit_normal_mse(int p);

/// Extrapolated surrogate for p beyond the enumeration limit, using the
/// scaled constant 2^p * p * mse(p) frozen at p = 26.
double bit_normal_mse_asymptotic(int p);

struct MseValue {
    double value;
    bool exact;
};
/// Exact value up to p = 26, flagged surrogate beyond.
MseValue bit_normal_mse_any(int p);

/// 2^-p * sum_k |x_k|^r over the support; r in {2, 4, 6, 8}.
double bit_normal_moment(int p, int r);

/// Integral of (y - x)^2 * pdf(y) over [a, b]; a may be -inf, b may be +inf.
/// Bounded cells are integrated in the offset s = y - x so the result keeps
/// full relative accuracy on narrow cells.
double normal_cell_sq_error(double a, double b, double x);

/// Cell averages of the quantile on the uniform p-bit partition; these are
/// the best 2^p equal-weight support points. Normal and uniform laws use
/// closed forms, anything else adaptive quadrature (tolerance 1e-12).
std::vector<double> optimal_points(const QuantileSpec& law, int p);

// ---------------------------------------------------------------------------
// Tail asymptotics.
// ---------------------------------------------------------------------------

/// h(a) = integral of exp(x^2 / 2) over [0, a]; a <= 40, CapacityError when
/// the value overflows a double.
double exp_half_square_integral(double a);
/// log h(a), usable beyond the overflow guard.
double log_exp_half_square_integral(double a);

/// g(a) = integral of (x - a)^2 * pdf(x) over [a, inf), closed form.
double upper_tail_second_moment(double a);

/// Five quotients that tend to one (i-iv) or stay bounded below (v).
struct AppendixRatios {
    double p;
    double quantile_growth;    ///< quantile(1-2^-p) / sqrt(p ln 4)
    double h_ratio;            ///< 2^-p p h(quantile(1-2^-p)) sqrt(2 pi) ln 4
    double g_ratio;            ///< g(quantile(1-2^-(p+1))) 2^p p ln 4
    double density_ratio;      ///< pdf(quantile(1-x)) / (sqrt(2) x sqrt(ln 1/x)), x = 2^-p
    double mean_value_quotient;///< quantile increment over its lower bound
};

std::vector<AppendixRatios> appendix_ratios(std::span<const double> p_grid);

} // namespace rbit
