#include "rbit/wasserstein.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rbit/errors.hpp"
#include "rbit/normal.hpp"
#include "rbit/summation.hpp"

namespace rbit {

namespace {

int log2_exact(std::size_t n) {
    if (n == 0 || !std::has_single_bit(n))
        throw std::invalid_argument("w2_uniform: number of atoms must be a power of two");
    return std::countr_zero(n);
}

// Quantile of j * 2^-p, j in [0, 2^p].
double normal_grid_quantile(std::uint64_t j, int p) {
    const std::uint64_t n = std::uint64_t{1} << p;
    if (j == 0)
        return -std::numeric_limits<double>::infinity();
    if (j == n)
        return std::numeric_limits<double>::infinity();
    if (2 * j == n)
        return 0.0;
    if (2 * j < n)
        return normal_quantile(std::ldexp(static_cast<double>(j), -p));
    return -normal_quantile(std::ldexp(static_cast<double>(n - j), -p));
}

} // namespace

DiscreteUniform::DiscreteUniform(std::vector<double> points) : points_(std::move(points)) {
    if (points_.empty())
        throw std::invalid_argument("DiscreteUniform: no points");
    if (!std::is_sorted(points_.begin(), points_.end()))
        throw std::invalid_argument("DiscreteUniform: points must be sorted");
}

double w2_uniform(const QuantileSpec& law, const DiscreteUniform& nu) {
    const int p = log2_exact(nu.size());
    if (p < 1)
        throw std::invalid_argument("w2_uniform: need at least two atoms");
    if (p > kMaxEnumerableBits)
        throw CapacityError("w2_uniform: more than 2^26 cells");
    const auto pts = nu.points();
    const std::uint64_t n = nu.size();
    CompensatedSum total;
    switch (law.family) {
    case LawFamily::standard_normal: {
        double a = normal_grid_quantile(0, p);
        for (std::uint64_t k = 1; k <= n; ++k) {
            const double b = normal_grid_quantile(k, p);
            total += normal_cell_sq_error(a, b, pts[k - 1]);
            a = b;
        }
        break;
    }
    case LawFamily::uniform: {
        const double width = law.upper - law.lower;
        for (std::uint64_t k = 1; k <= n; ++k) {
            const double ya = law.lower + width * std::ldexp(static_cast<double>(k - 1), -p);
            const double yb = law.lower + width * std::ldexp(static_cast<double>(k), -p);
            const double da = ya - pts[k - 1];
            const double db = yb - pts[k - 1];
            total += (db * db * db - da * da * da) / (3.0 * width);
        }
        break;
    }
    case LawFamily::general:
        for (std::uint64_t k = 1; k <= n; ++k) {
            const double x = pts[k - 1];
            total += quantile_cell_integral(
                law, k, p, [x](double y) { return (y - x) * (y - x); }, 1e-10);
        }
        break;
    }
    return std::sqrt(std::max(total.value(), 0.0));
}

double rbit_error(const QuantileSpec& law, int p) {
    return w2_uniform(law, DiscreteUniform(optimal_points(law, p)));
}

double w2_empirical(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("w2_empirical: samples differ in length");
    if (a.empty())
        throw std::invalid_argument("w2_empirical: empty samples");
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    CompensatedSum s;
    for (std::size_t i = 0; i < sa.size(); ++i)
        s += (sa[i] - sb[i]) * (sa[i] - sb[i]);
    return std::sqrt(s.value() / static_cast<double>(sa.size()));
}

} // namespace rbit
