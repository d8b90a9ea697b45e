#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace rbit {

enum class LawFamily { general, standard_normal, uniform };

/// A one-dimensional law given by its quantile function.
///
/// `upper_tail`, when present, evaluates the quantile at 1 - 2^-t and is used
/// for cells that touch 1, where 1 - u cannot be formed accurately.
struct QuantileSpec {
    std::string name;
    std::function<double(double)> quantile;
    std::function<double(double)> upper_tail;
    double second_moment = 0.0;
    LawFamily family = LawFamily::general;
    double lower = 0.0; // uniform family only
    double upper = 1.0;

    static QuantileSpec standard_normal();
    static QuantileSpec uniform(double lo = 0.0, double hi = 1.0);

    /// Quantile at u, with `complement` = 1 - u supplied by the caller when it
    /// is known more accurately than 1 - u.
    double evaluate(double u, double complement) const;
};

/// Integral of g(quantile(u)) over the k-th cell [(k-1) 2^-p, k 2^-p].
///
/// Cells within 2^-40 of an endpoint are integrated with tanh-sinh and the
/// tail parametrisation; interior cells with adaptive Gauss-Kronrod.
/// Throws std::domain_error when the integral diverges.
double quantile_cell_integral(const QuantileSpec& law, std::uint64_t k, int p,
                              const std::function<double(double)>& g, double rel_tol);

/// Checks monotonicity on a grid and the stored second moment; throws
/// InvariantFailure on violation.
void validate(const QuantileSpec& law, int grid_bits = 10, double rel_tol = 1e-6);

} // namespace rbit
