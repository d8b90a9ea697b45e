#pragma once

#include <cstdint>
#include <vector>

#include "rbit/bitcore.hpp"

namespace rbit {

/// Eigenvalues of a diagonal covariance, either c i^-beta ln(i+1)^-alpha
/// (the log is shifted by one so the first term is finite) or an explicit
/// finite sequence.
struct EigenSpec {
    double beta = 2.0;
    double alpha = 0.0;
    double scale = 1.0;
    std::vector<double> explicit_values; ///< non-empty selects explicit mode

    static EigenSpec analytic(double beta, double alpha, double scale = 1.0);
    static EigenSpec from_values(std::vector<double> values);

    bool is_analytic() const noexcept { return explicit_values.empty(); }
    double lambda(std::uint64_t i) const;
};

/// Coordinates of a truncated random-bit Gaussian element.
struct KLVector {
    std::uint64_t m = 0;
    std::vector<double> coeffs;        ///< sqrt(lambda_i) * Y_i^(p_i)
    std::vector<DyadicValue> retained; ///< uniforms behind each coordinate
    BitAllocation allocation;

    double norm_sq() const;
};

/// p_i = ceil(max(beta log2(m/i) + max(alpha, 0) log2(log2(m+1) / log2(i+1)), 1)).
/// std::invalid_argument in explicit mode.
BitAllocation allocation_kl(std::uint64_t m, const EigenSpec& spec);

KLVector sample_kl(BitSource& src, std::uint64_t m, const EigenSpec& spec);

/// Truncated-precision version of given uniforms (one per coordinate).
KLVector kl_from_uniforms(std::uint64_t m, const EigenSpec& spec,
                          const std::vector<DyadicValue>& uniforms);

/// Keeps the first `coarse_m` coordinates, re-truncated to allocation_kl(coarse_m).
/// InvariantFailure if the coarse allocation asks for more bits than were drawn.
KLVector coarsen_kl(const KLVector& x, std::uint64_t coarse_m, const EigenSpec& spec);

struct KLError {
    double value;
    double lower; ///< certified interval from the tail-remainder bounds
    double upper;
    bool exact;   ///< false when some p_i used the asymptotic mse surrogate
};

/// sum_{i<=m} mse(p_i) lambda_i + sum_{i>m} lambda_i.
KLError kl_error_sq(std::uint64_t m, const EigenSpec& spec);

/// sum_{i>m} lambda_i with its certified interval.
KLError kl_tail(std::uint64_t m, const EigenSpec& spec);

} // namespace rbit
