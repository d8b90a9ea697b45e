#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rbit/bitcore.hpp"
#include "rbit/bridge.hpp"

namespace rbit {

/// Scalar autonomous SDE dX = a(X) dt + b(X) dW on [0, 1].
///
/// The coefficients are expected to be differentiable with bounded, Lipschitz
/// continuous derivatives; this is not checked.
struct SDEModel {
    std::function<double(double)> drift;
    std::function<double(double)> diffusion;
    std::function<double(double)> diffusion_derivative;
    double x0 = 0.0;
    /// Optional strong solution X(t) as a function of (t, W(t)).
    std::function<double(double, double)> exact_solution;

    /// Throws std::invalid_argument if b(x0) == 0 or a coefficient is missing.
    void validate() const;

    static SDEModel geometric(double mu, double sigma, double x0);
    static SDEModel additive(double x0 = 0.0); ///< a = 0, b = 1
};

struct MilsteinPath {
    std::uint64_t m = 0;
    std::vector<double> values;      ///< at t_k = k / m, k = 0 .. m
    std::vector<double> increments;  ///< normalized increments used per step
    int bits = 0;                    ///< 0 for real-valued increments, else q
    std::vector<DyadicValue> retained;
};

/// X <- X + a(X)/m + b(X) m^-1/2 Y + (b b')(X) (Y^2 - 1) / (2m).
/// NumericFailure on a non-finite state.
MilsteinPath milstein_path(const SDEModel& model, std::uint64_t m, std::span<const double> normals);

/// Milstein driven by q-bit normals; consumes exactly m q bits.
MilsteinPath rbit_milstein_path(BitSource& src, const SDEModel& model, std::uint64_t m, int q);

/// m (q + 2^(level+2) - 2 level - 4).
std::uint64_t sde_bit_cost(std::uint64_t m, int q, int level);

/// Bit skeleton plus one random-bit bridge per step.
struct RefinedPath {
    MilsteinPath skeleton;
    std::vector<BridgePath> bridges;
    std::vector<double> scales; ///< b(X(t_{k-1})) m^-1/2

    double eval(double t) const;
    /// Exact piecewise-linear representation on m 2^level intervals.
    PiecewiseLinear piecewise() const;
};

RefinedPath sample_refined_path(BitSource& src, const SDEModel& model, std::uint64_t m, int q,
                                int level);

/// Draws a refined path (c(m, q, level) bits) and evaluates it on a sorted grid in [0, 1].
std::vector<double> refined_path_eval(BitSource& src, const SDEModel& model, std::uint64_t m,
                                      int q, int level, std::span<const double> grid);

enum class ReferenceMode { automatic, exact_solution, fine_milstein };

struct StrongErrorResult {
    double rms_error = 0.0;
    double std_error = 0.0;          ///< of the mean squared error
    std::uint64_t reps = 0;
    std::uint64_t scheme_bits = 0;   ///< bits feeding the random-bit scheme
    std::uint64_t reference_bits = 0;///< extra bits spent on the coupled reference
};

/// RMS over replications of max_k |X(t_k) - X^(q)_m(t_k)|, with the reference
/// coupled through shared uniforms (exact solution) or shared Brownian
/// increments (64x Milstein).
StrongErrorResult strong_error_experiment(const SDEModel& model, std::uint64_t m, int q,
                                          std::uint64_t reps, std::uint64_t seed,
                                          ReferenceMode mode = ReferenceMode::automatic);

} // namespace rbit
