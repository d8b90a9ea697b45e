#pragma once

#include <cstdint>
#include <vector>

#include "rbit/bitcore.hpp"
#include "rbit/functionals.hpp"
#include "rbit/gausskl.hpp"

namespace rbit {

struct MLMCParams {
    double eps = 0.0;
    double beta = 0.0;
    double alpha = 0.0;
    double z = 0.0;
    int L = 0;
    double K = 0.0;
    std::vector<std::uint64_t> N; ///< N[l-1] replications at level l
};

/// Level count and replication numbers for accuracy eps, 0 < eps <= e^-2.
MLMCParams mlmc_params(double eps, double beta, double alpha);

/// sum_l 2^l N_l.
double theoretical_cost(const MLMCParams& params);

struct MLMCModel {
    enum class Kind { bridge, kl };
    Kind kind = Kind::bridge;
    EigenSpec spec;

    static MLMCModel bridge() { return {}; }
    static MLMCModel kl(EigenSpec s) { return {Kind::kl, std::move(s)}; }

    /// Dimension of the level-l subspace: 2^l - 1 (bridge) or 2^l (kl).
    std::uint64_t dimension(int level) const;
    /// Bits of one level-l sample.
    std::uint64_t bits(int level) const;
};

struct CostLedger {
    std::uint64_t bits = 0;
    std::uint64_t oracle_cost = 0; ///< sum of subspace dimensions over functional evaluations
    std::uint64_t coeff_ops = 0;   ///< coefficients generated, fine and coarse

    std::uint64_t total() const noexcept { return bits + oracle_cost; }
    CostLedger& operator+=(const CostLedger& o) noexcept {
        bits += o.bits;
        oracle_cost += o.oracle_cost;
        coeff_ops += o.coeff_ops;
        return *this;
    }
};

struct LevelSummary {
    int level = 0;
    std::uint64_t n = 0;
    double mean = 0.0;     ///< of f(fine) - f(coarse), or f(fine) at level 1
    double variance = 0.0;
};

struct MLMCResult {
    double estimate = 0.0;
    CostLedger ledger;
    std::vector<LevelSummary> levels;
    std::vector<std::uint64_t> source_bits; ///< per source, parallel mode only
};

/// Telescoped estimator; the coarse term of each difference re-truncates the
/// fine sample's uniforms. Throws InvariantFailure if the bits drawn differ
/// from sum_l N_l |p(level l)|.
MLMCResult mlmc_estimate(const LipFunctional& f, const MLMCModel& model, const MLMCParams& params,
                         BitSource& src);

/// Same estimator with every level split into chunks of `chunk` replications,
/// chunk c of level l drawing from BitSource(derive_seed(base_seed, l, c)).
/// The result does not depend on `threads`.
MLMCResult mlmc_estimate_parallel(const LipFunctional& f, const MLMCModel& model,
                                  const MLMCParams& params, std::uint64_t base_seed,
                                  std::uint64_t chunk = 1024, unsigned threads = 0);

struct PlainMCResult {
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
    std::uint64_t bits = 0;
};

/// Single-level Monte Carlo of f at one level.
PlainMCResult plain_mc(const LipFunctional& f, const MLMCModel& model, int level, std::uint64_t n,
                       BitSource& src);

} // namespace rbit
