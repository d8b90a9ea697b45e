#include "rbit/mlmc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "rbit/bridge.hpp"
#include "rbit/errors.hpp"
#include "rbit/summation.hpp"

namespace rbit {

MLMCParams mlmc_params(double eps, double beta, double alpha) {
    if (!(eps > 0.0 && eps <= std::exp(-2.0)))
        throw std::invalid_argument("mlmc_params: eps must lie in (0, e^-2]");
    if (!(beta > 1.0))
        throw std::invalid_argument("mlmc_params: beta must exceed 1");
    MLMCParams p;
    p.eps = eps;
    p.beta = beta;
    p.alpha = alpha;
    const double inv = 1.0 / eps;
    const double log_inv = std::log(inv);
    p.z = 1.0 + inv * std::pow(log_inv, -alpha / 2.0);
    p.L = static_cast<int>(std::ceil(2.0 / (beta - 1.0) * std::log2(p.z)));
    p.L = std::max(p.L, 1);

    double factor = 1.0;
    if (beta == 2.0 && alpha != 2.0)
        factor = std::pow(log_inv, std::max(0.0, 1.0 - alpha / 2.0));
    else if (beta == 2.0)
        factor = std::log(log_inv);
    else if (beta < 2.0)
        factor = std::pow(log_inv, alpha / (2.0 * (1.0 - beta)));
    p.K = std::pow(eps, -std::max(2.0, beta / (beta - 1.0))) * factor;

    p.N.resize(static_cast<std::size_t>(p.L));
    for (int l = 1; l <= p.L; ++l) {
        const double n = std::exp2(-l * beta / 2.0) * std::pow(static_cast<double>(l), -alpha / 2.0) * p.K;
        p.N[static_cast<std::size_t>(l - 1)] = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(n)));
    }
    return p;
}

double theoretical_cost(const MLMCParams& params) {
    double c = 0.0;
    for (int l = 1; l <= params.L; ++l)
        c += std::ldexp(static_cast<double>(params.N[static_cast<std::size_t>(l - 1)]), l);
    return c;
}

std::uint64_t MLMCModel::dimension(int level) const {
    const std::uint64_t n = std::uint64_t{1} << level;
    return kind == Kind::bridge ? n - 1 : n;
}

std::uint64_t MLMCModel::bits(int level) const {
    if (kind == Kind::bridge)
        return bridge_bits(level);
    return allocation_kl(std::uint64_t{1} << level, spec).total;
}

namespace {

void check_model(const MLMCModel& model, const MLMCParams& params) {
    if (model.kind == MLMCModel::Kind::bridge) {
        if (params.beta != 2.0 || params.alpha != 0.0)
            throw std::invalid_argument("mlmc: the bridge model needs beta = 2, alpha = 0");
        if (params.L > 25)
            throw CapacityError("mlmc: bridge level " + std::to_string(params.L) + " exceeds 25");
    } else if (!model.spec.is_analytic()) {
        throw std::invalid_argument("mlmc: the kl model needs analytic eigenvalues");
    }
}

// One replication of level l; returns the difference and adds its costs.
double level_sample(const LipFunctional& f, const MLMCModel& model, int l, BitSource& src,
                    CostLedger& ledger) {
    const std::uint64_t fine_dim = model.dimension(l);
    try {
        if (model.kind == MLMCModel::Kind::bridge) {
            const BridgePath fine = sample_bridge(src, l);
            ledger.coeff_ops += fine.coeffs.size();
            ledger.oracle_cost += fine_dim;
            const double ff = f(fine);
            if (l == 1)
                return ff;
            const BridgePath coarse = coarsen(fine, l - 1);
            ledger.coeff_ops += coarse.coeffs.size();
            ledger.oracle_cost += model.dimension(l - 1);
            return ff - f(coarse);
        }
        const std::uint64_t m = std::uint64_t{1} << l;
        const KLVector fine = sample_kl(src, m, model.spec);
        ledger.coeff_ops += fine.coeffs.size();
        ledger.oracle_cost += fine_dim;
        const double ff = f(fine);
        if (l == 1)
            return ff;
        const KLVector coarse = coarsen_kl(fine, m / 2, model.spec);
        ledger.coeff_ops += coarse.coeffs.size();
        ledger.oracle_cost += model.dimension(l - 1);
        return ff - f(coarse);
    } catch (const InvariantFailure&) {
        throw;
    } catch (const std::exception& e) {
        throw std::runtime_error("mlmc: evaluating '" + f.name + "' at level " + std::to_string(l) +
                                 " failed: " + e.what());
    }
}

std::uint64_t expected_bits(const MLMCModel& model, const MLMCParams& params) {
    std::uint64_t b = 0;
    for (int l = 1; l <= params.L; ++l)
        b += params.N[static_cast<std::size_t>(l - 1)] * model.bits(l);
    return b;
}

} // namespace

MLMCResult mlmc_estimate(const LipFunctional& f, const MLMCModel& model, const MLMCParams& params,
                         BitSource& src) {
    check_model(model, params);
    MLMCResult out;
    const std::uint64_t start = src.bits_drawn();
    CompensatedSum estimate;
    for (int l = 1; l <= params.L; ++l) {
        const std::uint64_t n = params.N[static_cast<std::size_t>(l - 1)];
        RunningStats stats;
        for (std::uint64_t r = 0; r < n; ++r)
            stats.push(level_sample(f, model, l, src, out.ledger));
        estimate += stats.mean();
        out.levels.push_back({l, n, stats.mean(), stats.variance()});
    }
    out.estimate = estimate.value();
    out.ledger.bits = src.bits_drawn() - start;
    if (out.ledger.bits != expected_bits(model, params))
        throw InvariantFailure("mlmc: bits drawn differ from the declared budget");
    return out;
}

MLMCResult mlmc_estimate_parallel(const LipFunctional& f, const MLMCModel& model,
                                  const MLMCParams& params, std::uint64_t base_seed,
                                  std::uint64_t chunk, unsigned threads) {
    check_model(model, params);
    if (chunk == 0)
        throw std::invalid_argument("mlmc_estimate_parallel: chunk must be positive");
    struct Task {
        int level;
        std::uint64_t index;
        std::uint64_t count;
        double sum = 0.0;
        double sum_sq = 0.0;
        CostLedger ledger;
    };
    std::vector<Task> tasks;
    for (int l = 1; l <= params.L; ++l) {
        const std::uint64_t n = params.N[static_cast<std::size_t>(l - 1)];
        for (std::uint64_t c = 0; c * chunk < n; ++c)
            tasks.push_back({l, c, std::min(chunk, n - c * chunk), 0.0, 0.0, {}});
    }
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, tasks.size()));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size())
                return;
            Task& t = tasks[i];
            try {
                BitSource src(derive_seed(base_seed, static_cast<std::uint64_t>(t.level), t.index));
                CompensatedSum s;
                CompensatedSum s2;
                for (std::uint64_t r = 0; r < t.count; ++r) {
                    const double d = level_sample(f, model, t.level, src, t.ledger);
                    s += d;
                    s2 += d * d;
                }
                t.sum = s.value();
                t.sum_sq = s2.value();
                t.ledger.bits = src.bits_drawn();
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = tasks.size();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < threads; ++k)
        pool.emplace_back(worker);
    worker();
    for (auto& th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);

    MLMCResult out;
    CompensatedSum estimate;
    std::size_t t = 0;
    for (int l = 1; l <= params.L; ++l) {
        const std::uint64_t n = params.N[static_cast<std::size_t>(l - 1)];
        CompensatedSum s;
        CompensatedSum s2;
        for (; t < tasks.size() && tasks[t].level == l; ++t) {
            s += tasks[t].sum;
            s2 += tasks[t].sum_sq;
            out.ledger += tasks[t].ledger;
            out.source_bits.push_back(tasks[t].ledger.bits);
        }
        const double dn = static_cast<double>(n);
        const double mean = s.value() / dn;
        const double var = n > 1 ? std::max(0.0, (s2.value() - dn * mean * mean) / (dn - 1.0)) : 0.0;
        estimate += mean;
        out.levels.push_back({l, n, mean, var});
    }
    out.estimate = estimate.value();
    if (out.ledger.bits != expected_bits(model, params))
        throw InvariantFailure("mlmc: bits drawn differ from the declared budget");
    return out;
}

PlainMCResult plain_mc(const LipFunctional& f, const MLMCModel& model, int level, std::uint64_t n,
                       BitSource& src) {
    if (n == 0)
        throw std::invalid_argument("plain_mc: n must be positive");
    const std::uint64_t start = src.bits_drawn();
    RunningStats stats;
    for (std::uint64_t r = 0; r < n; ++r) {
        if (model.kind == MLMCModel::Kind::bridge)
            stats.push(f(sample_bridge(src, level)));
        else
            stats.push(f(sample_kl(src, std::uint64_t{1} << level, model.spec)));
    }
    return {stats.mean(), stats.variance(), stats.std_error(), src.bits_drawn() - start};
}

} // namespace rbit
