// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <experiments.hpp>
#include <rbit/rbit.hpp>

using namespace rbit;

namespace {

const FixtureSet& fixtures() {
    static const FixtureSet set = FixtureSet::load(RBIT_FIXTURES);
    return set;
}

class Criterion {
public:
    Criterion(int id, std::string title, double time_limit_s)
        : id_(id), title_(std::move(title)), limit_(time_limit_s),
          start_(std::chrono::steady_clock::now()) {}

    // Records one sub-check with a diagnostic line.
    void check(bool ok, const std::string& what) {
        ok_ = ok_ && ok;
        notes_.push_back(std::string(ok ? "  ok   " : "  FAIL ") + what);
    }

    void note(const std::string& what) { notes_.push_back("       " + what); }

    bool finish() {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        char t[64];
        std::snprintf(t, sizeof t, "elapsed %.2f s (limit %.0f s)", secs, limit_);
        check(secs < limit_, t);
        for (const auto& n : notes_)
            std::cout << n << '\n';
        std::cout << (ok_ ? "PASS" : "FAIL") << " criterion " << id_ << ": " << title_ << "\n\n";
        std::cout.flush();
        return ok_;
    }

private:
    int id_;
    std::string title_;
    double limit_;
    std::chrono::steady_clock::time_point start_;
    bool ok_ = true;
    std::vector<std::string> notes_;
};

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

bool criterion1() {
    Criterion c(1, "exact allocation identities", 1);
    bool bridge_ok = true;
    for (int l = 1; l <= 20; ++l) {
        const BitAllocation a = allocation_bridge(l);
        std::uint64_t sum = 0;
        for (int b : a.bits)
            sum += static_cast<std::uint64_t>(b);
        const std::uint64_t closed = (std::uint64_t{1} << (l + 2)) - 2 * static_cast<std::uint64_t>(l) - 4;
        bridge_ok = bridge_ok && sum == closed && a.total == closed && bridge_bits(l) == closed &&
                    a.size() == (std::size_t{1} << l) - 1;
    }
    c.check(bridge_ok, "|p(l)| = 2^(l+2) - 2l - 4, l = 1..20");
    bool sde_ok = true;
    for (int l = 1; l <= 15; ++l) {
        const std::uint64_t m = std::uint64_t{1} << l;
        sde_ok = sde_ok && sde_bit_cost(m, 2 * l, l) == (std::uint64_t{1} << (l + 2)) * (m - 1);
    }
    c.check(sde_ok, "c(2^l, 2l, l) = 2^(l+2) (2^l - 1), l = 1..15");
    return c.finish();
}

bool criterion2() {
    Criterion c(2, "normal mean squared error rate", 120);
    const double bound = 49.0 / (6.0 * std::log(4.0)) + 0.5;
    std::vector<double> xs, ys;
    bool bound_ok = true, moments_ok = true;
    double scaled_max = 0, scaled24 = 0;
    for (int p = 4; p <= 24; ++p) {
        const double mse = bit_normal_mse(p);
        const double scaled = std::ldexp(mse * p, p);
        if (p >= 16) {
            bound_ok = bound_ok && scaled <= bound;
            scaled_max = std::max(scaled_max, scaled);
        }
        if (p == 24)
            scaled24 = scaled;
        xs.push_back(p * std::numbers::ln2);
        ys.push_back(std::log(p * mse));
        const double m2 = bit_normal_moment(p, 2), m4 = bit_normal_moment(p, 4);
        moments_ok = moments_ok && m2 <= 1.0 && m4 <= 3.0;
    }
    c.check(bound_ok, fmt("(a) max_{p>=16} 2^p p mse(p) = %.10f <= %.6f", scaled_max, bound));
    const RateFit fit = fit_line(xs, ys);
    c.check(fit.slope >= -1.10 && fit.slope <= -0.95,
            fmt("(b) slope of ln(p mse) vs p ln 2 = %.6f in [-1.10, -0.95]", fit.slope));
    c.check(moments_ok, "(c) moment(p,2) <= 1 and moment(p,4) <= 3, p = 4..24");
    const Fixture& fx = fixtures().get("normal_scaled_const_p24");
    c.check(fx.accepts(scaled24), fmt("fixture %s: observed %.12f, recorded %.10f", fx.name.c_str(),
                                      scaled24, fx.value));
    return c.finish();
}

bool criterion3() {
    Criterion c(3, "uniform-law constant", 10);
    const QuantileSpec u = QuantileSpec::uniform();
    const double target = 1.0 / (2.0 * std::sqrt(3.0));
    double worst = 0;
    for (int p = 1; p <= 12; ++p)
        worst = std::max(worst, std::abs(std::ldexp(rbit_error(u, p), p) - target) / target);
    c.check(worst <= 1e-8, fmt("max relative deviation of 2^p rbit_error from 1/(2 sqrt 3) = %.3e", worst));
    return c.finish();
}

bool criterion4() {
    Criterion c(4, "Brownian bridge error", 10);
    double worst_a = 0;
    for (int l = 0; l <= 20; ++l) {
        // tail sum over Schauder levels k >= l, each level k contributing 2^k equal norms
        CompensatedSum tail;
        for (int k = 62; k >= l; --k)
            tail += std::ldexp(schauder_norm_sq(std::uint64_t{1} << k), k);
        const double closed = bridge_truncation_error_sq(l);
        worst_a = std::max(worst_a, std::abs(tail.value() - closed) / closed);
    }
    CompensatedSum head;
    double worst_direct = 0;
    for (int l = 1; l <= 16; ++l) {
        for (std::uint64_t i = std::uint64_t{1} << (l - 1); i < (std::uint64_t{1} << l); ++i)
            head += schauder_norm_sq(i);
        const double closed = bridge_truncation_error_sq(l);
        worst_direct = std::max(worst_direct, std::abs((1.0 / 6.0 - head.value()) - closed) / closed);
    }
    c.check(worst_a <= 1e-12, fmt("(a) tail partial sums vs 2^-l/6, l <= 20: max rel dev %.3e", worst_a));
    c.note(fmt("1/6 minus head sums, l <= 16: max rel dev %.3e", worst_direct));

    bool b_ok = true;
    double worst_b = 0;
    for (int l = 1; l <= 20; ++l) {
        const double s = std::ldexp(bridge_precision_sum(l), l);
        worst_b = std::max(worst_b, s);
        b_ok = b_ok && s <= 1.0;
    }
    c.check(b_ok, fmt("(b) max_l 2^l sum 2^-p_i/p_i i^-2 = %.6f <= 1", worst_b));

    const Fixture& fx = fixtures().get("bridge_scaled");
    bool c_ok = true;
    double lo = 1e300, hi = 0;
    bool all_exact = true;
    for (int l = 6; l <= 16; ++l) {
        const MseValue e = bridge_bit_error_sq(l);
        const double s = std::ldexp(e.value, l);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
        all_exact = all_exact && e.exact;
        c_ok = c_ok && fx.accepts(s);
    }
    c.check(c_ok, fmt("(c) 2^l bit_error_sq in [%.6f, %.6f], fixture %.6f +-20%%", lo, hi, fx.value));
    if (!all_exact)
        c.note("levels >= 14 use the extrapolated mse beyond 26 bits");
    return c.finish();
}

bool criterion5() {
    Criterion c(5, "Karhunen-Loeve rates", 60);
    const std::pair<double, double> pairs[] = {{2, 0}, {3, 0}, {1.5, 0}, {2, 2}, {3, -2}};
    for (auto [b, a] : pairs) {
        const EigenSpec spec = EigenSpec::analytic(b, a);
        char name[64];
        std::snprintf(name, sizeof name, "kl_scaled_b%g_a%g", b, a);
        const Fixture& fx = fixtures().get(name);
        bool ok = true;
        double lo = 1e300, hi = 0;
        for (std::uint64_t m = 64; m <= 16384; m *= 2) {
            const double dm = static_cast<double>(m);
            const double s = std::pow(dm, b - 1) * std::pow(std::log(dm), a) * kl_error_sq(m, spec).value;
            lo = std::min(lo, s);
            hi = std::max(hi, s);
            ok = ok && fx.accepts(s);
        }
        c.check(ok, fmt("beta=%g alpha=%g: scaled error in [%.5f, %.5f], bracket [%.5f, %.5f]", b, a, lo,
                        hi, fx.lower(), fx.upper()));

        const double cap = 1 + b * std::numbers::log2e + 2 * std::abs(a);
        bool ratio_ok = true;
        double rmin = 1e300, rmax = 0;
        for (std::uint64_t m = 2; m <= 65536; m = m < 1024 ? m + 1 : m * 2) {
            const double r = static_cast<double>(allocation_kl(m, spec).total) / static_cast<double>(m);
            rmin = std::min(rmin, r);
            rmax = std::max(rmax, r);
            ratio_ok = ratio_ok && r >= 1 && r <= cap;
        }
        c.check(ratio_ok, fmt("beta=%g alpha=%g: |p(m)|/m in [%.4f, %.4f] within [1, %.4f]", b, a, rmin,
                              rmax, cap));

        bool mono = true;
        BitAllocation coarse = allocation_kl(1, spec);
        for (int l = 1; l <= 16; ++l) {
            const BitAllocation fine = allocation_kl(std::uint64_t{1} << l, spec);
            for (std::size_t i = 0; i < coarse.size(); ++i)
                mono = mono && coarse[i] <= fine[i];
            coarse = fine;
        }
        c.check(mono, fmt("beta=%g alpha=%g: p_i(2^(l-1)) <= p_i(2^l), l <= 16", b, a));
    }
    return c.finish();
}

bool criterion6() {
    Criterion c(6, "SDE strong order", 300);
    const SDEModel geo = SDEModel::geometric(0.05, 0.2, 1.0);
    std::vector<double> ms, es;
    for (std::uint64_t m = 16; m <= 1024; m *= 2) {
        const StrongErrorResult r = strong_error_experiment(geo, m, 52, 1000, 6);
        ms.push_back(static_cast<double>(m));
        es.push_back(r.rms_error);
        c.note(fmt("q=52 m=%4llu rms %.6e", static_cast<unsigned long long>(m), r.rms_error));
    }
    const RateFit fit = fit_rate(ms, es);
    c.check(fit.slope >= -1.25 && fit.slope <= -0.80,
            fmt("q=52 fitted slope %.4f in [-1.25, -0.80]", fit.slope));
    const double e64 = strong_error_experiment(geo, 64, 4, 1000, 6).rms_error;
    const double e1024 = strong_error_experiment(geo, 1024, 4, 1000, 6).rms_error;
    c.check(e1024 > 0.5 * e64, fmt("q=4 plateau: rms(2^10) = %.6e > 0.5 rms(2^6) = %.6e", e1024, 0.5 * e64));
    return c.finish();
}

bool criterion7() {
    Criterion c(7, "multilevel Monte Carlo on the bridge model", 600);
    const MLMCModel model = MLMCModel::bridge();
    const Fixture& c_rmse = fixtures().get("mlmc_c_rmse");
    std::vector<double> inv_eps, costs, detrended;
    for (int k = 3; k <= 6; ++k) {
        const double eps = std::ldexp(1.0, -k);
        const MLMCParams p = mlmc_params(eps, 2, 0);
        std::uint64_t budget = 0;
        for (int l = 1; l <= p.L; ++l)
            budget += p.N[static_cast<std::size_t>(l - 1)] * bridge_bits(l);

        bool bits_ok = true;
        RunningStats lin;
        double sum_sq = 0;
        for (int r = 0; r < 100; ++r) {
            BitSource src(derive_seed(1, 0, r));
            const MLMCResult res = mlmc_estimate(coord_functional(1), model, p, src);
            bits_ok = bits_ok && res.ledger.bits == budget && src.bits_drawn() == budget;
            lin.push(res.estimate);
            sum_sq += res.estimate * res.estimate;
        }
        const double rmse = std::sqrt(sum_sq / 100);
        c.check(std::abs(lin.mean()) <= 4 * lin.std_error(),
                fmt("(a) eps=2^-%d coord1 mean %.3e, 4 se %.3e", k, lin.mean(), 4 * lin.std_error()));
        c.check(rmse <= c_rmse.value * eps,
                fmt("(a) eps=2^-%d rmse/eps = %.4f <= C_rmse = %g", k, rmse / eps, c_rmse.value));

        RunningStats nrm;
        for (int r = 0; r < 100; ++r) {
            BitSource src(derive_seed(2, 0, r));
            const MLMCResult res = mlmc_estimate(norm_functional(), model, p, src);
            bits_ok = bits_ok && res.ledger.bits == budget && src.bits_drawn() == budget;
            nrm.push(res.estimate);
        }
        BitSource ref_src(derive_seed(3, static_cast<std::uint64_t>(p.L)));
        const PlainMCResult ref = plain_mc(norm_functional(), model, p.L, 100000, ref_src);
        const double se = std::hypot(nrm.std_error(), ref.std_error);
        c.check(std::abs(nrm.mean() - ref.mean) <= 4 * se,
                fmt("(b) eps=2^-%d norm: mlmc %.6f vs level-%d MC %.6f, |z| = %.2f", k, nrm.mean(), p.L,
                    ref.mean, std::abs(nrm.mean() - ref.mean) / se));
        c.check(bits_ok, fmt("(c) eps=2^-%d every run drew exactly sum N_l |p(l)| = %llu bits", k,
                             static_cast<unsigned long long>(budget)));

        const double cost = theoretical_cost(p);
        const double li = std::log(1 / eps);
        inv_eps.push_back(li);
        costs.push_back(std::log(cost));
        detrended.push_back(std::log(cost) - 2 * std::log(li));
    }
    const RateFit raw = fit_line(inv_eps, costs);
    const RateFit flat = fit_line(inv_eps, detrended);
    c.check(raw.slope >= 1.7 && raw.slope <= 2.5,
            fmt("(d) slope of ln cost vs ln(1/eps) = %.4f in [1.7, 2.5] (max residual %.4f)", raw.slope,
                raw.residual_max));
    c.note(fmt("after dividing the cost by (ln 1/eps)^2: slope %.4f, max residual %.4f", flat.slope,
               flat.residual_max));
    return c.finish();
}

bool criterion8() {
    Criterion c(8, "tail asymptotics", 5);
    std::vector<double> grid;
    for (int p = 10; p <= 50; ++p)
        grid.push_back(p);
    const std::vector<AppendixRatios> rs = appendix_ratios(grid);
    const std::function<double(const AppendixRatios&)> get[4] = {
        [](const AppendixRatios& r) { return r.quantile_growth; },
        [](const AppendixRatios& r) { return r.h_ratio; },
        [](const AppendixRatios& r) { return r.g_ratio; },
        [](const AppendixRatios& r) { return r.density_ratio; },
    };
    const char* names[4] = {"(i)", "(ii)", "(iii)", "(iv)"};
    for (int j = 0; j < 4; ++j) {
        bool in_range = true;
        for (const auto& r : rs)
            in_range = in_range && get[j](r) >= 0.5 && get[j](r) <= 2.0;
        bool toward = true;
        for (std::size_t i = rs.size() - 10; i + 1 < rs.size(); ++i)
            toward = toward && std::abs(get[j](rs[i + 1]) - 1) <= std::abs(get[j](rs[i]) - 1);
        c.check(in_range && toward, fmt("%s in [0.5, 2] on p = 10..50, approaching 1 on p = 41..50 (p=50: %.5f)",
                                        names[j], get[j](rs.back())));
    }
    const Fixture& floor = fixtures().get("appendix_v_floor");
    double vmin = 1e300;
    for (const auto& r : rs)
        vmin = std::min(vmin, r.mean_value_quotient);
    c.check(vmin >= floor.value, fmt("(v) minimum %.5f >= floor %.3f", vmin, floor.value));
    return c.finish();
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

bool criterion9() {
    Criterion c(9, "deterministic regeneration of every CSV", 300);
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "rbit_acceptance";
    fs::create_directories(dir);
    const std::vector<std::vector<std::string>> runs = {
        {"normal-error", "--pmin", "4", "--pmax", "12"},
        {"rbit-1d", "--law", "normal", "--pmin", "1", "--pmax", "10"},
        {"rbit-1d", "--law", "uniform", "--pmin", "1", "--pmax", "12"},
        {"bridge-error", "--lmin", "1", "--lmax", "12"},
        {"kl-error", "--beta", "2", "--alpha", "2", "--mmin", "2", "--mmax", "1024"},
        {"sde-error", "--mmin", "16", "--mmax", "128", "--reps", "100", "--seed", "11"},
        {"sde-error", "--mmin", "16", "--mmax", "32", "--reps", "20", "--reference", "fine", "--seed", "11"},
        {"mlmc", "--eps", "0.0625", "--functional", "norm", "--runs", "10", "--seed", "11"},
        {"mlmc", "--eps", "0.0625", "--functional", "soft_linear", "--runs", "4", "--chunk", "8",
         "--threads", "2", "--seed", "11"},
        {"mlmc", "--model", "kl", "--beta", "3", "--alpha", "-2", "--eps", "0.05", "--runs", "4", "--seed", "3"},
        {"appendix-ratios", "--pmin", "10", "--pmax", "50"},
    };
    int idx = 0;
    for (const auto& args : runs) {
        const fs::path a = dir / ("first_" + std::to_string(idx) + ".csv");
        const fs::path b = dir / ("second_" + std::to_string(idx) + ".csv");
        ++idx;
        std::ostringstream out, err;
        auto with = [&](const fs::path& p) {
            auto v = args;
            v.insert(v.end(), {"--csv", p.string()});
            return v;
        };
        const int ca = tools::run_cli(with(a), out, err);
        const int cb = tools::run_cli(with(b), out, err);
        const std::string sa = slurp(a);
        std::string line = args[0];
        for (std::size_t i = 1; i < args.size(); ++i)
            line += " " + args[i];
        c.check(ca == 0 && cb == 0 && !sa.empty() && sa == slurp(b), line);
        if (args[0] == "normal-error") {
            const fs::path f1 = dir / "fit_1.csv", f2 = dir / "fit_2.csv";
            const std::vector<std::string> fit = {"fit", "--input", a.string(), "--x", "p", "--y", "mse"};
            auto fv = [&](const fs::path& p) {
                auto v = fit;
                v.insert(v.end(), {"--csv", p.string()});
                return v;
            };
            const int fa = tools::run_cli(fv(f1), out, err);
            const int fb = tools::run_cli(fv(f2), out, err);
            c.check(fa == 0 && fb == 0 && slurp(f1) == slurp(f2), "fit --x p --y mse on the normal-error table");
        }
    }
    return c.finish();
}

} // namespace

int main() {
    std::cout.setf(std::ios::unitbuf);
    int failed = 0;
    for (auto* run : {criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7,
                      criterion8, criterion9}) {
        try {
            failed += !run();
        } catch (const std::exception& e) {
            std::cout << "FAIL criterion raised: " << e.what() << "\n\n";
            ++failed;
        }
    }
    std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criterion(s) failed\n"
                         : std::string("acceptance: all criteria passed\n"));
    return failed ? 1 : 0;
}
