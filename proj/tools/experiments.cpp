#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include <rbit/rbit.hpp>

namespace rbit::tools {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Common {
    std::uint64_t seed = 0;
    std::string csv;
    std::string fixtures;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "Base seed (decimal 64-bit)");
    sub->add_option("--csv", c.csv, "Output CSV path (stdout if omitted)");
    sub->add_option("--fixtures", c.fixtures, "Fixture file to check results against");
}

// Collects fixture comparisons for one run.
class Checker {
public:
    explicit Checker(const std::string& path) {
        if (!path.empty())
            set_ = FixtureSet::load(path);
    }

    bool has(const std::string& name) const { return set_ && set_->contains(name); }

    void within(const std::string& name, double observed) {
        if (!has(name))
            return;
        const Fixture& f = set_->get(name);
        record(name, observed, f.accepts(observed), f.lower(), f.upper());
    }

    void at_least(const std::string& name, double observed) {
        if (!has(name))
            return;
        const Fixture& f = set_->get(name);
        record(name, observed, observed >= f.value, f.value, kInf);
    }

    void at_most(const std::string& name, double observed) {
        if (!has(name))
            return;
        const Fixture& f = set_->get(name);
        record(name, observed, observed <= f.value, -kInf, f.value);
    }

    int report(std::ostream& err) const {
        int bad = 0;
        for (const auto& v : violations_) {
            err << v << '\n';
            ++bad;
        }
        return bad ? 3 : 0;
    }

private:
    static constexpr double kInf = std::numeric_limits<double>::infinity();

    void record(const std::string& name, double observed, bool ok, double lo, double hi) {
        if (ok)
            return;
        std::ostringstream s;
        s << "fixture violation: " << name << " observed " << format_real(observed)
          << ", accepted [" << format_real(lo) << ", " << format_real(hi) << "]";
        violations_.push_back(s.str());
    }

    std::optional<FixtureSet> set_;
    std::vector<std::string> violations_;
};

void emit(const Common& c, const std::string& text, std::ostream& out) {
    if (c.csv.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.csv, std::ios::binary);
    if (!f)
        throw ConfigError("cannot write '" + c.csv + "'");
    f << text;
}

std::string fmt_g(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

std::vector<std::uint64_t> doubling(std::uint64_t lo, std::uint64_t hi) {
    if (lo == 0 || lo > hi)
        throw ConfigError("range must satisfy 0 < min <= max");
    std::vector<std::uint64_t> out;
    for (std::uint64_t m = lo; m <= hi; m *= 2)
        out.push_back(m);
    return out;
}

void check_range(int lo, int hi, const char* what) {
    if (lo < 1 || lo > hi)
        throw ConfigError(std::string(what) + ": need 1 <= min <= max");
}

// --- subcommands ------------------------------------------------------------

struct NormalArgs {
    int pmin = 1;
    int pmax = 16;
};

void normal_error(const NormalArgs& a, Checker& chk, std::ostream& csv) {
    check_range(a.pmin, a.pmax, "normal-error");
    CsvWriter w(csv, {"p", "mse", "rmse", "scaled_const", "moment2", "moment4", "exact"});
    for (int p = a.pmin; p <= a.pmax; ++p) {
        const MseValue m = bit_normal_mse_any(p);
        const double scaled = std::ldexp(m.value, p) * p;
        const double m2 = m.exact ? bit_normal_moment(p, 2) : kNaN;
        const double m4 = m.exact ? bit_normal_moment(p, 4) : kNaN;
        w.row({std::int64_t{p}, m.value, std::sqrt(m.value), scaled, m2, m4,
               std::int64_t{m.exact ? 1 : 0}});
        chk.within("normal_scaled_const_p" + std::to_string(p), scaled);
    }
}

struct Rbit1dArgs {
    std::string law = "normal";
    int pmin = 1;
    int pmax = 12;
};

void rbit_1d(const Rbit1dArgs& a, Checker& chk, std::ostream& csv) {
    check_range(a.pmin, a.pmax, "rbit-1d");
    QuantileSpec law;
    if (a.law == "normal")
        law = QuantileSpec::standard_normal();
    else if (a.law == "uniform")
        law = QuantileSpec::uniform(0.0, 1.0);
    else
        throw ConfigError("rbit-1d: --law must be normal or uniform");
    const bool normal = law.family == LawFamily::standard_normal;
    CsvWriter w(csv, {"p", "rbit_error", "midpoint_error", "scaled"});
    for (int p = a.pmin; p <= a.pmax; ++p) {
        const double opt = rbit_error(law, p);
        std::vector<double> mid(std::size_t{1} << p);
        for (std::size_t k = 0; k < mid.size(); ++k) {
            const DyadicValue d{k + 1, p};
            mid[k] = law.evaluate(d.value(), d.complement());
        }
        const double midpoint = w2_uniform(law, DiscreteUniform(std::move(mid)));
        const double scaled = normal ? std::ldexp(opt * opt, p) * p : std::ldexp(opt, p);
        w.row({std::int64_t{p}, opt, midpoint, scaled});
        if (!normal)
            chk.within("uniform_scaled", scaled);
    }
}

struct BridgeArgs {
    int lmin = 1;
    int lmax = 16;
};

void bridge_error(const BridgeArgs& a, Checker& chk, std::ostream& csv) {
    check_range(a.lmin, a.lmax, "bridge-error");
    CsvWriter w(csv, {"l", "bits", "trunc_err_sq", "bit_err_sq", "scaled", "exact"});
    for (int l = a.lmin; l <= a.lmax; ++l) {
        const MseValue e = bridge_bit_error_sq(l);
        const double scaled = std::ldexp(e.value, l);
        w.row({std::int64_t{l}, bridge_bits(l), bridge_truncation_error_sq(l), e.value, scaled,
               std::int64_t{e.exact ? 1 : 0}});
        if (l >= 6)
            chk.within("bridge_scaled", scaled);
    }
}

struct KlArgs {
    double beta = 2.0;
    double alpha = 0.0;
    double scale = 1.0;
    std::uint64_t mmin = 64;
    std::uint64_t mmax = 16384;
};

void kl_error(const KlArgs& a, Checker& chk, std::ostream& csv) {
    const EigenSpec spec = EigenSpec::analytic(a.beta, a.alpha, a.scale);
    const std::string fixture = "kl_scaled_b" + fmt_g(a.beta) + "_a" + fmt_g(a.alpha);
    CsvWriter w(csv, {"m", "bits", "err_sq", "scaled", "err_sq_lower", "err_sq_upper", "exact"});
    for (std::uint64_t m : doubling(a.mmin, a.mmax)) {
        const KLError e = kl_error_sq(m, spec);
        const double dm = static_cast<double>(m);
        const double scaled = std::pow(dm, a.beta - 1.0) * std::pow(std::log(dm), a.alpha) * e.value;
        w.row({m, allocation_kl(m, spec).total, e.value, scaled, e.lower, e.upper,
               std::int64_t{e.exact ? 1 : 0}});
        chk.within(fixture, scaled);
    }
}

struct SdeArgs {
    std::string model = "geometric";
    std::string reference = "auto";
    double mu = 0.05;
    double sigma = 0.2;
    double x0 = 1.0;
    int q = 52;
    std::uint64_t mmin = 16;
    std::uint64_t mmax = 1024;
    std::uint64_t reps = 1000;
};

void sde_error(const SdeArgs& a, std::uint64_t seed, std::ostream& csv) {
    SDEModel model;
    if (a.model == "geometric")
        model = SDEModel::geometric(a.mu, a.sigma, a.x0);
    else if (a.model == "additive")
        model = SDEModel::additive(a.x0);
    else
        throw ConfigError("sde-error: --model must be geometric or additive");
    ReferenceMode mode = ReferenceMode::automatic;
    if (a.reference == "exact")
        mode = ReferenceMode::exact_solution;
    else if (a.reference == "fine")
        mode = ReferenceMode::fine_milstein;
    else if (a.reference != "auto")
        throw ConfigError("sde-error: --reference must be auto, exact or fine");
    CsvWriter w(csv, {"m", "q", "rms_error", "std_error_sq", "scheme_bits", "reference_bits"});
    for (std::uint64_t m : doubling(a.mmin, a.mmax)) {
        const StrongErrorResult r = strong_error_experiment(model, m, a.q, a.reps, seed, mode);
        w.row({m, std::int64_t{a.q}, r.rms_error, r.std_error, r.scheme_bits, r.reference_bits});
    }
}

struct MlmcArgs {
    std::string model = "bridge";
    std::string functional = "norm";
    double beta = 2.0;
    double alpha = 0.0;
    double eps = 0.125;
    double clip = 0.5;
    std::uint64_t runs = 100;
    std::uint64_t chunk = 0;
    unsigned threads = 1;
};

void mlmc(const MlmcArgs& a, std::uint64_t seed, Checker& chk, std::ostream& csv) {
    const MLMCModel model = a.model == "bridge" ? MLMCModel::bridge()
                            : a.model == "kl"   ? MLMCModel::kl(EigenSpec::analytic(a.beta, a.alpha))
                                                : throw ConfigError("mlmc: --model must be bridge or kl");
    const LipFunctional f = find_functional(a.functional, a.clip);
    const MLMCParams params = mlmc_params(a.eps, a.beta, a.alpha);
    const double theory = theoretical_cost(params);
    CsvWriter w(csv, {"run", "estimate", "bits", "oracle_cost", "theoretical_cost"});
    double sum_sq = 0.0;
    for (std::uint64_t r = 0; r < a.runs; ++r) {
        const std::uint64_t run_seed = derive_seed(seed, 0, r);
        MLMCResult res;
        if (a.chunk == 0) {
            BitSource src(run_seed);
            res = mlmc_estimate(f, model, params, src);
        } else {
            res = mlmc_estimate_parallel(f, model, params, run_seed, a.chunk, a.threads);
        }
        sum_sq += res.estimate * res.estimate;
        w.row({r, res.estimate, res.ledger.bits, res.ledger.oracle_cost, theory});
    }
    // Linear functionals have mean zero under every model, so the RMSE is known.
    const bool linear = f.name.rfind("coord", 0) == 0 || f.name == "soft_linear";
    if (linear && a.runs > 0)
        chk.at_most("mlmc_c_rmse", std::sqrt(sum_sq / static_cast<double>(a.runs)) / a.eps);
}

struct AppendixArgs {
    double pmin = 10;
    double pmax = 50;
    double step = 1;
};

void appendix(const AppendixArgs& a, Checker& chk, std::ostream& csv) {
    if (!(a.step > 0.0) || !(a.pmin >= 1.0) || a.pmin > a.pmax)
        throw ConfigError("appendix-ratios: need 1 <= pmin <= pmax and step > 0");
    std::vector<double> grid;
    for (double p = a.pmin; p <= a.pmax + 1e-9; p += a.step)
        grid.push_back(p);
    CsvWriter w(csv, {"p", "quantile_growth", "h_ratio", "g_ratio", "density_ratio",
                      "mean_value_quotient"});
    double vmin = std::numeric_limits<double>::infinity();
    for (const AppendixRatios& r : appendix_ratios(grid)) {
        w.row({r.p, r.quantile_growth, r.h_ratio, r.g_ratio, r.density_ratio, r.mean_value_quotient});
        vmin = std::min(vmin, r.mean_value_quotient);
    }
    chk.at_least("appendix_v_floor", vmin);
}

struct FitArgs {
    std::string input;
    std::string x;
    std::string y;
    bool linear = false;
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream s(line);
    while (std::getline(s, cell, ','))
        out.push_back(cell);
    return out;
}

void fit(const FitArgs& a, std::ostream& csv) {
    std::ifstream in(a.input);
    if (!in)
        throw ConfigError("fit: cannot open '" + a.input + "'");
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError("fit: empty input");
    const auto header = split_csv_line(line);
    auto column = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw ConfigError("fit: no column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t cx = column(a.x);
    const std::size_t cy = column(a.y);
    std::vector<double> xs;
    std::vector<double> ys;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw ConfigError("fit: ragged row in '" + a.input + "'");
        xs.push_back(std::stod(cells[cx]));
        ys.push_back(std::stod(cells[cy]));
    }
    const RateFit r = a.linear ? fit_line(xs, ys) : fit_rate(xs, ys);
    CsvWriter w(csv, {"x", "y", "slope", "intercept", "residual_max", "n_points"});
    w.row({a.x, a.y, r.slope, r.intercept, r.residual_max, std::int64_t{r.n_points}});
}

} // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        if (args[i] == "--config") {
            if (i + 1 >= args.size())
                throw ConfigError("--config needs a file");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            out.push_back(args[i]);
            continue;
        }
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file '" + path + "'");
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (const auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos)
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                const auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty() || key.find_first_not_of("abcdefghijklmnopqrstuvwxyz0123456789-_") !=
                                   std::string::npos)
                throw ConfigError(path + ":" + std::to_string(lineno) + ": bad key '" + key + "'");
            std::string flag = key;
            std::replace(flag.begin(), flag.end(), '_', '-');
            out.push_back("--" + flag);
            out.push_back(value);
        }
    }
    return out;
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random-bit approximation experiments", "rbit-experiments"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    Common common;
    NormalArgs na;
    Rbit1dArgs ra;
    BridgeArgs ba;
    KlArgs ka;
    SdeArgs sa;
    MlmcArgs ma;
    AppendixArgs aa;
    FitArgs fa;

    auto* s_normal = app.add_subcommand("normal-error", "Exact mean squared error of the bit normal");
    s_normal->add_option("--pmin", na.pmin);
    s_normal->add_option("--pmax", na.pmax);
    add_common(s_normal, common);

    auto* s_1d = app.add_subcommand("rbit-1d", "W2 random-bit error of a 1-D law");
    s_1d->add_option("--law", ra.law)->check(CLI::IsMember({"normal", "uniform"}));
    s_1d->add_option("--pmin", ra.pmin);
    s_1d->add_option("--pmax", ra.pmax);
    add_common(s_1d, common);

    auto* s_bridge = app.add_subcommand("bridge-error", "Brownian bridge truncation and bit errors");
    s_bridge->add_option("--lmin", ba.lmin);
    s_bridge->add_option("--lmax", ba.lmax);
    add_common(s_bridge, common);

    auto* s_kl = app.add_subcommand("kl-error", "Karhunen-Loeve random-bit error");
    s_kl->add_option("--beta", ka.beta);
    s_kl->add_option("--alpha", ka.alpha);
    s_kl->add_option("--scale", ka.scale);
    s_kl->add_option("--mmin", ka.mmin);
    s_kl->add_option("--mmax", ka.mmax);
    add_common(s_kl, common);

    auto* s_sde = app.add_subcommand("sde-error", "Strong error of the random-bit Milstein scheme");
    s_sde->add_option("--model", sa.model);
    s_sde->add_option("--reference", sa.reference);
    s_sde->add_option("--mu", sa.mu);
    s_sde->add_option("--sigma", sa.sigma);
    s_sde->add_option("--x0", sa.x0);
    s_sde->add_option("--q", sa.q);
    s_sde->add_option("--mmin", sa.mmin);
    s_sde->add_option("--mmax", sa.mmax);
    s_sde->add_option("--reps", sa.reps);
    add_common(s_sde, common);

    auto* s_mlmc = app.add_subcommand("mlmc", "Random-bit multilevel Monte Carlo runs");
    s_mlmc->add_option("--model", ma.model);
    s_mlmc->add_option("--functional", ma.functional);
    s_mlmc->add_option("--beta", ma.beta);
    s_mlmc->add_option("--alpha", ma.alpha);
    s_mlmc->add_option("--eps", ma.eps);
    s_mlmc->add_option("--clip", ma.clip);
    s_mlmc->add_option("--runs", ma.runs);
    s_mlmc->add_option("--chunk", ma.chunk, "Replications per seeded source (0: one source per run)");
    s_mlmc->add_option("--threads", ma.threads);
    add_common(s_mlmc, common);

    auto* s_app = app.add_subcommand("appendix-ratios", "Tail asymptotic quotients");
    s_app->add_option("--pmin", aa.pmin);
    s_app->add_option("--pmax", aa.pmax);
    s_app->add_option("--step", aa.step);
    add_common(s_app, common);

    auto* s_fit = app.add_subcommand("fit", "Log-log least squares on two CSV columns");
    s_fit->add_option("--input", fa.input)->required();
    s_fit->add_option("--x", fa.x)->required();
    s_fit->add_option("--y", fa.y)->required();
    s_fit->add_flag("--linear", fa.linear, "Fit raw values instead of logarithms");
    add_common(s_fit, common);

    try {
        std::vector<std::string> args = expand_config(raw_args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        Checker chk(common.fixtures);
        std::ostringstream csv;
        if (s_normal->parsed())
            normal_error(na, chk, csv);
        else if (s_1d->parsed())
            rbit_1d(ra, chk, csv);
        else if (s_bridge->parsed())
            bridge_error(ba, chk, csv);
        else if (s_kl->parsed())
            kl_error(ka, chk, csv);
        else if (s_sde->parsed())
            sde_error(sa, common.seed, csv);
        else if (s_mlmc->parsed())
            mlmc(ma, common.seed, chk, csv);
        else if (s_app->parsed())
            appendix(aa, chk, csv);
        else if (s_fit->parsed())
            fit(fa, csv);
        emit(common, csv.str(), out);
        return chk.report(err);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace rbit::tools
