#include "rbit/sde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rbit/errors.hpp"
#include "rbit/normal.hpp"
#include "rbit/summation.hpp"

namespace rbit {

void SDEModel::validate() const {
    if (!drift || !diffusion || !diffusion_derivative)
        throw std::invalid_argument("SDEModel: drift, diffusion and its derivative are required");
    if (diffusion(x0) == 0.0)
        throw std::invalid_argument("SDEModel: diffusion vanishes at the initial value");
}

SDEModel SDEModel::geometric(double mu, double sigma, double x0) {
    SDEModel s;
    s.drift = [mu](double x) { return mu * x; };
    s.diffusion = [sigma](double x) { return sigma * x; };
    s.diffusion_derivative = [sigma](double) { return sigma; };
    s.x0 = x0;
    s.exact_solution = [mu, sigma, x0](double t, double w) {
        return x0 * std::exp((mu - 0.5 * sigma * sigma) * t + sigma * w);
    };
    s.validate();
    return s;
}

SDEModel SDEModel::additive(double x0) {
    SDEModel s;
    s.drift = [](double) { return 0.0; };
    s.diffusion = [](double) { return 1.0; };
    s.diffusion_derivative = [](double) { return 0.0; };
    s.x0 = x0;
    s.exact_solution = [x0](double, double w) { return x0 + w; };
    s.validate();
    return s;
}

namespace {

struct Stepper {
    const SDEModel& model;
    double dt;
    double sqrt_dt;

    Stepper(const SDEModel& mdl, std::uint64_t m)
        : model(mdl), dt(1.0 / static_cast<double>(m)), sqrt_dt(std::sqrt(dt)) {}

    double operator()(double x, double y, std::size_t step) const {
        const double b = model.diffusion(x);
        const double next = x + model.drift(x) * dt + b * sqrt_dt * y +
                            0.5 * b * model.diffusion_derivative(x) * dt * (y * y - 1.0);
        if (!std::isfinite(next))
            throw NumericFailure("Milstein recursion left the finite range", step);
        return next;
    }
};

} // namespace

MilsteinPath milstein_path(const SDEModel& model, std::uint64_t m, std::span<const double> normals) {
    if (m == 0)
        throw std::invalid_argument("milstein_path: m must be positive");
    if (normals.size() != m)
        throw std::invalid_argument("milstein_path: need exactly m normals");
    model.validate();
    const Stepper step(model, m);
    MilsteinPath path;
    path.m = m;
    path.values.resize(m + 1);
    path.increments.assign(normals.begin(), normals.end());
    path.values[0] = model.x0;
    for (std::uint64_t k = 1; k <= m; ++k)
        path.values[k] = step(path.values[k - 1], normals[k - 1], k);
    return path;
}

MilsteinPath rbit_milstein_path(BitSource& src, const SDEModel& model, std::uint64_t m, int q) {
    if (q < 1 || q > kMaxBits)
        throw std::invalid_argument("rbit_milstein_path: q must be in [1, 63]");
    std::vector<double> normals(m);
    std::vector<DyadicValue> retained(m);
    for (std::uint64_t k = 0; k < m; ++k) {
        retained[k] = sample_dyadic_uniform(src, q);
        normals[k] = normal_quantile(retained[k]);
    }
    MilsteinPath path = milstein_path(model, m, normals);
    path.bits = q;
    path.retained = std::move(retained);
    return path;
}

std::uint64_t sde_bit_cost(std::uint64_t m, int q, int level) {
    if (q < 1)
        throw std::invalid_argument("sde_bit_cost: q must be positive");
    return m * (static_cast<std::uint64_t>(q) + bridge_bits(level));
}

double RefinedPath::eval(double t) const {
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("RefinedPath::eval: t must lie in [0, 1]");
    const std::uint64_t m = skeleton.m;
    const double s = t * static_cast<double>(m);
    const std::uint64_t k = std::min(static_cast<std::uint64_t>(s), m - 1) + 1;
    const double local = s - static_cast<double>(k - 1);
    const double lin = local * skeleton.values[k] + (1.0 - local) * skeleton.values[k - 1];
    return lin + scales[k - 1] * bridges[k - 1].nodal()(local);
}

PiecewiseLinear RefinedPath::piecewise() const {
    const std::uint64_t m = skeleton.m;
    const int level = bridges.front().level;
    const std::size_t sub = std::size_t{1} << level;
    PiecewiseLinear f;
    f.nodes.resize(m * sub + 1);
    for (std::uint64_t k = 1; k <= m; ++k) {
        const PiecewiseLinear b = bridges[k - 1].nodal();
        const double x0 = skeleton.values[k - 1];
        const double x1 = skeleton.values[k];
        for (std::size_t j = 0; j < sub; ++j) {
            const double w = static_cast<double>(j) / static_cast<double>(sub);
            f.nodes[(k - 1) * sub + j] = (1.0 - w) * x0 + w * x1 + scales[k - 1] * b.nodes[j];
        }
    }
    f.nodes[m * sub] = skeleton.values[m];
    return f;
}

RefinedPath sample_refined_path(BitSource& src, const SDEModel& model, std::uint64_t m, int q,
                                int level) {
    RefinedPath r;
    r.skeleton = rbit_milstein_path(src, model, m, q);
    r.bridges.reserve(m);
    r.scales.resize(m);
    const double sqrt_dt = 1.0 / std::sqrt(static_cast<double>(m));
    for (std::uint64_t k = 0; k < m; ++k) {
        r.bridges.push_back(sample_bridge(src, level));
        r.scales[k] = model.diffusion(r.skeleton.values[k]) * sqrt_dt;
    }
    return r;
}

std::vector<double> refined_path_eval(BitSource& src, const SDEModel& model, std::uint64_t m,
                                      int q, int level, std::span<const double> grid) {
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw std::invalid_argument("refined_path_eval: grid must be sorted");
    if (!grid.empty() && (grid.front() < 0.0 || grid.back() > 1.0))
        throw std::invalid_argument("refined_path_eval: grid must lie in [0, 1]");
    const RefinedPath r = sample_refined_path(src, model, m, q, level);
    const PiecewiseLinear f = r.piecewise();
    std::vector<double> out;
    out.reserve(grid.size());
    for (double t : grid)
        out.push_back(f(t));
    return out;
}

namespace {

constexpr int kFineFactor = 64;

// Returns the sup-norm error of one replication, in exact-solution mode.
double exact_reference_rep(const SDEModel& model, std::uint64_t m, int q, BitSource& src) {
    std::vector<double> y(m);
    std::vector<double> yq(m);
    for (std::uint64_t k = 0; k < m; ++k) {
        const std::uint64_t hi = src.draw_bits(q);
        const std::uint64_t lo = q < kMaxBits ? src.draw_bits(kMaxBits - q) : 0;
        yq[k] = normal_quantile(DyadicValue{hi + 1, q});
        y[k] = normal_quantile(DyadicValue{((hi << (kMaxBits - q)) | lo) + 1, kMaxBits});
    }
    const MilsteinPath bit = milstein_path(model, m, yq);
    const double sqrt_dt = 1.0 / std::sqrt(static_cast<double>(m));
    double w = 0.0;
    double worst = 0.0;
    for (std::uint64_t k = 1; k <= m; ++k) {
        w += y[k - 1] * sqrt_dt;
        const double t = static_cast<double>(k) / static_cast<double>(m);
        worst = std::max(worst, std::abs(model.exact_solution(t, w) - bit.values[k]));
    }
    return worst;
}

double fine_reference_rep(const SDEModel& model, std::uint64_t m, int q, BitSource& src) {
    const std::uint64_t fm = m * kFineFactor;
    std::vector<double> g(fm);
    std::vector<double> yq(m);
    const double norm = 1.0 / std::sqrt(static_cast<double>(kFineFactor));
    for (std::uint64_t k = 0; k < m; ++k) {
        double sum = 0.0;
        for (int j = 0; j < kFineFactor; ++j) {
            const double z = normal_quantile(sample_dyadic_uniform(src, kMaxBits));
            g[k * kFineFactor + static_cast<std::size_t>(j)] = z;
            sum += z;
        }
        yq[k] = normal_quantile(bit_normal_cell(sum * norm, q));
    }
    const MilsteinPath fine = milstein_path(model, fm, g);
    const MilsteinPath bit = milstein_path(model, m, yq);
    double worst = 0.0;
    for (std::uint64_t k = 1; k <= m; ++k)
        worst = std::max(worst, std::abs(fine.values[k * kFineFactor] - bit.values[k]));
    return worst;
}

} // namespace

StrongErrorResult strong_error_experiment(const SDEModel& model, std::uint64_t m, int q,
                                          std::uint64_t reps, std::uint64_t seed,
                                          ReferenceMode mode) {
    if (m == 0 || reps == 0)
        throw std::invalid_argument("strong_error_experiment: m and reps must be positive");
    if (q < 1 || q > kMaxBits)
        throw std::invalid_argument("strong_error_experiment: q must be in [1, 63]");
    model.validate();
    if (mode == ReferenceMode::automatic)
        mode = model.exact_solution ? ReferenceMode::exact_solution : ReferenceMode::fine_milstein;
    if (mode == ReferenceMode::exact_solution && !model.exact_solution)
        throw ConfigError("strong_error_experiment: model has no exact solution");

    RunningStats sq;
    StrongErrorResult out;
    for (std::uint64_t r = 0; r < reps; ++r) {
        BitSource src(derive_seed(seed, m, r));
        const double e = mode == ReferenceMode::exact_solution ? exact_reference_rep(model, m, q, src)
                                                               : fine_reference_rep(model, m, q, src);
        sq.push(e * e);
        out.scheme_bits += m * static_cast<std::uint64_t>(q);
        out.reference_bits += src.bits_drawn() - (mode == ReferenceMode::exact_solution
                                                      ? m * static_cast<std::uint64_t>(q)
                                                      : 0);
    }
    out.reps = reps;
    out.rms_error = std::sqrt(sq.mean());
    out.std_error = sq.std_error();
    return out;
}

} // namespace rbit
