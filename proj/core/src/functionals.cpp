#include "rbit/functionals.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "rbit/errors.hpp"
#include "rbit/summation.hpp"

namespace rbit {

namespace {

constexpr std::size_t kSoftTerms = 8;

std::array<double, kSoftTerms> soft_weights() {
    std::array<double, kSoftTerms> w{};
    double s = 0.0;
    for (std::size_t j = 0; j < kSoftTerms; ++j) {
        w[j] = 1.0 / static_cast<double>(j + 1);
        s += w[j] * w[j];
    }
    for (double& x : w)
        x /= std::sqrt(s);
    return w;
}

// sum_j w_j s_j / ||s_j|| scaled to unit L2 norm, on the 16-interval grid.
const PiecewiseLinear& soft_direction() {
    static const PiecewiseLinear g = [] {
        const auto w = soft_weights();
        PiecewiseLinear f;
        f.nodes.assign(17, 0.0);
        for (std::size_t j = 1; j <= kSoftTerms; ++j) {
            const PiecewiseLinear s = schauder_function(j);
            const PiecewiseLinear r = s.refined(16 / s.intervals());
            const double c = w[j - 1] / std::sqrt(schauder_norm_sq(j));
            for (std::size_t n = 0; n < f.nodes.size(); ++n)
                f.nodes[n] += c * r.nodes[n];
        }
        const double len = l2_norm(f);
        for (double& v : f.nodes)
            v /= len;
        return f;
    }();
    return g;
}

} // namespace

LipFunctional coord_functional(std::uint64_t j) {
    if (j == 0)
        throw std::invalid_argument("coord_functional: index starts at 1");
    LipFunctional f;
    f.name = "coord" + std::to_string(j);
    f.on_kl = [j](const KLVector& x) { return j <= x.coeffs.size() ? x.coeffs[j - 1] : 0.0; };
    const PiecewiseLinear dir = [j] {
        PiecewiseLinear s = schauder_function(j);
        const double scale = 1.0 / std::sqrt(schauder_norm_sq(j));
        for (double& v : s.nodes)
            v *= scale;
        return s;
    }();
    f.on_bridge = [dir](const BridgePath& x) { return inner(x.nodal(), dir); };
    return f;
}

LipFunctional norm_functional() {
    LipFunctional f;
    f.name = "norm";
    f.on_kl = [](const KLVector& x) { return std::sqrt(x.norm_sq()); };
    f.on_bridge = [](const BridgePath& x) { return l2_norm(x.nodal()); };
    return f;
}

LipFunctional clipped_norm_functional(double c) {
    if (!(c > 0.0))
        throw std::invalid_argument("clipped_norm_functional: clip level must be positive");
    LipFunctional f;
    f.name = "clipped_norm";
    f.on_kl = [c](const KLVector& x) { return std::min(c, std::sqrt(x.norm_sq())); };
    f.on_bridge = [c](const BridgePath& x) { return std::min(c, l2_norm(x.nodal())); };
    return f;
}

LipFunctional soft_linear_functional() {
    LipFunctional f;
    f.name = "soft_linear";
    const auto w = soft_weights();
    f.on_kl = [w](const KLVector& x) {
        CompensatedSum s;
        for (std::size_t j = 0; j < kSoftTerms && j < x.coeffs.size(); ++j)
            s += w[j] * x.coeffs[j];
        return s.value();
    };
    const PiecewiseLinear& g = soft_direction();
    f.on_bridge = [g](const BridgePath& x) { return inner(x.nodal(), g); };
    return f;
}

std::vector<LipFunctional> builtin_functionals(double clip) {
    return {coord_functional(1), norm_functional(), clipped_norm_functional(clip),
            soft_linear_functional()};
}

LipFunctional find_functional(const std::string& name, double clip) {
    if (name == "norm")
        return norm_functional();
    if (name == "clipped_norm")
        return clipped_norm_functional(clip);
    if (name == "soft_linear")
        return soft_linear_functional();
    if (name.rfind("coord", 0) == 0 && name.size() > 5) {
        std::size_t pos = 0;
        unsigned long long j = 0;
        try {
            j = std::stoull(name.substr(5), &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == name.size() - 5 && j >= 1)
            return coord_functional(j);
    }
    throw ConfigError("unknown functional '" + name +
                      "' (expected norm, clipped_norm, soft_linear or coordN)");
}

} // namespace rbit
