#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rbit/bridge.hpp"
#include "rbit/gausskl.hpp"

namespace rbit {

/// A real functional with Lipschitz constant one, defined on KL coordinate
/// vectors (Euclidean norm) and on bridge paths (L2[0, 1] norm).
struct LipFunctional {
    std::string name;
    std::function<double(const KLVector&)> on_kl;
    std::function<double(const BridgePath&)> on_bridge;

    double operator()(const KLVector& x) const { return on_kl(x); }
    double operator()(const BridgePath& x) const { return on_bridge(x); }
};

/// x -> <x, e_j>; for paths e_j is the normalized Schauder function s_j.
LipFunctional coord_functional(std::uint64_t j);
LipFunctional norm_functional();
LipFunctional clipped_norm_functional(double c);
/// x -> <x, g>, g a fixed unit vector built from weights 1/j on the first eight
/// basis directions.
LipFunctional soft_linear_functional();

/// coord1, norm, clipped_norm, soft_linear.
std::vector<LipFunctional> builtin_functionals(double clip = 0.5);

/// Accepts the builtin names plus coordN for any N >= 1; ConfigError otherwise.
LipFunctional find_functional(const std::string& name, double clip = 0.5);

} // namespace rbit
