#include "rbit/fixtures.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rbit/errors.hpp"

namespace rbit {

double Fixture::lower() const noexcept {
    return value == 0.0 ? -tolerance : value - tolerance * std::abs(value);
}

double Fixture::upper() const noexcept {
    return value == 0.0 ? tolerance : value + tolerance * std::abs(value);
}

bool Fixture::accepts(double observed) const noexcept {
    return observed >= lower() && observed <= upper();
}

FixtureSet FixtureSet::parse(const std::string& text) {
    FixtureSet set;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream fields(line);
        Fixture f;
        if (!(fields >> f.name))
            continue;
        if (!(fields >> f.value >> f.tolerance) || f.tolerance < 0.0)
            throw ConfigError("fixtures line " + std::to_string(lineno) +
                              ": expected `name value tolerance provenance`");
        std::getline(fields >> std::ws, f.provenance);
        if (set.items_.count(f.name))
            throw ConfigError("fixtures line " + std::to_string(lineno) + ": duplicate '" + f.name + "'");
        set.items_.emplace(f.name, f);
    }
    return set;
}

FixtureSet FixtureSet::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open fixture file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

const Fixture& FixtureSet::get(const std::string& name) const {
    const auto it = items_.find(name);
    if (it == items_.end())
        throw ConfigError("fixture '" + name + "' not found");
    return it->second;
}

std::vector<std::string> FixtureSet::names() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : items_)
        out.push_back(k);
    return out;
}

} // namespace rbit
