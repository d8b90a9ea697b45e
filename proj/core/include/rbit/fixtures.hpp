#pragma once

#include <map>
#include <string>
#include <vector>

namespace rbit {

/// A recorded reference value. Comparisons are relative unless value == 0.
struct Fixture {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    std::string provenance;

    bool accepts(double observed) const noexcept;
    double lower() const noexcept;
    double upper() const noexcept;
};

/// Plain-text fixture file: one `name value tolerance provenance...` per line,
/// '#' starts a comment.
class FixtureSet {
public:
    static FixtureSet parse(const std::string& text);
    static FixtureSet load(const std::string& path);

    bool contains(const std::string& name) const { return items_.count(name) != 0; }
    /// ConfigError if missing.
    const Fixture& get(const std::string& name) const;
    std::vector<std::string> names() const;

private:
    std::map<std::string, Fixture> items_;
};

struct FixtureCheck {
    std::string name;
    double observed = 0.0;
    bool ok = false;
};

} // namespace rbit
