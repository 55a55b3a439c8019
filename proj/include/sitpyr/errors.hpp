#pragma once

#include <stdexcept>
#include <string>

namespace sitpyr {

/// Thrown when an operation needs a structural assumption that the given
/// parameters violate (e.g. equal recovery rates for the region maps).
class constraint_error : public std::invalid_argument {
public:
    explicit constraint_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when an iterative method fails to converge or the integrator
/// cannot continue. Carries the time (or abscissa) at which it gave up.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what, double where = 0.0)
        : std::runtime_error(what), where_(where) {}

    double where() const { return where_; }

private:
    double where_;
};

} // namespace sitpyr
