#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sitpyr/roots.hpp"

using namespace sitpyr;

TEST_CASE("simple roots") {
    auto r = find_root([](double x) { return std::cos(x); }, 0.0, 3.0, 1e-14);
    CHECK(r.converged);
    CHECK(r.x == doctest::Approx(std::acos(0.0)).epsilon(1e-13));

    r = find_root([](double x) { return x * x * x - 2.0; }, 0.0, 2.0, 1e-14);
    CHECK(r.x == doctest::Approx(std::cbrt(2.0)).epsilon(1e-13));
}

TEST_CASE("endpoint roots returned directly") {
    auto r = find_root([](double x) { return x; }, 0.0, 1.0, 1e-14);
    CHECK(r.converged);
    CHECK(r.x == 0.0);
}

TEST_CASE("non-bracketing interval throws") {
    CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-12),
                    numerical_error);
}

TEST_CASE("hard tolerance on a flat function") {
    // Nearly flat near the root; the bisection fallback still converges.
    auto f = [](double x) { return std::pow(x - 0.75, 9); };
    auto r = find_root(f, 0.0, 1.0, 1e-13);
    CHECK(r.converged);
    CHECK(std::abs(r.x - 0.75) < 1e-10);
}
