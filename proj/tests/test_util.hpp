#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "sitpyr/model.hpp"

// Deterministic cross-platform RNG for test data (splitmix64).
struct TestRng {
    std::uint64_t state;

    explicit TestRng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform point of the open 5d region (six exponentials normalized).
    sitpyr::State5 simplex_point() {
        double e[6];
        double sum = 0.0;
        for (double& v : e) {
            v = -std::log(uniform() + 1e-300);
            sum += v;
        }
        return {e[0] / sum, e[1] / sum, e[2] / sum, e[3] / sum, e[4] / sum};
    }
};

// Fixed-step classical RK4 on the 5d system; the test-side integration
// oracle, independent of the adaptive production integrator.
template <class Field>
sitpyr::State5 rk4_oracle(const sitpyr::State5& x0, double t_end, int steps, Field&& f) {
    std::array<double, 5> y = x0.to_array();
    const double h = t_end / steps;
    for (int s = 0; s < steps; ++s) {
        const auto k1 = f(sitpyr::State5::from_array(y));
        std::array<double, 5> tmp;
        for (int i = 0; i < 5; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        const auto k2 = f(sitpyr::State5::from_array(tmp));
        for (int i = 0; i < 5; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        const auto k3 = f(sitpyr::State5::from_array(tmp));
        for (int i = 0; i < 5; ++i) tmp[i] = y[i] + h * k3[i];
        const auto k4 = f(sitpyr::State5::from_array(tmp));
        for (int i = 0; i < 5; ++i)
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return sitpyr::State5::from_array(y);
}
