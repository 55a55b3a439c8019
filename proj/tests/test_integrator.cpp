#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sitpyr/integrator.hpp"
#include "sitpyr/timescale_maps.hpp"
#include "test_util.hpp"

using namespace sitpyr;

namespace {

double sup_diff(const State5& a, const State5& b) {
    return std::max({std::abs(a.S - b.S), std::abs(a.I - b.I), std::abs(a.T - b.T),
                     std::abs(a.P - b.P), std::abs(a.Y - b.Y)});
}

} // namespace

TEST_CASE("infection-free initial data stays put") {
    const ModelParams p(2.0, 0.8, 1.1, 1.0, 1.0, 1e-3, 1e-3);
    const Trajectory tr = integrate({1, 0, 0, 0, 0}, p, 0.0, 50.0);
    CHECK(sup_diff(tr.back(), {1, 0, 0, 0, 0}) < 1e-12);
    CHECK(tr.events.empty());
}

TEST_CASE("matches the fixed-step oracle") {
    const ModelParams p(0.9, 0.5, 0.7, 1.0 / 6, 1.0 / 6, 0.05, 0.05);
    const State5 x0{0.4, 0.01, 0.1, 0.3, 0.005};
    const Trajectory tr = integrate(x0, p, 0.0, 40.0);
    const State5 oracle =
        rk4_oracle(x0, 40.0, 80000, [&](const State5& s) { return vector_field5(s, p); });
    CHECK(sup_diff(tr.back(), oracle) < 1e-8);
}

TEST_CASE("halving tolerances moves terminal states by less than 10x the finer tolerance") {
    TestRng rng(51);
    for (int trial = 0; trial < 10; ++trial) {
        const double g = rng.uniform(0.2, 1.0);
        const ModelParams p(rng.uniform(0.3, 2.5), rng.uniform(0.2, 2.0), rng.uniform(0.0, 1.5), g,
                            g, rng.uniform(0.01, 0.2), rng.uniform(0.01, 0.2));
        const State5 x0 = rng.simplex_point();
        IntegratorConfig coarse;
        coarse.rel_tol = 1e-9;
        coarse.abs_tol = 1e-11;
        coarse.dense_output = false;
        IntegratorConfig fine = coarse;
        fine.rel_tol /= 2.0;
        fine.abs_tol /= 2.0;
        const State5 a = integrate(x0, p, 0.0, 20.0, coarse).back();
        const State5 b = integrate(x0, p, 0.0, 20.0, fine).back();
        CHECK(sup_diff(a, b) < 10.0 * fine.rel_tol);
    }
}

TEST_CASE("trajectories respect the region up to round-off") {
    TestRng rng(52);
    const ModelParams p(2.0, 0.8, 1.1, 1.0, 1.0, 0.05, 0.05);
    IntegratorConfig cfg;
    for (int trial = 0; trial < 5; ++trial) {
        const Trajectory tr = integrate(rng.simplex_point(), p, 0.0, 80.0, cfg);
        for (const auto& s : tr.states) {
            CHECK(std::min({s.S, s.I, s.T, s.P, s.Y}) >= -10.0 * cfg.abs_tol);
            CHECK(s.sum() <= 1.0 + 10.0 * cfg.abs_tol);
        }
    }
}

TEST_CASE("slow drift builds the partially susceptible pool") {
    const ModelParams p(0.9, 0.5, 0.7, 1.0 / 6, 1.0 / 6, 0.05, 0.05);
    const Trajectory tr = integrate({0.1667, 0, 0, 0, 0}, p, 0.0, 400.0);
    CHECK(tr.back().P > 0.1);
    CHECK(tr.back().S > 0.1667);
}

TEST_CASE("event detection") {
    const ModelParams p(2.0, 1.0, 1.0, 1.0, 1.0, 1e-3, 1e-3);
    IntegratorConfig cfg;
    cfg.event_thresholds = {1e-4};
    const State5 x0{0.999, 1e-6, 0.0, 0.0, 0.0};
    const Trajectory tr = integrate(x0, p, 0.0, 80.0, cfg);

    bool saw_start = false, saw_end = false, saw_peak = false;
    double t_start = 0, t_peak = 0, t_end = 0;
    for (const auto& ev : tr.events) {
        if (ev.kind == EventKind::EpidemicStart && !saw_start) {
            saw_start = true;
            t_start = ev.time;
            CHECK(ev.state.I + p.alpha * ev.state.Y == doctest::Approx(1e-4).epsilon(1e-6));
        }
        if (ev.kind == EventKind::PeakI && !saw_peak) {
            saw_peak = true;
            t_peak = ev.time;
        }
        if (ev.kind == EventKind::EpidemicEnd) {
            saw_end = true;
            t_end = ev.time;
        }
    }
    REQUIRE(saw_start);
    REQUIRE(saw_peak);
    REQUIRE(saw_end);
    CHECK(t_start < t_peak);
    CHECK(t_peak < t_end);

    SUBCASE("bitwise reproducible") {
        const Trajectory tr2 = integrate(x0, p, 0.0, 80.0, cfg);
        REQUIRE(tr2.events.size() == tr.events.size());
        for (std::size_t i = 0; i < tr.events.size(); ++i) {
            CHECK(tr2.events[i].time == tr.events[i].time);
            CHECK(sup_diff(tr2.events[i].state, tr.events[i].state) == 0.0);
        }
    }
}

TEST_CASE("log-infective integration agrees with the plain one") {
    const ModelParams p(0.9, 0.5, 0.7, 1.0 / 6, 1.0 / 6, 0.05, 0.05);
    const State5 x0{0.1667, 1e-6, 0.7333, 0.0, 0.0};
    const Trajectory a = integrate(x0, p, 0.0, 60.0);
    const Trajectory b = integrate_log_infectives(x0, p, 0.0, 60.0);
    CHECK(sup_diff(a.back(), b.back()) < 1e-8);

    CHECK_THROWS_AS(integrate_log_infectives({1, 0, 0, 0, 0}, p, 0.0, 1.0),
                    std::invalid_argument);
    const ModelParams uneq(0.9, 0.5, 0.7, 1.0 / 6, 1.0 / 5, 0.05, 0.05);
    CHECK_THROWS_AS(integrate_log_infectives(x0, uneq, 0.0, 1.0), constraint_error);
}

TEST_CASE("reignition time approaches the entry-exit prediction") {
    // Landing with a large immune pool at small scale separation.
    const ModelParams p(0.9, 0.5, 0.7, 1.0 / 6, 1.0 / 6, 1e-3, 1e-3);
    const auto ev = intermediate_exit({0.1667, 0.0, 0.7333}, p);
    REQUIRE(ev.has_value());

    IntegratorConfig cfg;
    cfg.event_thresholds = {1e-6};
    const State5 x0{0.1667, 1e-6, 0.7333, 0.0, 0.0};
    const Trajectory tr = integrate_log_infectives(x0, p, 0.0, 400.0, cfg);
    double t_up = -1.0;
    for (const auto& e : tr.events)
        if (e.kind == EventKind::EpidemicStart) {
            t_up = e.time;
            break;
        }
    REQUIRE(t_up > 0.0);
    const double tau1 = p.epsilon * t_up;
    CHECK(std::abs(tau1 - ev->exit_time) / ev->exit_time < 0.20);
}

TEST_CASE("basin sampling") {
    SUBCASE("empty request") {
        const ModelParams p(0.2, 1.0, 1.0, 0.25, 0.25, 0.05, 0.05);
        CHECK(basin_sample(p, 0, 1, 10.0).empty());
    }
    SUBCASE("certified regime sends every sample to the infection-free state") {
        const ModelParams p(0.2, 1.0, 1.0, 0.25, 0.25, 0.05, 0.05);
        IntegratorConfig cfg;
        cfg.rel_tol = 1e-8;
        cfg.abs_tol = 1e-10;
        const auto samples = basin_sample(p, 20, 5, 2000.0, 1e-8, cfg);
        REQUIRE(samples.size() == 20);
        for (const auto& s : samples) CHECK(s.label == AttractorLabel::DFE);
    }
    SUBCASE("seeded draws are reproducible") {
        const ModelParams p(0.2, 1.0, 1.0, 0.25, 0.25, 0.05, 0.05);
        const auto a = basin_sample(p, 5, 42, 100.0);
        const auto b = basin_sample(p, 5, 42, 100.0);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(sup_diff(a[i].initial, b[i].initial) == 0.0);
            CHECK(a[i].label == b[i].label);
        }
        // Initial conditions live in the region.
        for (const auto& s : a) {
            CHECK(s.initial.sum() <= 1.0);
            CHECK(std::min({s.initial.S, s.initial.I, s.initial.T, s.initial.P, s.initial.Y}) >=
                  0.0);
        }
    }
}

TEST_CASE("bad inputs") {
    const ModelParams p(2.0, 0.8, 1.1, 1.0, 1.0, 1e-3, 1e-3);
    CHECK_THROWS_AS(integrate({0.5, 0, 0, 0, 0}, p, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate({std::nan(""), 0, 0, 0, 0}, p, 0.0, 1.0), std::invalid_argument);
}
