#pragma once

#include <cstdint>
#include <vector>

#include "sitpyr/model.hpp"

namespace sitpyr {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 1e18;
    double initial_step = 0.0; // 0 = choose automatically
    std::vector<double> event_thresholds = {1e-6};
    bool dense_output = true; // cubic Hermite refinement of event times
    double event_time_tol = 1e-10;
    long max_steps = 50000000;
};

enum class EventKind { EpidemicStart, EpidemicEnd, PeakI, PeakY };

struct Event {
    EventKind kind;
    double time;
    State5 state;
    double threshold; // the crossed threshold; 0 for peaks
};

struct Trajectory {
    std::vector<double> times;
    std::vector<State5> states;
    std::vector<Event> events;

    const State5& back() const { return states.back(); }
};

enum class FieldKind { Full, FastLimit };

/// Adaptive Dormand-Prince 5(4) integration of the model. Events are
/// up/down crossings of I + alpha Y through the configured thresholds and
/// local maxima of I and Y, localized on the dense output to ~1e-10 in time.
/// Throws numerical_error with the failure time on step-size underflow.
Trajectory integrate(const State5& initial, const ModelParams& p, double t0, double t1,
                     const IntegratorConfig& cfg = {}, FieldKind field = FieldKind::Full);

/// Same system integrated in (S, T, P, Y, log(I + alpha Y)) coordinates,
/// which follow inter-epidemic dips of the infective pressure far below the
/// double-precision floor. Exact for gamma1 == gamma2 (required); needs
/// I + alpha Y > 0 initially.
Trajectory integrate_log_infectives(const State5& initial, const ModelParams& p, double t0,
                                    double t1, const IntegratorConfig& cfg = {});

enum class AttractorLabel { DFE, Endemic, Undecided };

struct BasinSample {
    State5 initial;
    AttractorLabel label;
};

/// n initial conditions drawn uniformly on the simplex (normalized
/// exponentials, seeded), each integrated to t_max and labelled: DFE when
/// I + Y < classifier_tol at t_max, Endemic when within 1e-4 of an endemic
/// equilibrium, Undecided otherwise. Per-sample integration failures yield
/// Undecided rather than aborting the batch. Results are ordered by sample
/// index; honors SITPYR_THREADS for parallel evaluation.
std::vector<BasinSample> basin_sample(const ModelParams& p, int n, std::uint64_t seed,
                                      double t_max, double classifier_tol = 1e-8,
                                      const IntegratorConfig& cfg = {});

} // namespace sitpyr
