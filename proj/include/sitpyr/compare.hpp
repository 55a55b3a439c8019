#pragma once

#include <vector>

#include "sitpyr/scenario.hpp"
#include "sitpyr/timescale_maps.hpp"

namespace sitpyr {

/// One epidemic aligned between the direct integration and the discrete map.
struct ComparisonRow {
    int epoch = 0;
    double ode_start_tau1 = 0.0; // upward threshold crossing of I + alpha Y
    double map_start_tau1 = 0.0; // cumulative map prediction
    double time_rel_error = 0.0;
    bool has_landing = false;
    double ode_land_S = 0.0, ode_land_P = 0.0, ode_land_T = 0.0;
    double map_land_S = 0.0, map_land_P = 0.0, map_land_T = 0.0;
    double landing_sup_err = 0.0;
    char exit_scale = '-'; // 'I' intermediate, 'S' slow (map side)
    bool diverged = false;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
    bool diverged = false; // discrete approximation broke down before the ODE ran out
    int ode_epidemics = 0;
    int map_epochs = 0;
    EpochIteration map; // the underlying epoch logs
};

/// Run the direct integration (in log-infective coordinates) and the epoch
/// map from the same initial data and align them epidemic by epidemic.
/// Requires beta > gamma1, gamma1 == gamma2, and a supercritical initial
/// point; throws std::invalid_argument otherwise.
ComparisonReport compare_scenario(const ScenarioConfig& cfg);

std::string comparison_csv(const ComparisonReport& report);

} // namespace sitpyr
