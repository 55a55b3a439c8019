#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "sitpyr/integrator.hpp"
#include "sitpyr/model.hpp"

namespace sitpyr {

enum class ExperimentKind { Simulate, Equilibria, Bifurcate, Epochs, Compare, Basins };

/// One experiment description, loadable from / storable to a JSON file.
/// Unknown fields are rejected on load.
struct ScenarioConfig {
    ExperimentKind experiment = ExperimentKind::Simulate;
    ModelParams params{1.0, 1.0, 1.0, 1.0, 1.0, 0.1, 0.1};
    std::optional<State5> initial;                   // full 5d state
    std::optional<std::array<double, 3>> initial_spt; // (S, P, T) on the manifold
    std::array<double, 2> t_span{0.0, 0.0};
    IntegratorConfig integrator{};
    std::string out_dir = "out";
    std::uint64_t seed = 0;

    // bifurcate / lp-curve grids
    std::array<double, 2> beta_range{0.0, 0.0};
    int n_points = 0;

    // epochs
    int n_epochs = 8;

    // basins
    int n_samples = 0;
    double t_max = 0.0;
    double classifier_tol = 1e-8;
};

ExperimentKind experiment_from_string(const std::string& s);
std::string to_string(ExperimentKind k);

ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& json_text);
std::string serialize_config(const ScenarioConfig& cfg);

/// Built-in scenario presets ("fig3", "fig4", "fig5", "fig6", "fig7a",
/// "fig7b", "fig8-nu0", "fig8-nu0.1", "fig8-nu0.2", "fig8-nu0.3").
ScenarioConfig preset(const std::string& name);
std::vector<std::string> preset_names();

} // namespace sitpyr
