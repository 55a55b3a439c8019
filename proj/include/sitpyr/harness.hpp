#pragma once

#include <string>
#include <vector>

#include "sitpyr/scenario.hpp"

namespace sitpyr {

struct RunResult {
    std::vector<std::string> files;
};

/// Dispatch a scenario to the matching module and write its CSV artifacts
/// under cfg.out_dir. Validates before writing anything; throws on invalid
/// configs and propagates numerical failures.
RunResult run_scenario(const ScenarioConfig& cfg);

} // namespace sitpyr
