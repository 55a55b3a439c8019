#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sitpyr/harness.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::string seed;
    double tol = 0.0;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required) {
    auto* opt = cmd->add_option("--config", flags.config_path, "scenario config file (JSON)");
    if (config_required) opt->required();
    cmd->add_option("--out", flags.out_dir, "output directory (overrides config)");
    cmd->add_option("--seed", flags.seed, "random seed (overrides config)");
    cmd->add_option("--tol", flags.tol,
                    "relative integrator tolerance (abs_tol follows as tol/100)");
}

void apply_overrides(sitpyr::ScenarioConfig& cfg, const CommonFlags& flags) {
    if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
    if (!flags.seed.empty()) cfg.seed = std::stoull(flags.seed);
    if (flags.tol > 0.0) {
        cfg.integrator.rel_tol = flags.tol;
        cfg.integrator.abs_tol = flags.tol / 100.0;
    }
}

int run_and_report(const sitpyr::ScenarioConfig& cfg) {
    const sitpyr::RunResult res = sitpyr::run_scenario(cfg);
    for (const auto& f : res.files) std::printf("wrote %s\n", f.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiscale reinfection-model toolkit"};
    app.require_subcommand(1);

    const char* subs[] = {"simulate", "equilibria", "bifurcate", "epochs", "compare", "basins"};
    CommonFlags flags[6];
    for (int i = 0; i < 6; ++i) {
        auto* cmd = app.add_subcommand(subs[i], std::string("run a ") + subs[i] + " scenario");
        add_common(cmd, flags[i], true);
    }

    std::string preset_name;
    CommonFlags preset_flags;
    auto* preset_cmd = app.add_subcommand("preset", "run a built-in scenario by name");
    preset_cmd->add_option("name", preset_name, "preset name")->required();
    add_common(preset_cmd, preset_flags, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (preset_cmd->parsed()) {
            sitpyr::ScenarioConfig cfg = sitpyr::preset(preset_name);
            if (preset_flags.out_dir.empty()) preset_flags.out_dir = "out/" + preset_name;
            apply_overrides(cfg, preset_flags);
            return run_and_report(cfg);
        }
        for (int i = 0; i < 6; ++i) {
            auto* cmd = app.get_subcommand(subs[i]);
            if (!cmd->parsed()) continue;
            sitpyr::ScenarioConfig cfg = sitpyr::load_config(flags[i].config_path);
            cfg.experiment = sitpyr::experiment_from_string(subs[i]);
            apply_overrides(cfg, flags[i]);
            return run_and_report(cfg);
        }
    } catch (const std::exception& err) {
        nlohmann::json rec;
        rec["error"] = err.what();
        std::fprintf(stderr, "%s\n", rec.dump().c_str());
        return 1;
    }
    return 1;
}
