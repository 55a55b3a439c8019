#include "sitpyr/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace sitpyr {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const char* where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw std::invalid_argument(std::string("config: unknown field '") + it.key() +
                                        "' in " + where);
}

ModelParams parse_params(const json& j) {
    reject_unknown(j, {"beta", "alpha", "nu", "gamma1", "gamma2", "delta", "epsilon"}, "params");
    return ModelParams(j.at("beta").get<double>(), j.at("alpha").get<double>(),
                       j.at("nu").get<double>(), j.at("gamma1").get<double>(),
                       j.at("gamma2").get<double>(), j.at("delta").get<double>(),
                       j.at("epsilon").get<double>());
}

IntegratorConfig parse_integrator(const json& j) {
    reject_unknown(j,
                   {"rel_tol", "abs_tol", "max_step", "initial_step", "event_thresholds",
                    "dense_output", "event_time_tol", "max_steps"},
                   "integrator");
    IntegratorConfig c;
    if (j.contains("rel_tol")) c.rel_tol = j.at("rel_tol").get<double>();
    if (j.contains("abs_tol")) c.abs_tol = j.at("abs_tol").get<double>();
    if (j.contains("max_step")) c.max_step = j.at("max_step").get<double>();
    if (j.contains("initial_step")) c.initial_step = j.at("initial_step").get<double>();
    if (j.contains("event_thresholds"))
        c.event_thresholds = j.at("event_thresholds").get<std::vector<double>>();
    if (j.contains("dense_output")) c.dense_output = j.at("dense_output").get<bool>();
    if (j.contains("event_time_tol")) c.event_time_tol = j.at("event_time_tol").get<double>();
    if (j.contains("max_steps")) c.max_steps = j.at("max_steps").get<long>();
    if (c.rel_tol <= 0.0 || c.abs_tol <= 0.0 || c.max_step <= 0.0)
        throw std::invalid_argument("config: integrator tolerances and max_step must be positive");
    return c;
}

} // namespace

ExperimentKind experiment_from_string(const std::string& s) {
    if (s == "simulate") return ExperimentKind::Simulate;
    if (s == "equilibria") return ExperimentKind::Equilibria;
    if (s == "bifurcate") return ExperimentKind::Bifurcate;
    if (s == "epochs") return ExperimentKind::Epochs;
    if (s == "compare") return ExperimentKind::Compare;
    if (s == "basins") return ExperimentKind::Basins;
    throw std::invalid_argument("config: unknown experiment '" + s + "'");
}

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Simulate: return "simulate";
        case ExperimentKind::Equilibria: return "equilibria";
        case ExperimentKind::Bifurcate: return "bifurcate";
        case ExperimentKind::Epochs: return "epochs";
        case ExperimentKind::Compare: return "compare";
        case ExperimentKind::Basins: return "basins";
    }
    return "simulate";
}

ScenarioConfig parse_config(const std::string& text) {
    json j = json::parse(text);
    reject_unknown(j,
                   {"experiment", "params", "initial", "initial_spt", "t_span", "integrator",
                    "out", "seed", "beta_range", "n_points", "n_epochs", "n_samples", "t_max",
                    "classifier_tol"},
                   "config");
    ScenarioConfig cfg;
    cfg.experiment = experiment_from_string(j.at("experiment").get<std::string>());
    cfg.params = parse_params(j.at("params"));
    if (j.contains("initial")) {
        const json& i = j.at("initial");
        reject_unknown(i, {"S", "I", "T", "P", "Y"}, "initial");
        cfg.initial = State5{i.at("S").get<double>(), i.at("I").get<double>(),
                             i.at("T").get<double>(), i.at("P").get<double>(),
                             i.at("Y").get<double>()};
    }
    if (j.contains("initial_spt")) {
        const json& i = j.at("initial_spt");
        reject_unknown(i, {"S", "P", "T"}, "initial_spt");
        cfg.initial_spt = std::array<double, 3>{i.at("S").get<double>(), i.at("P").get<double>(),
                                                i.at("T").get<double>()};
    }
    if (j.contains("t_span")) cfg.t_span = j.at("t_span").get<std::array<double, 2>>();
    if (j.contains("integrator")) cfg.integrator = parse_integrator(j.at("integrator"));
    if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("beta_range")) cfg.beta_range = j.at("beta_range").get<std::array<double, 2>>();
    if (j.contains("n_points")) cfg.n_points = j.at("n_points").get<int>();
    if (j.contains("n_epochs")) cfg.n_epochs = j.at("n_epochs").get<int>();
    if (j.contains("n_samples")) cfg.n_samples = j.at("n_samples").get<int>();
    if (j.contains("t_max")) cfg.t_max = j.at("t_max").get<double>();
    if (j.contains("classifier_tol")) cfg.classifier_tol = j.at("classifier_tol").get<double>();
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ScenarioConfig& cfg) {
    json j;
    j["experiment"] = to_string(cfg.experiment);
    j["params"] = {{"beta", cfg.params.beta},     {"alpha", cfg.params.alpha},
                   {"nu", cfg.params.nu},         {"gamma1", cfg.params.gamma1},
                   {"gamma2", cfg.params.gamma2}, {"delta", cfg.params.delta},
                   {"epsilon", cfg.params.epsilon}};
    if (cfg.initial)
        j["initial"] = {{"S", cfg.initial->S},
                        {"I", cfg.initial->I},
                        {"T", cfg.initial->T},
                        {"P", cfg.initial->P},
                        {"Y", cfg.initial->Y}};
    if (cfg.initial_spt)
        j["initial_spt"] = {{"S", (*cfg.initial_spt)[0]},
                            {"P", (*cfg.initial_spt)[1]},
                            {"T", (*cfg.initial_spt)[2]}};
    j["t_span"] = cfg.t_span;
    j["integrator"] = {{"rel_tol", cfg.integrator.rel_tol},
                       {"abs_tol", cfg.integrator.abs_tol},
                       {"max_step", cfg.integrator.max_step},
                       {"initial_step", cfg.integrator.initial_step},
                       {"event_thresholds", cfg.integrator.event_thresholds},
                       {"dense_output", cfg.integrator.dense_output},
                       {"event_time_tol", cfg.integrator.event_time_tol},
                       {"max_steps", cfg.integrator.max_steps}};
    j["out"] = cfg.out_dir;
    j["seed"] = cfg.seed;
    j["beta_range"] = cfg.beta_range;
    j["n_points"] = cfg.n_points;
    j["n_epochs"] = cfg.n_epochs;
    j["n_samples"] = cfg.n_samples;
    j["t_max"] = cfg.t_max;
    j["classifier_tol"] = cfg.classifier_tol;
    return j.dump(2) + "\n";
}

ScenarioConfig preset(const std::string& name) {
    ScenarioConfig c;
    if (name == "fig3") {
        // Slow-scale entry-exit scenario: landing with nothing left to relax.
        c.experiment = ExperimentKind::Simulate;
        c.params = ModelParams(0.9, 0.5, 0.7, 1.0 / 6, 1.0 / 6, 0.05, 0.05);
        c.initial = State5{0.1667, 1e-6, 0.0, 0.0, 0.0};
        c.t_span = {0.0, 400.0};
    } else if (name == "fig4") {
        // Intermediate-scale entry-exit scenario: large temporarily immune pool.
        c.experiment = ExperimentKind::Simulate;
        c.params = ModelParams(0.9, 0.5, 0.7, 1.0 / 6, 1.0 / 6, 0.05, 0.05);
        c.initial = State5{0.1667, 1e-6, 0.7333, 0.0, 0.0};
        c.t_span = {0.0, 100.0};
    } else if (name == "fig5") {
        c.experiment = ExperimentKind::Bifurcate;
        c.params = ModelParams(0.25, 5.0, 0.9, 0.25, 0.25, 0.05, 0.05);
        c.beta_range = {0.10, 0.30};
        c.n_points = 201;
    } else if (name == "fig6") {
        c.experiment = ExperimentKind::Compare;
        c.params = ModelParams(2.0, 0.8, 1.1, 1.0, 1.0, 1e-3, 4.8e-5);
        c.initial = State5{0.999, 1e-5, 1e-3, 0.0, 1e-5};
        c.t_span = {0.0, 45.0 / 4.8e-5};
    } else if (name == "fig7a" || name == "fig7b") {
        c.experiment = ExperimentKind::Basins;
        const double beta = name == "fig7a" ? 0.1322 : 0.15;
        c.params = ModelParams(beta, 5.0, 0.9, 0.25, 0.25, 0.05, 0.05);
        c.n_samples = 50;
        c.t_max = 40000.0;
        c.seed = 7;
        c.integrator.rel_tol = 1e-8;
        c.integrator.abs_tol = 1e-10;
    } else if (name.rfind("fig8-nu", 0) == 0) {
        const std::string tail = name.substr(7);
        double nu = 0.0;
        if (tail == "0")
            nu = 0.0;
        else if (tail == "0.1")
            nu = 0.1;
        else if (tail == "0.2")
            nu = 0.2;
        else if (tail == "0.3")
            nu = 0.3;
        else
            throw std::invalid_argument("unknown preset '" + name + "'");
        c.experiment = ExperimentKind::Compare;
        c.params = ModelParams(2.0, 0.8, nu, 1.0, 1.0, 5e-3, 5e-5);
        c.initial = State5{0.999, 1e-5, 0.0, 0.0, 1e-5};
        c.t_span = {0.0, 260.0 / 5e-5};
        c.n_epochs = 3;
    } else {
        throw std::invalid_argument("unknown preset '" + name + "'");
    }
    return c;
}

std::vector<std::string> preset_names() {
    return {"fig3", "fig4", "fig5", "fig6", "fig7a", "fig7b", "fig8-nu0", "fig8-nu0.1",
            "fig8-nu0.2", "fig8-nu0.3"};
}

} // namespace sitpyr
