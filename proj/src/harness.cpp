#include "sitpyr/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sitpyr/bifurcation.hpp"
#include "sitpyr/compare.hpp"
#include "sitpyr/csv.hpp"
#include "sitpyr/equilibria.hpp"
#include "sitpyr/timescale_maps.hpp"

namespace sitpyr {

namespace {

std::string join(const std::string& dir, const std::string& name) {
    if (dir.empty()) return name;
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

const char* event_name(EventKind k) {
    switch (k) {
        case EventKind::EpidemicStart: return "epidemic_start";
        case EventKind::EpidemicEnd: return "epidemic_end";
        case EventKind::PeakI: return "peak_I";
        case EventKind::PeakY: return "peak_Y";
    }
    return "?";
}

void state_columns(std::ostringstream& out, const State5& s) {
    const double R = 1.0 - s.sum();
    out << csv_num(s.S) << ',' << csv_num(s.I) << ',' << csv_num(s.T) << ',' << csv_num(s.P)
        << ',' << csv_num(s.Y) << ',' << csv_num(R);
}

RunResult run_simulate(const ScenarioConfig& cfg) {
    if (!cfg.initial) throw std::invalid_argument("simulate: missing initial state");
    if (!(cfg.t_span[1] > cfg.t_span[0]))
        throw std::invalid_argument("simulate: empty t_span");
    const Trajectory tr =
        integrate(*cfg.initial, cfg.params, cfg.t_span[0], cfg.t_span[1], cfg.integrator);

    std::ostringstream ts;
    ts << "t,S,I,T,P,Y,R\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        ts << csv_num(tr.times[i]) << ',';
        state_columns(ts, tr.states[i]);
        ts << '\n';
    }
    std::ostringstream ev;
    ev << "t,kind,threshold,S,I,T,P,Y,R\n";
    for (const auto& e : tr.events) {
        ev << csv_num(e.time) << ',' << event_name(e.kind) << ',' << csv_num(e.threshold) << ',';
        state_columns(ev, e.state);
        ev << '\n';
    }
    RunResult res;
    res.files.push_back(join(cfg.out_dir, "timeseries.csv"));
    atomic_write(res.files.back(), ts.str());
    res.files.push_back(join(cfg.out_dir, "events.csv"));
    atomic_write(res.files.back(), ev.str());
    return res;
}

void equilibrium_columns(std::ostringstream& out, const EquilibriumRecord& rec) {
    out << csv_num(rec.state.S) << ',' << csv_num(rec.state.I) << ',' << csv_num(rec.state.T)
        << ',' << csv_num(rec.state.P) << ',' << csv_num(rec.state.Y) << ','
        << csv_num(rec.state.R);
}

RunResult run_equilibria(const ScenarioConfig& cfg) {
    std::ostringstream out;
    out << "kind,S,I,T,P,Y,R,stable";
    for (int i = 1; i <= 5; ++i) out << ",eig" << i << "_re,eig" << i << "_im";
    out << '\n';
    auto emit = [&](const EquilibriumRecord& rec, const char* kind) {
        out << kind << ',';
        equilibrium_columns(out, rec);
        out << ',' << (rec.stable ? 1 : 0);
        for (const auto& e : rec.eigenvalues)
            out << ',' << csv_num(e.real()) << ',' << csv_num(e.imag());
        out << '\n';
    };
    emit(dfe_record(cfg.params), "dfe");
    for (const auto& rec : endemic_equilibria(cfg.params)) emit(rec, "endemic");

    const ExistenceVerdict v = existence_verdict(cfg.params);
    std::ostringstream vout;
    vout << "analytic,r_star,r_star_valid,finite_delta_count,disagreement\n";
    const char* kind = v.analytic == ExistenceKind::UniqueEndemic ? "unique"
                     : v.analytic == ExistenceKind::TwoEndemic    ? "two"
                                                                  : "none";
    vout << kind << ',' << csv_num(v.r_star) << ',' << (v.r_star_valid ? 1 : 0) << ','
         << v.finite_delta_count << ',' << (v.disagreement ? 1 : 0) << '\n';

    RunResult res;
    res.files.push_back(join(cfg.out_dir, "equilibria.csv"));
    atomic_write(res.files.back(), out.str());
    res.files.push_back(join(cfg.out_dir, "existence.csv"));
    atomic_write(res.files.back(), vout.str());
    return res;
}

RunResult run_bifurcate(const ScenarioConfig& cfg) {
    if (!(cfg.beta_range[1] > cfg.beta_range[0]) || cfg.n_points < 2)
        throw std::invalid_argument("bifurcate: need beta_range and n_points >= 2");
    const auto branch =
        branch_scan(cfg.params, cfg.beta_range[0], cfg.beta_range[1], cfg.n_points);

    std::ostringstream out;
    out << "beta,branch,S,I,T,P,Y,R,max_real_eig,stable\n";
    for (const auto& bp : branch) {
        const char* side = bp.branch == BranchSide::Trivial ? "dfe"
                         : bp.branch == BranchSide::Lower   ? "lower"
                         : bp.branch == BranchSide::Upper   ? "upper"
                                                            : "unique";
        double max_re = -1e300;
        for (const auto& e : bp.equilibrium.eigenvalues) max_re = std::max(max_re, e.real());
        out << csv_num(bp.beta) << ',' << side << ',';
        equilibrium_columns(out, bp.equilibrium);
        out << ',' << csv_num(max_re) << ',' << (bp.equilibrium.stable ? 1 : 0) << '\n';
    }

    const auto bifs = detect_bifurcations(cfg.params, cfg.beta_range[0], cfg.beta_range[1]);
    std::ostringstream bout;
    bout << "kind,beta,alpha,S,I,T,P,Y,R\n";
    for (const auto& b : bifs) {
        const char* kind = b.kind == BifKind::BP ? "BP" : b.kind == BifKind::LP ? "LP" : "Hopf";
        bout << kind << ',' << csv_num(b.beta) << ',' << csv_num(b.alpha) << ','
             << csv_num(b.state.S) << ',' << csv_num(b.state.I) << ',' << csv_num(b.state.T)
             << ',' << csv_num(b.state.P) << ',' << csv_num(b.state.Y) << ','
             << csv_num(b.state.R) << '\n';
    }

    RunResult res;
    res.files.push_back(join(cfg.out_dir, "branches.csv"));
    atomic_write(res.files.back(), out.str());
    res.files.push_back(join(cfg.out_dir, "bifurcations.csv"));
    atomic_write(res.files.back(), bout.str());
    return res;
}

RunResult run_epochs(const ScenarioConfig& cfg) {
    double S, P, T;
    if (cfg.initial_spt) {
        S = (*cfg.initial_spt)[0];
        P = (*cfg.initial_spt)[1];
        T = (*cfg.initial_spt)[2];
    } else if (cfg.initial) {
        S = cfg.initial->S;
        P = cfg.initial->P;
        T = cfg.initial->T;
    } else {
        throw std::invalid_argument("epochs: missing initial point");
    }
    if (cfg.n_epochs < 1) throw std::invalid_argument("epochs: n_epochs must be >= 1");
    const EpochIteration it = iterate_epochs(S, P, T, cfg.n_epochs, cfg.params);

    std::ostringstream out;
    out << "epoch,entry_S,entry_P,entry_T,land_S,land_P,land_T,exit_scale,exit_time_tau1,"
           "exit_S,exit_P,exit_T\n";
    for (const auto& log : it.epochs) {
        out << log.epoch << ',' << csv_num(log.entry_S) << ',' << csv_num(log.entry_P) << ','
            << csv_num(log.entry_T) << ',' << csv_num(log.landing.S_inf) << ','
            << csv_num(log.landing.P_inf) << ',' << csv_num(log.landing.T_inf) << ','
            << (log.exit.scale == ExitScale::Intermediate ? "intermediate" : "slow") << ','
            << csv_num(log.exit_time_tau1) << ',' << csv_num(log.exit.S) << ','
            << csv_num(log.exit.P) << ',' << csv_num(log.exit.T) << '\n';
    }
    RunResult res;
    res.files.push_back(join(cfg.out_dir, "epochs.csv"));
    atomic_write(res.files.back(), out.str());
    return res;
}

RunResult run_compare(const ScenarioConfig& cfg) {
    const ComparisonReport report = compare_scenario(cfg);
    RunResult res;
    res.files.push_back(join(cfg.out_dir, "compare.csv"));
    atomic_write(res.files.back(), comparison_csv(report));
    return res;
}

RunResult run_basins(const ScenarioConfig& cfg) {
    if (cfg.n_samples < 0) throw std::invalid_argument("basins: n_samples must be >= 0");
    if (cfg.n_samples > 0 && !(cfg.t_max > 0.0))
        throw std::invalid_argument("basins: t_max must be positive");
    const auto samples = basin_sample(cfg.params, cfg.n_samples, cfg.seed, cfg.t_max,
                                      cfg.classifier_tol, cfg.integrator);
    std::ostringstream out;
    out << "index,S,I,T,P,Y,label\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        const char* label = s.label == AttractorLabel::DFE        ? "dfe"
                          : s.label == AttractorLabel::Endemic    ? "endemic"
                                                                  : "undecided";
        out << i << ',' << csv_num(s.initial.S) << ',' << csv_num(s.initial.I) << ','
            << csv_num(s.initial.T) << ',' << csv_num(s.initial.P) << ','
            << csv_num(s.initial.Y) << ',' << label << '\n';
    }
    RunResult res;
    res.files.push_back(join(cfg.out_dir, "basins.csv"));
    atomic_write(res.files.back(), out.str());
    return res;
}

} // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
    RunResult res;
    switch (cfg.experiment) {
        case ExperimentKind::Simulate: res = run_simulate(cfg); break;
        case ExperimentKind::Equilibria: res = run_equilibria(cfg); break;
        case ExperimentKind::Bifurcate: res = run_bifurcate(cfg); break;
        case ExperimentKind::Epochs: res = run_epochs(cfg); break;
        case ExperimentKind::Compare: res = run_compare(cfg); break;
        case ExperimentKind::Basins: res = run_basins(cfg); break;
    }
    const std::string cfg_path = join(cfg.out_dir, "config.json");
    atomic_write(cfg_path, serialize_config(cfg));
    res.files.push_back(cfg_path);
    return res;
}

} // namespace sitpyr
