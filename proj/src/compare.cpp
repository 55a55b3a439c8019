#include "sitpyr/compare.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sitpyr/csv.hpp"

namespace sitpyr {

namespace {

struct OdeEpidemic {
    double start_tau1 = 0.0;
    bool has_landing = false;
    double land_S = 0.0, land_P = 0.0, land_T = 0.0;
};

std::vector<OdeEpidemic> extract_epidemics(const Trajectory& tr, double threshold, double eps) {
    std::vector<OdeEpidemic> out;
    // Entries are upward crossings; the run itself starts one epidemic if the
    // initial pressure already sits at/above the threshold.
    std::vector<double> ups;
    std::vector<std::pair<double, State5>> downs;
    for (const auto& ev : tr.events) {
        if (ev.threshold != threshold) continue;
        if (ev.kind == EventKind::EpidemicStart) ups.push_back(ev.time);
        if (ev.kind == EventKind::EpidemicEnd) downs.emplace_back(ev.time, ev.state);
    }
    std::vector<double> entries;
    entries.push_back(0.0);
    for (double u : ups) entries.push_back(u);
    // Drop a spurious initial entry if the run actually starts below threshold.
    if (!downs.empty() && !ups.empty() && ups.front() < downs.front().first)
        entries.erase(entries.begin());

    std::size_t d = 0;
    for (double e : entries) {
        OdeEpidemic epi;
        epi.start_tau1 = eps * e;
        while (d < downs.size() && downs[d].first < e) ++d;
        if (d < downs.size()) {
            epi.has_landing = true;
            epi.land_S = downs[d].second.S;
            epi.land_P = downs[d].second.P;
            epi.land_T = downs[d].second.T;
            ++d;
        }
        out.push_back(epi);
    }
    return out;
}

} // namespace

ComparisonReport compare_scenario(const ScenarioConfig& cfg) {
    const ModelParams& p = cfg.params;
    p.gamma();
    if (basic_reproduction_number(p) <= 1.0)
        throw std::invalid_argument("compare: requires beta > gamma1");
    if (!(cfg.t_span[1] > cfg.t_span[0]))
        throw std::invalid_argument("compare: empty t_span");
    if (cfg.integrator.event_thresholds.empty())
        throw std::invalid_argument("compare: need an event threshold");

    State5 x0;
    if (cfg.initial) {
        x0 = *cfg.initial;
    } else if (cfg.initial_spt) {
        // Manifold entry: seed the infective pressure at the event threshold.
        x0 = State5{(*cfg.initial_spt)[0], cfg.integrator.event_thresholds.front(),
                    (*cfg.initial_spt)[2], (*cfg.initial_spt)[1], 0.0};
    } else {
        throw std::invalid_argument("compare: missing initial state");
    }
    if (classify_region(x0.S, x0.P, p).region != Region::Supercritical)
        throw std::invalid_argument("compare: initial point is not supercritical");

    const double threshold = cfg.integrator.event_thresholds.front();

    ComparisonReport report;
    const Trajectory tr =
        integrate_log_infectives(x0, p, cfg.t_span[0], cfg.t_span[1], cfg.integrator);
    const std::vector<OdeEpidemic> ode = extract_epidemics(tr, threshold, p.epsilon);
    report.ode_epidemics = static_cast<int>(ode.size());

    const int max_epochs = std::max(cfg.n_epochs, static_cast<int>(ode.size()) + 2);
    report.map = iterate_epochs(x0.S, x0.P, x0.T, max_epochs, p);
    report.map_epochs = static_cast<int>(report.map.epochs.size());

    double cum_tau1 = 0.0;
    const std::size_t n = std::min(ode.size(), report.map.epochs.size());
    for (std::size_t k = 0; k < n; ++k) {
        const EpochLog& log = report.map.epochs[k];
        ComparisonRow row;
        row.epoch = static_cast<int>(k) + 1;
        row.ode_start_tau1 = ode[k].start_tau1;
        row.map_start_tau1 = cum_tau1;
        row.time_rel_error = k == 0 ? 0.0
                                    : std::abs(row.map_start_tau1 - row.ode_start_tau1) /
                                          std::max(std::abs(row.ode_start_tau1), 1e-12);
        row.has_landing = ode[k].has_landing;
        if (row.has_landing) {
            row.ode_land_S = ode[k].land_S;
            row.ode_land_P = ode[k].land_P;
            row.ode_land_T = ode[k].land_T;
            row.map_land_S = log.landing.S_inf;
            row.map_land_P = log.landing.P_inf;
            row.map_land_T = log.landing.T_inf;
            row.landing_sup_err = std::max({std::abs(row.ode_land_S - row.map_land_S),
                                            std::abs(row.ode_land_P - row.map_land_P),
                                            std::abs(row.ode_land_T - row.map_land_T)});
        }
        row.exit_scale = log.exit.scale == ExitScale::Intermediate ? 'I' : 'S';
        // Breakdown test: near the endemic equilibrium the orbit stops
        // reaching the critical manifold and the map loses meaning.
        if ((row.has_landing && row.landing_sup_err > 0.1) ||
            (k > 0 && row.time_rel_error > 0.5)) {
            row.diverged = true;
            report.diverged = true;
        }
        report.rows.push_back(row);
        cum_tau1 += log.exit_time_tau1;
        if (report.diverged) break;
    }
    return report;
}

std::string comparison_csv(const ComparisonReport& report) {
    std::ostringstream out;
    out << "epoch,ode_start_tau1,map_start_tau1,time_rel_error,ode_land_S,ode_land_P,ode_land_T,"
           "map_land_S,map_land_P,map_land_T,landing_sup_err,exit_scale,diverged\n";
    for (const auto& r : report.rows) {
        out << r.epoch << ',' << csv_num(r.ode_start_tau1) << ',' << csv_num(r.map_start_tau1)
            << ',' << csv_num(r.time_rel_error) << ',' << csv_num(r.ode_land_S) << ','
            << csv_num(r.ode_land_P) << ',' << csv_num(r.ode_land_T) << ','
            << csv_num(r.map_land_S) << ',' << csv_num(r.map_land_P) << ','
            << csv_num(r.map_land_T) << ',' << csv_num(r.landing_sup_err) << ',' << r.exit_scale
            << ',' << (r.diverged ? 1 : 0) << '\n';
    }
    return out.str();
}

} // namespace sitpyr
