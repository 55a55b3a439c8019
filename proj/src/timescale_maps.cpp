#include "sitpyr/timescale_maps.hpp"

#include <cmath>

#include "sitpyr/roots.hpp"

namespace sitpyr {

namespace {

// (1 - e^{-x})/x, stable near zero.
double expm1_ratio(double x) {
    if (x == 0.0) return 1.0;
    return -std::expm1(-x) / x;
}

// int_0^T x e^{-x} dx = 1 - (1+T) e^{-T}, by series for small T.
double int_x_exp(double T) {
    if (T < 1e-3) {
        const double t2 = T * T;
        return t2 * (0.5 - T / 3.0 + t2 / 8.0 - t2 * T / 30.0);
    }
    return 1.0 - (1.0 + T) * std::exp(-T);
}

// Slow entry-exit objective Psi(T); its first positive zero is the exit time.
double slow_exit_objective(double T, double S_fin, double P_fin, const ModelParams& p) {
    const double g = p.gamma();
    const double an = p.alpha * p.nu;
    const double R_fin = 1.0 - S_fin - P_fin;
    const double e1 = -std::expm1(-T);
    const double e2 = int_x_exp(T);
    const double integral =
        T - (1.0 - an) * P_fin * e1 - R_fin * e1 - (1.0 - an) * R_fin * e2;
    return -g * T + p.beta * integral;
}

} // namespace

std::pair<double, double> intermediate_flow(double T_inf, double P_inf, double tau1) {
    if (tau1 < 0.0) throw std::domain_error("intermediate_flow: tau1 must be non-negative");
    const double decay = std::exp(-tau1);
    return {T_inf * decay, P_inf + T_inf * (1.0 - decay)};
}

double intermediate_exit_function(double x, const LandingPoint& lp, const ModelParams& p) {
    const double g = p.gamma();
    if (x < 0.0) throw std::domain_error("intermediate_exit_function: x must be non-negative");
    const double an = p.alpha * p.nu;
    if (x == 0.0) return -g + p.beta * (lp.S_inf + an * lp.P_inf);
    return -g + p.beta * (lp.S_inf + an * lp.P_inf + an * lp.T_inf) -
           p.beta * an * lp.T_inf * expm1_ratio(x);
}

std::optional<ExitEvent> intermediate_exit(const LandingPoint& lp, const ModelParams& p) {
    const double g = p.gamma();
    const double limit = -g + p.beta * (lp.S_inf + p.alpha * p.nu * (lp.P_inf + lp.T_inf));
    if (!(limit > 0.0)) return std::nullopt;

    auto phi = [&](double x) { return intermediate_exit_function(x, lp, p); };
    const double at_zero = phi(0.0);
    if (at_zero >= 0.0) {
        // Landing already on/past criticality: exits immediately.
        return ExitEvent{ExitScale::Intermediate, 0.0, lp.S_inf, lp.P_inf, lp.T_inf, false};
    }
    double hi = 1.0;
    while (phi(hi) <= 0.0) {
        hi *= 2.0;
        if (hi > 1e9)
            throw numerical_error("intermediate_exit: failed to bracket the exit time", hi);
    }
    const double t_e = find_root(phi, 0.0, hi, 1e-13).x;
    const auto [T_out, P_out] = intermediate_flow(lp.T_inf, lp.P_inf, t_e);
    return ExitEvent{ExitScale::Intermediate, t_e, lp.S_inf, P_out, T_out, false};
}

std::array<double, 3> slow_flow(double S_fin, double P_fin, double tau2) {
    if (tau2 < 0.0) throw std::domain_error("slow_flow: tau2 must be non-negative");
    const double R_fin = 1.0 - S_fin - P_fin;
    const double decay = std::exp(-tau2);
    const double R = R_fin * decay;
    const double P = P_fin * decay + tau2 * R_fin * decay;
    const double S = 1.0 - P_fin * decay - R_fin * (1.0 + tau2) * decay;
    return {S, P, R};
}

namespace {

// Smallest positive root of Psi(T) = offset. The offset carries the
// integral debt accumulated before the slow phase proper (zero for the
// standalone exit-time operation).
std::optional<double> slow_exit_root(double S_fin, double P_fin, double offset,
                                     const ModelParams& p) {
    const double g = p.gamma();
    if (p.beta <= g) return std::nullopt; // S -> 1 never regains criticality
    auto psi = [&](double T) { return slow_exit_objective(T, S_fin, P_fin, p) - offset; };

    // March forward to the first sign change, then refine. psi(0) <= 0
    // always (it equals -offset), so [lo, hi] brackets the smallest root.
    double lo = 0.0;
    double hi = 1e-6;
    const double cap = 1e4;
    while (psi(hi) <= 0.0) {
        lo = hi;
        hi *= 1.25;
        if (hi > cap) throw numerical_error("slow_exit_time: no exit found below cap", cap);
    }
    const double root = find_root(psi, lo, hi, 1e-12).x;
    return root < 1e-11 ? 0.0 : root;
}

} // namespace

std::optional<double> slow_exit_time(double S_fin, double P_fin, const ModelParams& p) {
    const double rate0 = infection_growth_rate(S_fin, P_fin, p);
    if (rate0 > 1e-10)
        throw std::domain_error("slow_exit_time: growth rate at entry must be non-positive");
    if (rate0 >= 0.0) return p.beta > p.gamma() ? std::optional<double>(0.0) : std::nullopt;
    return slow_exit_root(S_fin, P_fin, 0.0, p);
}

ExitEvent recovery_map(const LandingPoint& lp, const ModelParams& p) {
    const double relaxed_P = lp.P_inf + lp.T_inf;
    const RegionLabel label = classify_region(lp.S_inf, relaxed_P, p, 1e-10);

    if (label.region == Region::Supercritical) {
        auto ev = intermediate_exit(lp, p);
        if (!ev)
            throw numerical_error("recovery_map: branch classification disagrees with exit test");
        return *ev;
    }

    // Slow branch; the near-neutral band lands here too, flagged.
    const bool degenerate = label.region == Region::Critical;
    const double entry_rate = infection_growth_rate(lp.S_inf, lp.P_inf, p);
    if (std::abs(entry_rate) <= 1e-10 * std::max(1.0, p.gamma1) && lp.T_inf == 0.0) {
        // Neutral landing with nothing left to relax: genuine fixed point.
        return ExitEvent{ExitScale::Intermediate, 0.0, lp.S_inf, lp.P_inf, lp.T_inf, false};
    }
    const double S_fin = lp.S_inf;
    const double P_fin = relaxed_P;
    // The relaxation of T onto the slow manifold contributes an exact
    // integral debt of -beta alpha nu T_inf (intermediate units) to the
    // entry-exit balance, i.e. delta times that in slow units. It vanishes
    // with delta but is material for near-tangent exits at finite delta.
    const double debt = p.delta * p.beta * p.alpha * p.nu * lp.T_inf;
    const std::optional<double> T_E = slow_exit_root(S_fin, P_fin, debt, p);
    if (!T_E) throw std::domain_error("recovery_map: no slow exit exists (beta <= gamma)");
    const auto spr = slow_flow(S_fin, P_fin, *T_E);
    return ExitEvent{ExitScale::Slow, *T_E, spr[0], spr[1], 0.0, degenerate};
}

EpochIteration iterate_epochs(double S, double P, double T, int n, const ModelParams& p) {
    if (basic_reproduction_number(p) <= 1.0)
        throw std::domain_error("iterate_epochs: requires beta > gamma1");
    EpochIteration out;
    double cur_S = S, cur_P = P, cur_T = T;
    for (int k = 0; k < n; ++k) {
        const RegionLabel entry_label = classify_region(cur_S, cur_P, p);
        if (entry_label.region != Region::Supercritical) {
            out.reached_fixed_point = true;
            break;
        }
        EpochLog log;
        log.epoch = k + 1;
        log.entry_S = cur_S;
        log.entry_P = cur_P;
        log.entry_T = cur_T;
        log.landing = epidemic_map(cur_S, cur_P, cur_T, p);
        log.exit = recovery_map(log.landing, p);
        log.exit_time_tau1 = log.exit.scale == ExitScale::Intermediate
                                 ? log.exit.exit_time
                                 : log.exit.exit_time / p.delta;
        log.return_time_fast_units = p.epsilon > 0.0 ? log.exit_time_tau1 / p.epsilon : 0.0;
        log.delta = p.delta;
        log.epsilon = p.epsilon;
        out.epochs.push_back(log);

        const double step = std::max({std::abs(log.exit.S - cur_S), std::abs(log.exit.P - cur_P),
                                      std::abs(log.exit.T - cur_T)});
        cur_S = log.exit.S;
        cur_P = log.exit.P;
        cur_T = log.exit.T;
        if (step < 1e-10) {
            out.reached_fixed_point = true;
            break;
        }
    }
    return out;
}

} // namespace sitpyr
