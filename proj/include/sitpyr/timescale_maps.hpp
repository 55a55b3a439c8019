#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sitpyr/fast_scale.hpp"
#include "sitpyr/model.hpp"

namespace sitpyr {

enum class ExitScale { Intermediate, Slow };

/// Where and when an orbit leaves the critical manifold after a landing.
/// exit_time is in the scale's own unit: the intermediate time for
/// Intermediate exits, the slow time for Slow exits.
struct ExitEvent {
    ExitScale scale = ExitScale::Intermediate;
    double exit_time = 0.0;
    double S = 0.0, P = 0.0, T = 0.0;
    /// Set when the landing sat within 1e-10 of the neutral set and the
    /// branch decision is ill-conditioned (routed to the slow branch).
    bool degenerate = false;
};

/// Relaxation of the temporarily immune on the intermediate scale:
/// T -> T_inf e^{-tau1}, P -> P_inf + T_inf (1 - e^{-tau1}).
std::pair<double, double> intermediate_flow(double T_inf, double P_inf, double tau1);

/// Averaged growth rate whose positive root is the intermediate exit time:
/// continuous, increasing, equal to the landing growth rate at x = 0.
/// Requires gamma1 == gamma2.
double intermediate_exit_function(double x, const LandingPoint& lp, const ModelParams& p);

/// Exit on the intermediate scale, present exactly when
/// beta (S_inf + alpha nu (P_inf + T_inf)) > gamma strictly.
std::optional<ExitEvent> intermediate_exit(const LandingPoint& lp, const ModelParams& p);

/// Closed-form slow flow from (S_fin, P_fin, R_fin = 1 - S_fin - P_fin);
/// returns (S, P, R) at slow time tau2. S + P + R == 1 identically.
std::array<double, 3> slow_flow(double S_fin, double P_fin, double tau2);

/// Smallest positive root of the slow entry-exit condition
///   -gamma T + beta int_0^T (S(x) + alpha nu P(x)) dx = 0,
/// with the integral in closed form. std::nullopt when beta <= gamma1
/// (the slow flow never regains criticality). Requires gamma1 == gamma2
/// and a non-positive growth rate at (S_fin, P_fin).
std::optional<double> slow_exit_time(double S_fin, double P_fin, const ModelParams& p);

/// The recovery map: from a landing on the stable part of the manifold to
/// the point where the next epidemic starts, via the intermediate branch
/// when the relaxed point re-enters the supercritical region and via the
/// slow branch otherwise. Neutral landings are fixed with exit time 0.
ExitEvent recovery_map(const LandingPoint& lp, const ModelParams& p);

/// One epidemic cycle of the composed discrete map.
struct EpochLog {
    int epoch = 0;
    double entry_S = 0.0, entry_P = 0.0, entry_T = 0.0;
    LandingPoint landing{};
    ExitEvent exit{};
    /// Exit time converted to the intermediate unit (slow exits: time/delta).
    double exit_time_tau1 = 0.0;
    /// The same interval in fast-time units (tau1/epsilon).
    double return_time_fast_units = 0.0;
    double delta = 0.0, epsilon = 0.0;
};

struct EpochIteration {
    std::vector<EpochLog> epochs;
    bool reached_fixed_point = false;
};

/// Iterate epidemic + recovery from a supercritical entry. Stops after n
/// epochs, or earlier with reached_fixed_point when an entry lands on the
/// neutral set or two successive entries differ by less than 1e-10.
/// Requires gamma1 == gamma2 and beta > gamma1.
EpochIteration iterate_epochs(double S, double P, double T, int n, const ModelParams& p);

} // namespace sitpyr
