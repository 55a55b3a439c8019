#pragma once

#include <optional>
#include <utility>

#include "sitpyr/model.hpp"

namespace sitpyr {

/// Terminal point of a fast epidemic on the critical manifold (I = Y = 0).
struct LandingPoint {
    double S_inf = 0.0;
    double P_inf = 0.0;
    double T_inf = 0.0;
};

/// Final-size function whose zero in (0, S0) is the terminal susceptible
/// fraction of the fast flow:
///   log(x/S0) - beta [ (x - S0)/gamma1 + alpha P0 ((x/S0)^nu - 1)/gamma2 ]
///   + beta [ I0/gamma1 + alpha Y0/gamma2 ].
/// Throws std::domain_error for x <= 0.
double final_size_function(double x, double S0, double P0, double I0, double Y0,
                           const ModelParams& p);

/// The terminal susceptible fraction S_inf.
///
/// With infectives present (I0 + Y0 > 0) the zero in (0, S0) is unique and
/// always returned. In the singular limit I0 = Y0 = 0 the map is defined as
/// the smallest positive root, skipping the trivial root x = S0; it exists
/// only above the epidemic threshold, so std::nullopt signals "no epidemic"
/// (the caller treats the point as fixed). Located to |dx| <= 1e-13.
std::optional<double> solve_final_size(double S0, double P0, double I0, double Y0,
                                       const ModelParams& p);

/// P0 (S_inf / S0)^nu, the partially susceptible fraction left behind.
double p_infinity(double S0, double P0, double S_inf, double nu);

/// The planar epidemic map (S, P) -> (S_inf, P_inf) on the supercritical
/// region; critical points are fixed. Requires gamma1 == gamma2; throws
/// std::domain_error on subcritical input.
std::pair<double, double> epidemic_map(double S, double P, const ModelParams& p);

/// Landing-triple version: also accumulates the temporarily immune,
/// T -> T + S - S_inf.
LandingPoint epidemic_map(double S, double P, double T, const ModelParams& p);

} // namespace sitpyr
