#pragma once

#include <array>

#include "sitpyr/errors.hpp"
#include "sitpyr/linalg.hpp"

namespace sitpyr {

/// Rates and scale-separation factors of the reinfection model.
///
/// beta    transmission rate of primary infectors (1/time)
/// alpha   relative infectiousness of secondary infections
/// nu      relative susceptibility of the partially immune
/// gamma1  recovery rate from primary infections (1/time)
/// gamma2  recovery rate from secondary infections (1/time)
/// delta   intermediate-to-slow scale ratio, in (0,1)
/// epsilon fast-to-intermediate scale ratio, in (0,1)
///
/// Construction validates: beta, gamma1, gamma2 strictly positive; alpha and
/// nu non-negative (nu = 0 disables reinfection; useful as a limiting case);
/// delta and epsilon in [0, 1), zero meaning the corresponding limit system.
struct ModelParams {
    double beta;
    double alpha;
    double nu;
    double gamma1;
    double gamma2;
    double delta;
    double epsilon;

    ModelParams(double beta_, double alpha_, double nu_, double gamma1_, double gamma2_,
                double delta_, double epsilon_);

    bool equal_gammas() const;

    /// Common recovery rate; throws constraint_error unless gamma1 == gamma2.
    double gamma() const;
};

/// Point of the 5d phase region (R implicit as 1 - S - I - T - P - Y).
struct State5 {
    double S = 0.0;
    double I = 0.0;
    double T = 0.0;
    double P = 0.0;
    double Y = 0.0;

    double sum() const { return S + I + T + P + Y; }
    std::array<double, 5> to_array() const { return {S, I, T, P, Y}; }
    static State5 from_array(const std::array<double, 5>& a) { return {a[0], a[1], a[2], a[3], a[4]}; }
};

/// Point of the closed 6d simplex (components sum to 1).
struct State6 {
    double S = 0.0;
    double I = 0.0;
    double T = 0.0;
    double P = 0.0;
    double Y = 0.0;
    double R = 0.0;

    double sum() const { return S + I + T + P + Y + R; }
    State5 project() const { return {S, I, T, P, Y}; }
};

enum class Region { Supercritical, Critical, Subcritical };

/// Sign classification of the growth indicator L(S,P) = (beta/gamma)(S + alpha nu P) - 1.
struct RegionLabel {
    Region region;
    double indicator;
};

/// Right-hand side of the full 5d system.
std::array<double, 5> vector_field5(const State5& x, const ModelParams& p);

/// Right-hand side of the closed 6d system; components sum to zero.
std::array<double, 6> vector_field6(const State6& x, const ModelParams& p);

/// Fast-limit right-hand side (delta = epsilon = 0).
std::array<double, 5> fast_vector_field(const State5& x, const ModelParams& p);

/// Analytic Jacobian of vector_field5.
Matrix5 jacobian(const State5& x, const ModelParams& p);

/// beta / gamma1.
double basic_reproduction_number(const ModelParams& p);

/// (beta/gamma1) S + (beta/gamma2) alpha nu P: epidemic threshold from a
/// given susceptible / partially susceptible mix.
double fast_reproduction_number(double S, double P, const ModelParams& p);

/// Leading eigenvalue -gamma + beta (alpha nu P + S) of the infective block
/// on the critical manifold. Requires gamma1 == gamma2.
double infection_growth_rate(double S, double P, const ModelParams& p);

/// Classify (S,P) by the sign of L(S,P), with a zero band around L = 0.
/// Requires gamma1 == gamma2.
RegionLabel classify_region(double S, double P, const ModelParams& p, double zero_band = 1e-12);

} // namespace sitpyr
