#include "sitpyr/fast_scale.hpp"

#include <cmath>
#include <functional>

#include "sitpyr/roots.hpp"

namespace sitpyr {

namespace {

// (x/S0)^nu via exp(nu log(x/S0)); nu is generally non-integer.
double pow_ratio(double x, double S0, double nu) {
    if (nu == 0.0) return 1.0;
    return std::exp(nu * std::log(x / S0));
}

double check_positive(double x) {
    if (!(x > 0.0)) throw std::domain_error("final_size_function: x must be positive");
    return x;
}

// Derivative factor l(x) = 1 - (beta/gamma1) x - (beta/gamma2) alpha nu P0 (x/S0)^nu,
// decreasing with a single zero; the final-size function peaks there.
double slope_factor(double x, double S0, double P0, const ModelParams& p) {
    return 1.0 - (p.beta / p.gamma1) * x -
           (p.beta / p.gamma2) * p.alpha * p.nu * P0 * pow_ratio(x, S0, p.nu);
}

// Walk the lower bracket end down geometrically until the objective goes
// negative (it diverges to -inf at 0+).
double expand_left(const std::function<double(double)>& f, double start) {
    double lo = start;
    for (int i = 0; i < 40; ++i) {
        if (f(lo) < 0.0) return lo;
        lo *= 1e-16;
        if (lo < 1e-300) break;
    }
    throw numerical_error("solve_final_size: no sign change found above underflow", start);
}

} // namespace

double final_size_function(double x, double S0, double P0, double I0, double Y0,
                           const ModelParams& p) {
    check_positive(x);
    if (!(S0 > 0.0)) throw std::domain_error("final_size_function: S0 must be positive");
    const double primary = (x - S0) / p.gamma1;
    const double secondary = p.alpha * P0 * (pow_ratio(x, S0, p.nu) - 1.0) / p.gamma2;
    const double inflow = I0 / p.gamma1 + p.alpha * Y0 / p.gamma2;
    return std::log(x / S0) - p.beta * (primary + secondary) + p.beta * inflow;
}

std::optional<double> solve_final_size(double S0, double P0, double I0, double Y0,
                                       const ModelParams& p) {
    if (!(S0 > 0.0)) throw std::domain_error("solve_final_size: S0 must be positive");
    const double xtol = 1e-13;
    auto f = [&](double x) { return final_size_function(x, S0, P0, I0, Y0, p); };

    if (I0 + Y0 > 0.0) {
        // f(S0) = beta (I0/gamma1 + alpha Y0/gamma2) > 0, f(0+) = -inf.
        const double lo = expand_left(f, 1e-16 * S0);
        return find_root(f, lo, S0, xtol).x;
    }

    // Singular limit: x = S0 is always a root; the epidemic root exists only
    // above threshold and lies left of the interior maximum of f.
    if (fast_reproduction_number(S0, P0, p) <= 1.0 + 1e-12) return std::nullopt;
    auto l = [&](double x) { return slope_factor(x, S0, P0, p); };
    // l decreases from l(0) = 1 to l(S0) = 1 - R0^f < 0.
    const double peak = find_root(l, 1e-16 * S0, S0, 1e-14 * S0).x;
    const double hi = peak * (1.0 - 1e-12);
    if (!(f(hi) > 0.0)) return std::nullopt; // tangency: epidemic root degenerate with S0
    const double lo = expand_left(f, 1e-16 * S0);
    return find_root(f, lo, hi, xtol).x;
}

double p_infinity(double S0, double P0, double S_inf, double nu) {
    if (P0 == 0.0) return 0.0;
    return P0 * pow_ratio(S_inf, S0, nu);
}

std::pair<double, double> epidemic_map(double S, double P, const ModelParams& p) {
    const RegionLabel label = classify_region(S, P, p);
    if (label.region == Region::Subcritical)
        throw std::domain_error("epidemic_map: point is subcritical");
    if (label.region == Region::Critical) return {S, P};
    const std::optional<double> s_inf = solve_final_size(S, P, 0.0, 0.0, p);
    if (!s_inf) return {S, P}; // threshold within the zero band: fixed
    return {*s_inf, p_infinity(S, P, *s_inf, p.nu)};
}

LandingPoint epidemic_map(double S, double P, double T, const ModelParams& p) {
    const auto [s_inf, p_inf] = epidemic_map(S, P, p);
    return {s_inf, p_inf, T + S - s_inf};
}

} // namespace sitpyr
