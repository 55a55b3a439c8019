#include "sitpyr/model.hpp"

#include <cmath>

namespace sitpyr {

namespace {

bool all_finite(const ModelParams& p) {
    return std::isfinite(p.beta) && std::isfinite(p.alpha) && std::isfinite(p.nu) &&
           std::isfinite(p.gamma1) && std::isfinite(p.gamma2) && std::isfinite(p.delta) &&
           std::isfinite(p.epsilon);
}

// Integrators undershoot zero by round-off; tolerate that, reject more.
double clamp_component(double v, const char* name) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string("non-finite state component ") + name);
    if (v < 0.0) {
        if (v < -1e-12) throw std::invalid_argument(std::string("negative state component ") + name);
        return 0.0;
    }
    return v;
}

State5 sanitized(const State5& x) {
    return {clamp_component(x.S, "S"), clamp_component(x.I, "I"), clamp_component(x.T, "T"),
            clamp_component(x.P, "P"), clamp_component(x.Y, "Y")};
}

} // namespace

ModelParams::ModelParams(double beta_, double alpha_, double nu_, double gamma1_, double gamma2_,
                         double delta_, double epsilon_)
    : beta(beta_), alpha(alpha_), nu(nu_), gamma1(gamma1_), gamma2(gamma2_), delta(delta_),
      epsilon(epsilon_) {
    if (!all_finite(*this)) throw std::invalid_argument("ModelParams: non-finite parameter");
    if (beta <= 0.0 || gamma1 <= 0.0 || gamma2 <= 0.0)
        throw std::invalid_argument("ModelParams: beta, gamma1, gamma2 must be positive");
    if (alpha < 0.0 || nu < 0.0)
        throw std::invalid_argument("ModelParams: alpha, nu must be non-negative");
    if (delta < 0.0 || delta >= 1.0 || epsilon < 0.0 || epsilon >= 1.0)
        throw std::invalid_argument("ModelParams: delta, epsilon must lie in [0, 1)");
}

bool ModelParams::equal_gammas() const {
    return std::abs(gamma1 - gamma2) <= 1e-12 * std::max(gamma1, gamma2);
}

double ModelParams::gamma() const {
    if (!equal_gammas())
        throw constraint_error("operation requires gamma1 == gamma2");
    return gamma1;
}

std::array<double, 5> vector_field5(const State5& state, const ModelParams& p) {
    const State5 x = sanitized(state);
    const double de = p.delta * p.epsilon;
    const double force = x.I + p.alpha * x.Y; // I + alpha Y
    return {
        -p.beta * x.S * force + de * x.P,
        p.beta * x.S * force - p.gamma1 * x.I,
        p.gamma1 * x.I - p.epsilon * x.T,
        de + p.epsilon * x.T * (1.0 - p.delta) - p.nu * p.beta * x.P * force -
            de * (x.S + x.I + 2.0 * x.P + x.Y),
        p.nu * p.beta * x.P * force - p.gamma2 * x.Y,
    };
}

std::array<double, 6> vector_field6(const State6& state, const ModelParams& p) {
    const State5 x5 = sanitized(state.project());
    const double R = clamp_component(state.R, "R");
    const double de = p.delta * p.epsilon;
    const double force = x5.I + p.alpha * x5.Y;
    return {
        -p.beta * x5.S * force + de * x5.P,
        p.beta * x5.S * force - p.gamma1 * x5.I,
        p.gamma1 * x5.I - p.epsilon * x5.T,
        p.epsilon * x5.T - p.nu * p.beta * x5.P * force - de * x5.P + de * R,
        p.nu * p.beta * x5.P * force - p.gamma2 * x5.Y,
        p.gamma2 * x5.Y - de * R,
    };
}

std::array<double, 5> fast_vector_field(const State5& state, const ModelParams& p) {
    const State5 x = sanitized(state);
    const double force = x.I + p.alpha * x.Y;
    return {
        -p.beta * x.S * force,
        p.beta * x.S * force - p.gamma1 * x.I,
        p.gamma1 * x.I,
        -p.nu * p.beta * x.P * force,
        p.nu * p.beta * x.P * force - p.gamma2 * x.Y,
    };
}

Matrix5 jacobian(const State5& state, const ModelParams& p) {
    const State5 x = sanitized(state);
    const double de = p.delta * p.epsilon;
    const double force = x.I + p.alpha * x.Y;
    Matrix5 j;
    // S row
    j(0, 0) = -p.beta * force;
    j(0, 1) = -p.beta * x.S;
    j(0, 2) = 0.0;
    j(0, 3) = de;
    j(0, 4) = -p.beta * p.alpha * x.S;
    // I row
    j(1, 0) = p.beta * force;
    j(1, 1) = p.beta * x.S - p.gamma1;
    j(1, 2) = 0.0;
    j(1, 3) = 0.0;
    j(1, 4) = p.beta * p.alpha * x.S;
    // T row
    j(2, 0) = 0.0;
    j(2, 1) = p.gamma1;
    j(2, 2) = -p.epsilon;
    j(2, 3) = 0.0;
    j(2, 4) = 0.0;
    // P row
    j(3, 0) = -de;
    j(3, 1) = -p.nu * p.beta * x.P - de;
    j(3, 2) = p.epsilon * (1.0 - p.delta);
    j(3, 3) = -p.nu * p.beta * force - 2.0 * de;
    j(3, 4) = -p.nu * p.beta * p.alpha * x.P - de;
    // Y row
    j(4, 0) = 0.0;
    j(4, 1) = p.nu * p.beta * x.P;
    j(4, 2) = 0.0;
    j(4, 3) = p.nu * p.beta * force;
    j(4, 4) = p.nu * p.beta * p.alpha * x.P - p.gamma2;
    return j;
}

double basic_reproduction_number(const ModelParams& p) { return p.beta / p.gamma1; }

double fast_reproduction_number(double S, double P, const ModelParams& p) {
    return (p.beta / p.gamma1) * S + (p.beta / p.gamma2) * p.alpha * p.nu * P;
}

double infection_growth_rate(double S, double P, const ModelParams& p) {
    const double g = p.gamma();
    return -g + p.beta * (p.alpha * p.nu * P + S);
}

RegionLabel classify_region(double S, double P, const ModelParams& p, double zero_band) {
    const double g = p.gamma();
    const double L = (p.beta / g) * (S + p.alpha * p.nu * P) - 1.0;
    Region r = Region::Critical;
    if (L > zero_band)
        r = Region::Supercritical;
    else if (L < -zero_band)
        r = Region::Subcritical;
    return {r, L};
}

} // namespace sitpyr
