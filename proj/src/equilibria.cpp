#include "sitpyr/equilibria.hpp"

#include <algorithm>
#include <cmath>

namespace sitpyr {

namespace {

bool all_real_parts_negative(const std::array<std::complex<double>, 5>& eig) {
    for (const auto& e : eig)
        if (e.real() >= 0.0) return false;
    return true;
}

struct QuadraticRoots {
    int count = 0;
    double x1 = 0.0, x2 = 0.0; // ascending when count == 2
    bool fold_degenerate = false;
};

// Stable quadratic roots: q = -(b + sign(b) sqrt(disc))/2, roots q/a and c/q.
QuadraticRoots solve_quadratic(double a, double b, double c) {
    QuadraticRoots r;
    if (a == 0.0) {
        if (b != 0.0) {
            r.count = 1;
            r.x1 = -c / b;
        }
        return r;
    }
    const double disc = b * b - 4.0 * a * c;
    if (std::abs(disc) < 1e-14) {
        r.count = 1;
        r.x1 = -b / (2.0 * a);
        r.fold_degenerate = true;
        return r;
    }
    if (disc < 0.0) return r;
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
    double x1 = q / a;
    double x2 = (q != 0.0) ? c / q : -b / a - x1;
    if (x1 > x2) std::swap(x1, x2);
    r.count = 2;
    r.x1 = x1;
    r.x2 = x2;
    return r;
}

// Expand an equilibrium value of P to the full 6d state through the
// stationarity relations of the closed system.
State6 expand_endemic(double P, const ModelParams& p) {
    const double de = p.delta * p.epsilon;
    State6 s;
    s.P = P;
    s.S = (p.gamma1 / p.beta) * (1.0 - p.beta * p.alpha * p.nu * P / p.gamma2);
    s.I = de * P / p.gamma1;
    s.T = p.delta * P;
    s.Y = de * p.nu * P * P / (p.gamma2 * s.S);
    s.R = p.nu * P * P / s.S;
    return s;
}

// Endemic state in the nu = 0 limit (no reinfection): a single equilibrium
// exists iff R0 > 1, with Y = R = 0.
std::vector<double> endemic_roots_nu0(const ModelParams& p) {
    const double r0 = basic_reproduction_number(p);
    if (r0 <= 1.0) return {};
    const double de = p.delta * p.epsilon;
    return {(1.0 - 1.0 / r0) / (1.0 + p.delta + de / p.gamma1)};
}

std::vector<double> admissible_roots(const ModelParams& p, bool* fold_flag) {
    if (fold_flag) *fold_flag = false;
    if (p.alpha * p.nu == 0.0) return endemic_roots_nu0(p);
    const EndemicQuadratic q = endemic_quadratic(p);
    const double upper = q.Q / basic_reproduction_number(p); // admissibility bound on P
    QuadraticRoots roots = solve_quadratic(q.a, q.b, q.c);
    std::vector<double> out;
    if (roots.count >= 1 && roots.x1 > 0.0 && roots.x1 < upper) out.push_back(roots.x1);
    if (roots.count == 2 && roots.x2 > 0.0 && roots.x2 < upper) out.push_back(roots.x2);
    if (fold_flag && roots.fold_degenerate && !out.empty()) *fold_flag = true;
    return out;
}

} // namespace

State6 dfe() { return {1.0, 0.0, 0.0, 0.0, 0.0, 0.0}; }

std::array<double, 5> dfe_eigenvalues(const ModelParams& p) {
    const double r0 = basic_reproduction_number(p);
    return {-p.gamma2, -p.gamma1 * (1.0 - r0), -p.epsilon, -p.delta * p.epsilon,
            -p.delta * p.epsilon};
}

EquilibriumRecord dfe_record(const ModelParams& p) {
    EquilibriumRecord rec;
    rec.state = dfe();
    rec.kind = EquilibriumKind::DFE;
    const auto eig = dfe_eigenvalues(p);
    for (int i = 0; i < 5; ++i) rec.eigenvalues[static_cast<std::size_t>(i)] = eig[static_cast<std::size_t>(i)];
    rec.stable = all_real_parts_negative(rec.eigenvalues);
    return rec;
}

bool global_stability_certificate(const ModelParams& p) {
    const double r0 = basic_reproduction_number(p);
    return p.gamma1 <= p.gamma2 && r0 < 1.0 && p.alpha * p.nu < 1.0 / r0;
}

EndemicQuadratic endemic_quadratic(const ModelParams& p) {
    if (p.alpha * p.nu == 0.0)
        throw constraint_error("endemic_quadratic: alpha * nu must be positive");
    const double r0 = basic_reproduction_number(p);
    const double de = p.delta * p.epsilon;
    EndemicQuadratic q;
    q.Q = p.gamma2 / (p.gamma1 * p.alpha * p.nu);
    q.A = 1.0 - 1.0 / q.Q + de / p.gamma1 + p.delta;
    q.B = (p.gamma2 + de) / (p.gamma1 * p.alpha);
    q.a = q.B - q.A;
    q.b = 1.0 - 1.0 / r0 + q.A * q.Q / r0;
    q.c = (q.Q / r0) * (1.0 / r0 - 1.0);
    return q;
}

EndemicQuadratic endemic_quadratic_limit(const ModelParams& p) {
    if (p.alpha * p.nu == 0.0)
        throw constraint_error("endemic_quadratic_limit: alpha * nu must be positive");
    const double r0 = basic_reproduction_number(p);
    EndemicQuadratic q;
    q.Q = p.gamma2 / (p.gamma1 * p.alpha * p.nu);
    q.A = 1.0 - 1.0 / q.Q;
    q.B = p.gamma2 / (p.gamma1 * p.alpha);
    q.a = p.nu * q.Q - 1.0 + 1.0 / q.Q;
    q.b = 1.0 - 2.0 / r0 + q.Q / r0;
    q.c = (q.Q / r0) * (1.0 / r0 - 1.0);
    return q;
}

std::vector<EquilibriumRecord> endemic_equilibria(const ModelParams& p) {
    bool fold = false;
    const std::vector<double> roots = admissible_roots(p, &fold);
    std::vector<EquilibriumRecord> out;
    out.reserve(roots.size());
    for (double x : roots) {
        EquilibriumRecord rec;
        rec.state = expand_endemic(x, p);
        rec.kind = EquilibriumKind::Endemic;
        rec.fold_degenerate = fold;
        const Spectrum5 sp = eigenvalues(jacobian(rec.state.project(), p));
        if (!sp.converged)
            throw numerical_error("endemic_equilibria: eigenvalue iteration did not converge");
        rec.eigenvalues = sp.values;
        rec.stable = all_real_parts_negative(rec.eigenvalues);
        const double res = equilibrium_residual(rec.state, p);
        if (res > 1e-10)
            throw numerical_error("endemic_equilibria: reconstructed state residual too large", res);
        out.push_back(rec);
    }
    return out;
}

ExistenceVerdict existence_verdict(const ModelParams& p) {
    ExistenceVerdict v;
    const double r0 = basic_reproduction_number(p);
    if (r0 > 1.0) {
        v.analytic = ExistenceKind::UniqueEndemic;
    } else if (p.alpha * p.nu > 0.0) {
        const double Q = p.gamma2 / (p.gamma1 * p.alpha * p.nu);
        if (Q < 1.0) {
            const double rad = 4.0 * p.nu * Q * Q * Q * (p.nu * Q - 1.0 + 1.0 / Q);
            v.r_star = Q * (1.0 - 2.0 * p.nu * Q) + std::sqrt(rad);
            v.r_star_valid = true;
            v.analytic = (r0 > v.r_star) ? ExistenceKind::TwoEndemic : ExistenceKind::NoEndemic;
        }
    }
    v.finite_delta_count = static_cast<int>(admissible_roots(p, nullptr).size());
    const int expected = v.analytic == ExistenceKind::UniqueEndemic ? 1
                       : v.analytic == ExistenceKind::TwoEndemic    ? 2
                                                                    : 0;
    v.disagreement = expected != v.finite_delta_count;
    return v;
}

std::array<std::complex<double>, 5> equilibrium_spectrum(const EquilibriumRecord& rec,
                                                         const ModelParams& p) {
    const double res = equilibrium_residual(rec.state, p);
    if (res > 1e-8)
        throw std::invalid_argument("equilibrium_spectrum: state is not an equilibrium");
    const Spectrum5 sp = eigenvalues(jacobian(rec.state.project(), p));
    if (!sp.converged)
        throw numerical_error("equilibrium_spectrum: eigenvalue iteration did not converge");
    return sp.values;
}

double equilibrium_residual(const State6& s, const ModelParams& p) {
    const auto f = vector_field6(s, p);
    double r = 0.0;
    for (double v : f) r = std::max(r, std::abs(v));
    return r;
}

} // namespace sitpyr
