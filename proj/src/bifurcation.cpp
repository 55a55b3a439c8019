#include "sitpyr/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "sitpyr/roots.hpp"

namespace sitpyr {

namespace {

ModelParams with_beta(const ModelParams& base, double beta) {
    return ModelParams(beta, base.alpha, base.nu, base.gamma1, base.gamma2, base.delta,
                       base.epsilon);
}

ModelParams with_alpha(const ModelParams& base, double alpha) {
    return ModelParams(base.beta, alpha, base.nu, base.gamma1, base.gamma2, base.delta,
                       base.epsilon);
}

// Fold condition. With u = 1 - A Q and r = beta/gamma1, the discriminant of
// the equilibrium quadratic vanishes where
//   r^2 + (4 a Q - 2 u) r + (u^2 - 4 a Q) = 0,
// whose larger root is the physically relevant fold. Returns the fold beta
// and the double-root value of P when admissible.
struct Fold {
    double beta;
    double P;
};

std::optional<Fold> analytic_fold(const ModelParams& base) {
    if (base.alpha * base.nu == 0.0) return std::nullopt;
    const EndemicQuadratic q = endemic_quadratic(with_beta(base, base.gamma1));
    if (q.a <= 0.0) return std::nullopt; // no backward branch to fold
    const double u = 1.0 - q.A * q.Q;
    const double aQ = q.a * q.Q;
    const double rad = aQ * (aQ - u + 1.0);
    if (rad <= 0.0) return std::nullopt;
    const double r = (u - 2.0 * aQ) + 2.0 * std::sqrt(rad);
    if (!(r > 0.0) || !(r < 1.0)) return std::nullopt;
    const double beta = base.gamma1 * r;
    const EndemicQuadratic qf = endemic_quadratic(with_beta(base, beta));
    const double x = -qf.b / (2.0 * qf.a);
    if (!(x > 0.0) || !(x < qf.Q / r)) return std::nullopt;
    return Fold{beta, x};
}

State6 expand_fold_state(const ModelParams& p, double P) {
    // Reuse the equilibrium reconstruction through the public surface: at a
    // fold the quadratic has a (near-)double root, so take the record closest
    // to P if one survives the residual checks, else rebuild from scratch.
    const auto recs = endemic_equilibria(p);
    const EquilibriumRecord* best = nullptr;
    double dist = 1e300;
    for (const auto& rec : recs) {
        const double d = std::abs(rec.state.P - P);
        if (d < dist) {
            dist = d;
            best = &rec;
        }
    }
    if (best) return best->state;
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

// Real part of the leading complex-conjugate eigenvalue pair (the complex
// pair with the largest real part) at the upper endemic equilibrium; that is
// the pair that can lose stability. Requiring a genuinely nonzero imaginary
// part excludes neutral saddles. nullopt when the branch or pair is missing.
std::optional<double> upper_branch_pair_real(const ModelParams& p, State6* state_out) {
    const auto recs = endemic_equilibria(p);
    if (recs.empty()) return std::nullopt;
    const EquilibriumRecord& upper = recs.back();
    std::optional<double> re;
    for (const auto& ev : upper.eigenvalues) {
        if (std::abs(ev.imag()) <= 1e-9) continue;
        if (!re || ev.real() > *re) re = ev.real();
    }
    if (re && state_out) *state_out = upper.state;
    return re;
}

} // namespace

std::vector<BranchPoint> branch_scan(const ModelParams& base, double beta_lo, double beta_hi,
                                     int n_points) {
    if (n_points < 2) throw std::invalid_argument("branch_scan: need at least two grid points");
    if (!(beta_hi > beta_lo) || !(beta_lo > 0.0))
        throw std::invalid_argument("branch_scan: bad beta range");
    std::vector<BranchPoint> out;
    out.reserve(static_cast<std::size_t>(n_points) * 2);
    for (int i = 0; i < n_points; ++i) {
        const double beta =
            beta_lo + (beta_hi - beta_lo) * static_cast<double>(i) / (n_points - 1);
        const ModelParams p = with_beta(base, beta);
        out.push_back({beta, dfe_record(p), BranchSide::Trivial});
        const auto recs = endemic_equilibria(p); // ascending in P
        if (recs.size() == 1) {
            out.push_back({beta, recs[0], BranchSide::Unique});
        } else if (recs.size() == 2) {
            out.push_back({beta, recs[0], BranchSide::Lower});
            out.push_back({beta, recs[1], BranchSide::Upper});
        }
    }
    return out;
}

std::vector<BifurcationPoint> detect_bifurcations(const ModelParams& base, double beta_lo,
                                                  double beta_hi) {
    std::vector<BifurcationPoint> out;

    // Transcritical crossing of the trivial branch.
    if (base.gamma1 >= beta_lo && base.gamma1 <= beta_hi)
        out.push_back({BifKind::BP, base.gamma1, base.alpha, dfe()});

    // Fold.
    std::optional<Fold> fold = analytic_fold(base);
    if (fold && (fold->beta < beta_lo || fold->beta > beta_hi)) fold.reset();
    if (fold)
        out.push_back(
            {BifKind::LP, fold->beta, base.alpha, expand_fold_state(with_beta(base, fold->beta), fold->P)});

    // Hopf along the upper branch: dense grid, refined near the fold where
    // the interesting sign change is squeezed in.
    std::vector<double> grid;
    const int coarse = 600;
    for (int i = 1; i < coarse; ++i)
        grid.push_back(beta_lo + (beta_hi - beta_lo) * static_cast<double>(i) / coarse);
    if (fold) {
        const double span = std::min(0.02 * (beta_hi - beta_lo) + 1e-4, beta_hi - fold->beta);
        for (int i = 1; i <= 400; ++i)
            grid.push_back(fold->beta + span * static_cast<double>(i) / 400.0);
    }
    std::sort(grid.begin(), grid.end());

    double prev_beta = 0.0;
    std::optional<double> prev_re;
    for (double beta : grid) {
        std::optional<double> re = upper_branch_pair_real(with_beta(base, beta), nullptr);
        if (re && prev_re && *prev_re * *re < 0.0) {
            auto f = [&](double b) {
                const auto v = upper_branch_pair_real(with_beta(base, b), nullptr);
                return v ? *v : 0.0;
            };
            const double beta_h = find_root(f, prev_beta, beta, 1e-8).x;
            State6 st;
            upper_branch_pair_real(with_beta(base, beta_h), &st);
            out.push_back({BifKind::Hopf, beta_h, base.alpha, st});
        }
        prev_beta = beta;
        prev_re = re;
    }

    std::sort(out.begin(), out.end(),
              [](const BifurcationPoint& a, const BifurcationPoint& b) { return a.beta < b.beta; });
    return out;
}

std::vector<BifurcationPoint> lp_curve(const ModelParams& base, double alpha_lo, double alpha_hi,
                                       int n_points) {
    if (n_points < 1) throw std::invalid_argument("lp_curve: need at least one point");
    if (!(alpha_hi >= alpha_lo)) throw std::invalid_argument("lp_curve: bad alpha range");
    std::vector<BifurcationPoint> out;
    for (int i = 0; i < n_points; ++i) {
        const double alpha = n_points == 1 ? alpha_lo
                                           : alpha_lo + (alpha_hi - alpha_lo) *
                                                            static_cast<double>(i) /
                                                            (n_points - 1);
        if (alpha <= 0.0) continue;
        const ModelParams pa = with_alpha(base, alpha);
        const std::optional<Fold> fold = analytic_fold(pa);
        if (!fold) continue;
        out.push_back({BifKind::LP, fold->beta, alpha,
                       expand_fold_state(with_beta(pa, fold->beta), fold->P)});
    }
    return out;
}

} // namespace sitpyr
