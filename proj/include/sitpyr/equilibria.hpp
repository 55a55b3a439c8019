#pragma once

#include <array>
#include <complex>
#include <vector>

#include "sitpyr/model.hpp"

namespace sitpyr {

enum class EquilibriumKind { DFE, Endemic };

struct EquilibriumRecord {
    State6 state{};
    EquilibriumKind kind = EquilibriumKind::DFE;
    std::array<std::complex<double>, 5> eigenvalues{};
    bool stable = false;
    /// Set when this record is the collapsed pair of a near-double root.
    bool fold_degenerate = false;
};

/// Coefficients of the equilibrium quadratic f(x) = a x^2 + b x + c in
/// x = P, together with the auxiliaries they are built from. Exact in
/// delta and epsilon.
struct EndemicQuadratic {
    double a, b, c;
    double A, B, Q;
};

enum class ExistenceKind { UniqueEndemic, TwoEndemic, NoEndemic };

struct ExistenceVerdict {
    ExistenceKind analytic = ExistenceKind::NoEndemic;
    /// Threshold value of beta/gamma1 above which two endemic equilibria
    /// exist (small-delta closed form); meaningful only if r_star_valid.
    double r_star = 0.0;
    bool r_star_valid = false;
    /// Root count of the exact quadratic on the admissible interval.
    int finite_delta_count = 0;
    bool disagreement = false;
};

/// The infection-free equilibrium.
State6 dfe();

/// Closed-form spectrum of the Jacobian at the infection-free equilibrium:
/// {-gamma2, -gamma1 (1 - beta/gamma1), -epsilon, -delta epsilon, -delta epsilon}.
std::array<double, 5> dfe_eigenvalues(const ModelParams& p);

EquilibriumRecord dfe_record(const ModelParams& p);

/// True iff gamma1 <= gamma2, beta/gamma1 < 1 and alpha nu < gamma1/beta,
/// which certifies global exponential stability of the infection-free state.
bool global_stability_certificate(const ModelParams& p);

/// Quadratic with the exact finite-delta coefficients.
EndemicQuadratic endemic_quadratic(const ModelParams& p);

/// Small-delta truncation of the same coefficients (exposed for cross-checks).
EndemicQuadratic endemic_quadratic_limit(const ModelParams& p);

/// All endemic equilibria: roots x of the quadratic with 0 < x < Q/R0,
/// expanded to full states with spectra. Empty when none exist.
std::vector<EquilibriumRecord> endemic_equilibria(const ModelParams& p);

/// Existence classification, both via the small-delta closed form and via a
/// direct root count of the exact quadratic; flags any mismatch.
ExistenceVerdict existence_verdict(const ModelParams& p);

/// Eigenvalues of the Jacobian at a (verified) equilibrium.
std::array<std::complex<double>, 5> equilibrium_spectrum(const EquilibriumRecord& rec,
                                                         const ModelParams& p);

/// Sup-norm of vector_field6 at a state; used as the equilibrium residual.
double equilibrium_residual(const State6& s, const ModelParams& p);

} // namespace sitpyr
