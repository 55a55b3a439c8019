#pragma once

#include <vector>

#include "sitpyr/equilibria.hpp"

namespace sitpyr {

enum class BranchSide { Trivial, Lower, Upper, Unique };

struct BranchPoint {
    double beta = 0.0;
    EquilibriumRecord equilibrium{};
    BranchSide branch = BranchSide::Unique;
};

enum class BifKind { BP, LP, Hopf };

struct BifurcationPoint {
    BifKind kind;
    double beta;
    double alpha;
    State6 state;
};

/// All equilibria (the infection-free one included as the trivial branch)
/// with spectra, on a uniform beta grid.
std::vector<BranchPoint> branch_scan(const ModelParams& base, double beta_lo, double beta_hi,
                                     int n_points);

/// Transcritical point at beta = gamma1; fold from the vanishing
/// discriminant of the equilibrium quadratic, which is itself a quadratic in
/// beta/gamma1 and is solved in closed form; Hopf from the sign change of the
/// complex pair's real part along the upper branch, bisected to 1e-8 in beta.
/// Points without a detectable crossing are simply absent.
std::vector<BifurcationPoint> detect_bifurcations(const ModelParams& base, double beta_lo,
                                                  double beta_hi);

/// Fold location as a function of alpha (other parameters fixed): one row
/// per alpha with a valid fold; empty elsewhere.
std::vector<BifurcationPoint> lp_curve(const ModelParams& base, double alpha_lo, double alpha_hi,
                                       int n_points);

} // namespace sitpyr
