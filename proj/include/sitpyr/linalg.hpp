#pragma once

#include <array>
#include <complex>

namespace sitpyr {

/// Dense 5x5 real matrix, row major. Small enough that everything is by value.
struct Matrix5 {
    std::array<double, 25> a{};

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(5 * i + j)]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(5 * i + j)]; }

    double norm_inf() const;
};

struct Spectrum5 {
    std::array<std::complex<double>, 5> values{};
    int iterations = 0;
    bool converged = false;
};

/// All eigenvalues of a general real 5x5 matrix.
///
/// The characteristic polynomial is never formed: p(z) = det(zI - A) is
/// evaluated by pivoted complex LU and the (monic) roots are located with a
/// Weierstrass/Durand-Kerner simultaneous iteration. A post-pass enforces
/// conjugate symmetry and collapses residual clusters to their centroid,
/// which restores O(eps)-accuracy for multiple eigenvalues whose computed
/// images split by O(sqrt(eps)).
Spectrum5 eigenvalues(const Matrix5& m);

/// det(zI - A) for complex z, by LU with partial pivoting.
std::complex<double> char_poly(const Matrix5& m, std::complex<double> z);

} // namespace sitpyr
