#include "sitpyr/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace sitpyr {

using Complex = std::complex<double>;

double Matrix5::norm_inf() const {
    double best = 0.0;
    for (int i = 0; i < 5; ++i) {
        double row = 0.0;
        for (int j = 0; j < 5; ++j) row += std::abs((*this)(i, j));
        best = std::max(best, row);
    }
    return best;
}

Complex char_poly(const Matrix5& m, Complex z) {
    Complex lu[5][5];
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) lu[i][j] = (i == j ? z : Complex(0.0)) - m(i, j);

    Complex det(1.0);
    for (int k = 0; k < 5; ++k) {
        int piv = k;
        double best = std::abs(lu[k][k]);
        for (int i = k + 1; i < 5; ++i) {
            double v = std::abs(lu[i][k]);
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (piv != k) {
            for (int j = 0; j < 5; ++j) std::swap(lu[k][j], lu[piv][j]);
            det = -det;
        }
        if (lu[k][k] == Complex(0.0)) return Complex(0.0);
        det *= lu[k][k];
        for (int i = k + 1; i < 5; ++i) {
            Complex f = lu[i][k] / lu[k][k];
            for (int j = k + 1; j < 5; ++j) lu[i][j] -= f * lu[k][j];
        }
    }
    return det;
}

namespace {

// Pair up near-conjugate roots and average them; snap near-real roots onto
// the axis. Real input matrices have conjugate-symmetric spectra and this
// removes the asymmetry the iteration leaves behind.
void symmetrize_conjugates(std::array<Complex, 5>& z, double scale) {
    const double tol = 1e-7 * scale;
    std::array<bool, 5> used{};
    for (int i = 0; i < 5; ++i) {
        if (used[i] || std::abs(z[i].imag()) <= tol) continue;
        int best = -1;
        double bestd = tol;
        for (int j = 0; j < 5; ++j) {
            if (j == i || used[j]) continue;
            double d = std::abs(z[i] - std::conj(z[j]));
            if (d < bestd) {
                bestd = d;
                best = j;
            }
        }
        if (best >= 0) {
            Complex mean = 0.5 * (z[i] + std::conj(z[best]));
            z[i] = mean;
            z[best] = std::conj(mean);
            used[i] = used[best] = true;
        }
    }
    for (auto& v : z)
        if (std::abs(v.imag()) <= 1e-9 * scale) v = Complex(v.real(), 0.0);
}

// Collapse clusters of computed roots onto their centroid. A k-fold root
// perturbed at level eta splits into a symmetric star of radius eta^{1/k}
// whose centroid is accurate to o(radius); averaging recovers it. The merge
// is applied only when |p(centroid)| sits at evaluation round-off, which is
// what distinguishes a genuine multiple root from two roots that merely
// happen to be close (those leave |p| at the much larger O(gap^2) level).
void merge_clusters(const Matrix5& m, std::array<Complex, 5>& z, double scale) {
    const double tol = 3e-5 * scale;
    std::array<int, 5> group{};
    for (int i = 0; i < 5; ++i) group[i] = i;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
            if (std::abs(z[i] - z[j]) < tol) {
                int gi = group[i], gj = group[j];
                for (int k = 0; k < 5; ++k)
                    if (group[k] == gj) group[k] = gi;
            }
    std::array<bool, 5> merged{};
    int merged_groups = 0;
    int the_group = -1;
    for (int g = 0; g < 5; ++g) {
        Complex sum(0.0);
        int n = 0;
        for (int k = 0; k < 5; ++k)
            if (group[k] == g) {
                sum += z[k];
                ++n;
            }
        if (n < 2) continue;
        Complex mean = sum / static_cast<double>(n);
        if (std::abs(mean.imag()) < tol) mean = Complex(mean.real(), 0.0);
        const double residual_floor = 1e-12 * std::pow(scale + std::abs(mean), 5);
        if (std::abs(char_poly(m, mean)) > residual_floor) continue;
        for (int k = 0; k < 5; ++k)
            if (group[k] == g) {
                z[k] = mean;
                merged[k] = true;
            }
        ++merged_groups;
        the_group = g;
    }

    // A single merged cluster can be pinned down much harder through the
    // trace identity: its k-fold root is (tr A - sum of simple roots)/k,
    // and the simple roots carry full precision.
    if (merged_groups == 1) {
        double trace = 0.0;
        for (int i = 0; i < 5; ++i) trace += m(i, i);
        Complex rest(0.0);
        int k_fold = 0;
        for (int k = 0; k < 5; ++k) {
            if (group[k] == the_group)
                ++k_fold;
            else
                rest += z[k];
        }
        Complex refined = (Complex(trace) - rest) / static_cast<double>(k_fold);
        if (std::abs(refined.imag()) < tol) refined = Complex(refined.real(), 0.0);
        if (std::abs(refined - z[static_cast<std::size_t>(the_group)]) < tol)
            for (int k = 0; k < 5; ++k)
                if (group[k] == the_group) z[k] = refined;
    }
}

} // namespace

Spectrum5 eigenvalues(const Matrix5& m) {
    Spectrum5 out;
    const double scale = std::max(1.0, m.norm_inf());

    std::array<Complex, 5> z;
    Complex seed(0.4, 0.9);
    Complex cur = seed;
    for (int i = 0; i < 5; ++i) {
        z[i] = scale * cur;
        cur *= seed;
    }

    const int max_iter = 600;
    const double stop = 1e-15 * scale;
    int it = 0;
    for (; it < max_iter; ++it) {
        double max_step = 0.0;
        for (int i = 0; i < 5; ++i) {
            Complex den(1.0);
            for (int j = 0; j < 5; ++j)
                if (j != i) den *= z[i] - z[j];
            if (den == Complex(0.0)) {
                z[i] += Complex(1e-10 * scale, 1e-10 * scale);
                continue;
            }
            Complex step = char_poly(m, z[i]) / den;
            z[i] -= step;
            max_step = std::max(max_step, std::abs(step));
        }
        if (max_step < stop) break;
    }
    out.iterations = it;
    // Multiple eigenvalues stall the update near their sqrt(eps) splitting
    // radius, so convergence is judged on residuals, not on step size.
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) worst = std::max(worst, std::abs(char_poly(m, z[i])));
    out.converged = worst <= 1e-9 * std::pow(scale, 5);

    symmetrize_conjugates(z, scale);
    merge_clusters(m, z, scale);

    std::sort(z.begin(), z.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    out.values = z;
    return out;
}

} // namespace sitpyr
