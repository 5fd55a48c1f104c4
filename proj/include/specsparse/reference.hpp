#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "dense_matrix.hpp"
#include "errors.hpp"

namespace specsparse {

/// Full eigendecomposition of a symmetric matrix. Eigenvalues descending;
/// column i of `vectors` is the eigenvector for eigenvalues[i].
struct DenseSpectrum {
    std::vector<double> eigenvalues;
    DenseMatrix vectors;
    int sweeps = 0;

    /// Singular values: |eigenvalues| sorted descending.
    std::vector<double> singular_values() const {
        std::vector<double> s(eigenvalues.size());
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::fabs(eigenvalues[i]);
        std::sort(s.begin(), s.end(), std::greater<double>());
        return s;
    }
};

namespace jacobi_detail {

// Round-robin pivot schedule: n-1 rounds of disjoint (p, q) planes covering
// every unordered pair exactly once per sweep. Deterministic.
inline std::vector<std::vector<std::pair<int, int>>> tournament_schedule(int n) {
    int m = (n % 2 == 0) ? n : n + 1;
    std::vector<int> ring(static_cast<std::size_t>(m));
    std::iota(ring.begin(), ring.end(), 0);
    std::vector<std::vector<std::pair<int, int>>> sched;
    sched.reserve(static_cast<std::size_t>(m - 1));
    for (int r = 0; r < m - 1; ++r) {
        std::vector<std::pair<int, int>> pairs;
        pairs.reserve(static_cast<std::size_t>(m / 2));
        for (int i = 0; i < m / 2; ++i) {
            int x = ring[static_cast<std::size_t>(i)];
            int y = ring[static_cast<std::size_t>(m - 1 - i)];
            if (x < n && y < n) pairs.emplace_back(std::min(x, y), std::max(x, y));
        }
        std::sort(pairs.begin(), pairs.end());
        sched.push_back(std::move(pairs));
        int last = ring[static_cast<std::size_t>(m - 1)];
        for (int i = m - 1; i > 1; --i) ring[static_cast<std::size_t>(i)] = ring[static_cast<std::size_t>(i - 1)];
        ring[1] = last;
    }
    return sched;
}

inline double offdiag_fro(const DenseMatrix& a) {
    double off = 0.0;
    for (int p = 0; p < a.rows(); ++p)
        for (int q = p + 1; q < a.cols(); ++q) off += 2.0 * a(p, q) * a(p, q);
    return std::sqrt(off);
}

} // namespace jacobi_detail

/// Cyclic Jacobi eigendecomposition, tournament pivot order. Rotations within
/// a round act on disjoint planes, so the round is applied in one traversal:
/// pivot row pairs get their left rotation, then every row gets the round's
/// right rotations. Identical arithmetic to applying the round sequentially.
/// Converges to off-diagonal Frobenius norm <= 1e-12 * ||A||_F.
inline DenseSpectrum sym_eigen(const DenseMatrix& input, double tol_rel = 1e-12,
                               int max_sweeps = 60) {
    if (input.rows() != input.cols())
        throw NonSquare("sym_eigen: matrix is not square");
    if (!input.is_symmetric())
        throw AsymmetricInput("sym_eigen: matrix is not symmetric");
    const int n = input.rows();
    DenseMatrix a = input;
    DenseMatrix vt = DenseMatrix::identity(n); // rows of vt = eigenvector columns

    const double tol = tol_rel * a.frobenius_norm();
    auto sched = jacobi_detail::tournament_schedule(n);

    std::vector<double> cs, sn;
    std::vector<int> pp, qq;
    std::vector<char> in_round(static_cast<std::size_t>(n));

    int sweeps = 0;
    for (; sweeps < max_sweeps; ++sweeps) {
        if (jacobi_detail::offdiag_fro(a) <= tol) break;
        for (const auto& pairs : sched) {
            cs.clear(); sn.clear(); pp.clear(); qq.clear();
            std::fill(in_round.begin(), in_round.end(), 0);
            for (auto [p, q] : pairs) {
                double apq = a(p, q);
                if (apq == 0.0) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                in_round[static_cast<std::size_t>(p)] = 1;
                in_round[static_cast<std::size_t>(q)] = 1;
                pp.push_back(p); qq.push_back(q);
                cs.push_back(c); sn.push_back(t * c);
            }
            const std::size_t nr = pp.size();
            if (nr == 0) continue;
            for (std::size_t r = 0; r < nr; ++r) {
                const double c = cs[r], s = sn[r];
                double* rp = a.row(pp[r]);
                double* rq = a.row(qq[r]);
                for (int k = 0; k < n; ++k) {
                    double x = rp[k], y = rq[k];
                    rp[k] = c * x - s * y;
                    rq[k] = s * x + c * y;
                }
                double* vp = vt.row(pp[r]);
                double* vq = vt.row(qq[r]);
                for (int k = 0; k < n; ++k) {
                    double x = vp[k], y = vq[k];
                    vp[k] = c * x - s * y;
                    vq[k] = s * x + c * y;
                }
                for (std::size_t s2 = 0; s2 < nr; ++s2) {
                    const double c2 = cs[s2], ss = sn[s2];
                    const int p2 = pp[s2], q2 = qq[s2];
                    double x = rp[p2], y = rp[q2];
                    rp[p2] = c2 * x - ss * y;
                    rp[q2] = ss * x + c2 * y;
                    x = rq[p2]; y = rq[q2];
                    rq[p2] = c2 * x - ss * y;
                    rq[q2] = ss * x + c2 * y;
                }
            }
            for (int k = 0; k < n; ++k) {
                if (in_round[static_cast<std::size_t>(k)]) continue;
                double* row = a.row(k);
                for (std::size_t s2 = 0; s2 < nr; ++s2) {
                    const double c2 = cs[s2], ss = sn[s2];
                    const int p2 = pp[s2], q2 = qq[s2];
                    double x = row[p2], y = row[q2];
                    row[p2] = c2 * x - ss * y;
                    row[q2] = ss * x + c2 * y;
                }
            }
        }
    }
    if (sweeps >= max_sweeps && jacobi_detail::offdiag_fro(a) > tol)
        throw NoConvergence("sym_eigen: sweep cap reached before meeting tolerance");

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&a](int x, int y) { return a(x, x) > a(y, y); });

    DenseSpectrum out;
    out.sweeps = sweeps;
    out.eigenvalues.resize(static_cast<std::size_t>(n));
    out.vectors = DenseMatrix(n, n);
    for (int c = 0; c < n; ++c) {
        int src = order[static_cast<std::size_t>(c)];
        out.eigenvalues[static_cast<std::size_t>(c)] = a(src, src);
        for (int r = 0; r < n; ++r) out.vectors(r, c) = vt(src, r);
    }
    return out;
}

inline double spectral_norm(const DenseMatrix& a) {
    DenseSpectrum s = sym_eigen(a);
    double m = 0.0;
    for (double l : s.eigenvalues) m = std::max(m, std::fabs(l));
    return m;
}

/// Schatten-1 norm (sum of singular values) of a symmetric matrix.
inline double nuclear_norm(const DenseMatrix& a) {
    DenseSpectrum s = sym_eigen(a);
    double t = 0.0;
    for (double l : s.eigenvalues) t += std::fabs(l);
    return t;
}

inline double min_eigenvalue(const DenseMatrix& a) {
    DenseSpectrum s = sym_eigen(a);
    return s.eigenvalues.back();
}

/// Singular values of a general square matrix via its Hermitian dilation
/// [[0, A], [A^T, 0]], whose spectrum is {+-sigma_i}.
inline std::vector<double> singular_values(const DenseMatrix& a) {
    if (a.rows() != a.cols())
        throw NonSquare("singular_values: matrix is not square");
    if (a.is_symmetric()) return sym_eigen(a).singular_values();
    int n = a.rows();
    DenseMatrix d(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            d(i, n + j) = a(i, j);
            d(n + j, i) = a(i, j);
        }
    std::vector<double> all = sym_eigen(d).singular_values();
    // each sigma appears twice; keep one copy
    std::vector<double> s(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = all[static_cast<std::size_t>(2 * i)];
    return s;
}

struct WeylReport {
    bool ok = false;
    double max_sing_diff = 0.0; // max_i |sigma_i(A) - sigma_i(B)|
    double spectral_err = 0.0;  // ||A - B||_2
    double margin = 0.0;        // spectral_err - max_sing_diff (>= 0 when ok)
};

/// Checks max_i |sigma_i(A) - sigma_i(B)| <= ||A - B||_2 on dense inputs.
inline WeylReport weyl_check(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("weyl_check: shape disagreement");
    std::vector<double> sa = singular_values(a);
    std::vector<double> sb = singular_values(b);
    DenseMatrix diff(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) diff(i, j) = a(i, j) - b(i, j);
    WeylReport rep;
    for (std::size_t i = 0; i < sa.size(); ++i)
        rep.max_sing_diff = std::max(rep.max_sing_diff, std::fabs(sa[i] - sb[i]));
    rep.spectral_err = diff.is_symmetric()
                           ? spectral_norm(diff)
                           : singular_values(diff).front();
    rep.margin = rep.spectral_err - rep.max_sing_diff;
    rep.ok = rep.margin >= -1e-9 * std::max(1.0, rep.spectral_err);
    return rep;
}

} // namespace specsparse
