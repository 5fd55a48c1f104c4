#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "dense_matrix.hpp"
#include "entry_oracle.hpp"
#include "errors.hpp"
#include "linop.hpp"
#include "sparsifier.hpp"

namespace specsparse {

/// One approximate singular value with its left direction vector.
struct SpectralEstimate {
    double sigma_tilde = 0.0;
    std::vector<double> z;
    int index = 0;
    double error_radius = 0.0;
};

struct EigensolveConfig {
    double c_pm = 5.0;               // iteration-count constant
    double rank_exhausted_tol = 1e-12;
};

namespace eigensolve_detail {

/// P <- P / ||P||_F, guarding the zero matrix. The power method's per-step
/// normalization only fixes vector directions, so any positive rescaling of
/// intermediate powers is equivalent; this keeps repeated squaring in range.
inline void rescale_fro(DenseMatrix& p) {
    double f = p.frobenius_norm();
    if (f > 0.0) p.scale(1.0 / f);
}

/// P = W^t with Frobenius rescaling after every product, t >= 1, by binary
/// exponentiation. Columns of P are the unnormalized power iterates of every
/// standard basis start simultaneously.
inline DenseMatrix matrix_power(DenseMatrix w, std::uint64_t t) {
    rescale_fro(w);
    int bits = 0;
    while ((t >> bits) > 1) ++bits;
    DenseMatrix acc = w;
    for (int b = bits - 1; b >= 0; --b) {
        acc = matmul(acc, acc);
        rescale_fro(acc);
        if ((t >> b) & 1) {
            acc = matmul(acc, w);
            rescale_fro(acc);
        }
    }
    return acc;
}

} // namespace eigensolve_detail

/// Brute-force derandomized power method: t = ceil(c_pm * ln(n/eps) / eps)
/// iterations of y <- (M M^T) y, normalized, from every standard basis start;
/// the candidate maximizing ||M^T y|| wins, later index winning exact ties.
/// Guarantees (1 - eps) * sigma_1(M) <= sigma_tilde <= sigma_1(M).
///
/// The n starts are evaluated together: columns of (M M^T)^t are all n
/// iterates at once, and the power is formed by exact-exponent repeated
/// squaring with norm rescaling, which preserves every iterate's direction.
/// Starts whose iterate collapses to zero keep score 0 and are skipped; if
/// every start collapses, z = e_n with sigma_tilde = 0.
inline SpectralEstimate power_method_top(const LinOp& m, double eps,
                                         const EigensolveConfig& cfg = {}) {
    if (!(eps > 0.0 && eps < 1.0))
        throw BadSizes("power_method_top: eps must lie in (0,1)");
    const int n = m.dim();
    const std::uint64_t t = static_cast<std::uint64_t>(
        std::ceil(cfg.c_pm * std::log(static_cast<double>(n) / eps) / eps));

    DenseMatrix d = m.to_dense();
    DenseMatrix w = matmul_abt(d, d); // M M^T
    DenseMatrix p = eigensolve_detail::matrix_power(std::move(w), t < 1 ? 1 : t);

    // normalize columns; empty columns mark collapsed starts
    std::vector<double> colnorm(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        const double* row = p.row(i);
        for (int k = 0; k < n; ++k) colnorm[static_cast<std::size_t>(k)] += row[k] * row[k];
    }
    for (double& c : colnorm) c = std::sqrt(c);
    for (int i = 0; i < n; ++i) {
        double* row = p.row(i);
        for (int k = 0; k < n; ++k)
            if (colnorm[static_cast<std::size_t>(k)] > 0.0) row[k] /= colnorm[static_cast<std::size_t>(k)];
    }

    // scores: ||M^T y_k|| = column norms of D^T Y
    DenseMatrix g = matmul_atb(d, p);
    std::vector<double> score(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        const double* row = g.row(i);
        for (int k = 0; k < n; ++k) score[static_cast<std::size_t>(k)] += row[k] * row[k];
    }
    for (double& s : score) s = std::sqrt(s);

    int best = -1;
    double best_score = 0.0;
    for (int k = 0; k < n; ++k) {
        if (colnorm[static_cast<std::size_t>(k)] == 0.0) continue;
        if (score[static_cast<std::size_t>(k)] >= best_score) {
            best = k;
            best_score = score[static_cast<std::size_t>(k)];
        }
    }

    SpectralEstimate est;
    est.z.assign(static_cast<std::size_t>(n), 0.0);
    if (best < 0) {
        est.z[static_cast<std::size_t>(n - 1)] = 1.0;
        est.sigma_tilde = 0.0;
    } else {
        for (int i = 0; i < n; ++i) est.z[static_cast<std::size_t>(i)] = p(i, best);
        est.sigma_tilde = best_score;
    }
    est.error_radius = est.sigma_tilde * eps / (1.0 - eps);
    return est;
}

struct DeflationResult {
    std::vector<SpectralEstimate> estimates;
    DenseMatrix z;             // n x k, columns z_1..z_k
    bool rank_exhausted = false;
};

namespace eigensolve_detail {

/// One modified Gram-Schmidt pass of v against the first `cols` columns of z.
inline void mgs_pass(std::vector<double>& v, const DenseMatrix& z, int cols) {
    for (int c = 0; c < cols; ++c) {
        double coef = 0.0;
        for (int i = 0; i < z.rows(); ++i) coef += z(i, c) * v[static_cast<std::size_t>(i)];
        for (int i = 0; i < z.rows(); ++i) v[static_cast<std::size_t>(i)] -= coef * z(i, c);
    }
}

/// Deterministic orthonormal completion: the first basis vector that survives
/// orthogonalization against the existing columns.
inline std::vector<double> completion_vector(const DenseMatrix& z, int cols) {
    const int n = z.rows();
    for (int j = 0; j < n; ++j) {
        std::vector<double> v(static_cast<std::size_t>(n), 0.0);
        v[static_cast<std::size_t>(j)] = 1.0;
        mgs_pass(v, z, cols);
        mgs_pass(v, z, cols);
        double nv = norm2(v);
        if (nv > 0.5) { // e_j far from span(Z); guaranteed to exist for cols < n
            for (double& x : v) x /= nv;
            return v;
        }
    }
    throw NoConvergence("completion_vector: no basis vector survives projection");
}

} // namespace eigensolve_detail

/// Top-k singular value estimation by repeated deflation: z_i is the power
/// method's output on (I - Z_{i-1} Z_{i-1}^T) M, then joins the block. Each
/// z_i gets one explicit Gram-Schmidt pass against the block before storage
/// to contain floating-point drift. Estimates store sigma_tilde_i = ||M^T z_i||.
/// Guarantee per index: (1-eps) sigma_i <= sigma_tilde_i <= sigma_i +
/// sigma_1 * sqrt(i * eps).
///
/// If a deflated operator's best score falls to rank_exhausted_tol the
/// residual rank is spent: remaining estimates are 0 with deterministic
/// orthonormal completion directions, and the result is flagged.
inline DeflationResult deflation_singvals(const LinOp& m, double eps, int k,
                                          const EigensolveConfig& cfg = {}) {
    const int n = m.dim();
    if (k < 1 || k > n) throw BadSizes("deflation_singvals: k out of range");

    auto base = std::make_shared<DenseOp>(m.to_dense());
    DeflationResult res;
    res.z = DenseMatrix(n, k);

    for (int i = 0; i < k; ++i) {
        SpectralEstimate est;
        bool exhausted_now = res.rank_exhausted;
        if (!exhausted_now) {
            DenseMatrix zi(n, i);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < i; ++c) zi(r, c) = res.z(r, c);
            if (i == 0) {
                est = power_method_top(*base, eps, cfg);
            } else {
                DeflatedOp defl(base, std::move(zi));
                est = power_method_top(defl, eps, cfg);
            }
            if (est.sigma_tilde <= cfg.rank_exhausted_tol) {
                res.rank_exhausted = true;
                exhausted_now = true;
            }
        }
        if (exhausted_now) {
            est = SpectralEstimate{};
            est.z = eigensolve_detail::completion_vector(res.z, i);
            est.sigma_tilde = 0.0;
        }

        eigensolve_detail::mgs_pass(est.z, res.z, i);
        double nz = norm2(est.z);
        if (nz == 0.0) {
            est.z = eigensolve_detail::completion_vector(res.z, i);
        } else {
            for (double& x : est.z) x /= nz;
        }

        // sigma_tilde_i recomputed on the undeflated operator
        std::vector<double> mt = base->apply_t(est.z);
        est.sigma_tilde = norm2(mt);
        est.index = i + 1;
        double upper_dev = est.sigma_tilde * (1.0 / (1.0 - eps) - 1.0);
        double lower_dev = (i > 0 ? res.estimates.front().sigma_tilde / (1.0 - eps)
                                  : est.sigma_tilde / (1.0 - eps)) *
                           std::sqrt(static_cast<double>(i + 1) * eps);
        est.error_radius = std::max(upper_dev, lower_dev);

        for (int r = 0; r < n; ++r) res.z(r, i) = est.z[static_cast<std::size_t>(r)];
        res.estimates.push_back(std::move(est));
    }
    return res;
}

/// Full report of the sparsify-then-deflate pipeline.
struct SingvalsResult {
    std::vector<double> sigma;       // n values; zero beyond the deflated top-k
    DenseMatrix vectors;             // n x k
    DeflationResult deflation;
    SparsifierPlan plan;
    std::uint64_t queries = 0;
    std::uint64_t queries_doubled = 0;
    double certified_radius = 0.0;   // additive, valid while ||A||_1 <= n
};

/// Deterministic approximation of the whole singular value profile of a
/// bounded symmetric matrix: sparsify with the general-case plan, deflate the
/// sparsifier with error parameter eps^3 for the top ceil(1/eps) values, and
/// report zeros beyond. Additive error C * eps * max(n, ||A||_1) with C <= 4.
inline SingvalsResult approx_all_singvals(const EntryOracle& a, double eps,
                                          std::uint64_t seed,
                                          const EigensolveConfig& cfg = {}) {
    if (!(eps > 0.0 && eps < 1.0))
        throw BadSizes("approx_all_singvals: eps must lie in (0,1)");
    const int n = a.n();
    const int k = static_cast<int>(std::ceil(1.0 / eps));

    SingvalsResult res;
    res.plan = plan(MatrixClass::General, eps, n, seed);
    std::uint64_t q0 = a.queries();
    SparseSymMatrix atilde = sparsify(a, res.plan);
    res.queries = a.queries() - q0;
    res.queries_doubled = a.queries_doubled();

    SparseOp op(atilde);
    res.deflation = deflation_singvals(op, eps * eps * eps, std::min(k, n), cfg);

    res.sigma.assign(static_cast<std::size_t>(n), 0.0);
    res.vectors = res.deflation.z;
    res.certified_radius = 4.0 * eps * n;
    for (std::size_t i = 0; i < res.deflation.estimates.size(); ++i) {
        std::vector<double> az = atilde.apply(res.deflation.estimates[i].z);
        res.sigma[i] = norm2(az);
        res.deflation.estimates[i].error_radius = res.certified_radius;
    }
    return res;
}

} // namespace specsparse
