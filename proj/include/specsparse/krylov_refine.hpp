#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "dense_matrix.hpp"
#include "eigensolve.hpp"
#include "entry_oracle.hpp"
#include "errors.hpp"
#include "linop.hpp"
#include "reference.hpp"
#include "sparsifier.hpp"

namespace specsparse {

/// Parameters of the high-accuracy pipeline under the promise
/// sigma_1(A) >= alpha * max(n, ||A||_1).
struct KrylovConfig {
    double alpha = 0.25;
    double eps = 1e-6;
    double c_sp = 0.01; // sparsifier accuracy constant: target c_sp * alpha^4
    double c_q = 10.0;  // iteration constant

    int k() const { return static_cast<int>(std::ceil(2.0 / alpha)); }

    int q(int n) const {
        return static_cast<int>(
            std::ceil(c_q * std::log(static_cast<double>(n) / eps) / std::pow(alpha, 1.5)));
    }
};

namespace krylov_detail {

/// Appends the columns of `block` to Q by modified Gram-Schmidt with one
/// re-orthogonalization pass, dropping columns whose residual falls below
/// droptol. Returns the number of columns kept.
inline int append_block(std::vector<std::vector<double>>& q, const DenseMatrix& block,
                        double droptol) {
    const int n = block.rows();
    int kept = 0;
    for (int c = 0; c < block.cols(); ++c) {
        std::vector<double> v(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = block(i, c);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& qc : q) {
                double coef = dot(qc, v);
                for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] -= coef * qc[static_cast<std::size_t>(i)];
            }
        double nv = norm2(v);
        if (nv <= droptol) continue;
        for (double& x : v) x /= nv;
        q.push_back(std::move(v));
        ++kept;
        if (static_cast<int>(q.size()) >= n) break;
    }
    return kept;
}

} // namespace krylov_detail

/// Block Krylov eigensolver step: orthonormalizes
/// K = [AZ, (AA^T)AZ, ..., (AA^T)^q AZ], forms the Rayleigh quotient
/// Q^T (A A^T) Q, and returns Q times its top k_out eigenvectors. Blocks are
/// orthonormalized as they are produced (a block-ordered QR of the explicit
/// Krylov matrix, one re-orthogonalization pass, pivot drop tolerance
/// 1e-12 * block norm); iteration stops early once the space stops growing
/// or spans R^n, after which Rayleigh-Ritz is already exact on the span.
inline DenseMatrix block_krylov(const LinOp& a, const DenseMatrix& z, int q, int k_out) {
    const int n = a.dim();
    if (z.rows() != n) throw DimensionMismatch("block_krylov: block height disagreement");
    if (q < 0 || k_out < 1) throw BadSizes("block_krylov: bad q or k_out");

    DenseMatrix ad = a.to_dense();
    DenseMatrix adt = ad.transposed();

    DenseMatrix block = matmul(ad, z); // AZ
    if (block.max_abs() == 0.0)
        throw DegenerateBlock("block_krylov: AZ is numerically zero");

    std::vector<std::vector<double>> qcols;
    double droptol = 1e-12 * block.frobenius_norm();
    krylov_detail::append_block(qcols, block, droptol);
    for (int it = 0; it < q; ++it) {
        if (static_cast<int>(qcols.size()) >= n) break;
        block = matmul(ad, matmul(adt, block));
        // rescale columns: spans are scale-free and powers overflow otherwise
        for (int c = 0; c < block.cols(); ++c) {
            double nc = 0.0;
            for (int i = 0; i < n; ++i) nc += block(i, c) * block(i, c);
            nc = std::sqrt(nc);
            if (nc > 0.0)
                for (int i = 0; i < n; ++i) block(i, c) /= nc;
        }
        droptol = 1e-12 * block.frobenius_norm();
        if (krylov_detail::append_block(qcols, block, droptol) == 0) break;
    }

    const int cols = static_cast<int>(qcols.size());
    DenseMatrix qmat(n, cols);
    for (int c = 0; c < cols; ++c)
        for (int i = 0; i < n; ++i) qmat(i, c) = qcols[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)];

    // Rayleigh quotient M = Q^T (A A^T) Q, symmetrized to kill rounding skew
    DenseMatrix aq = matmul(adt, qmat);
    DenseMatrix mq = matmul_atb(aq, aq);
    for (int i = 0; i < cols; ++i)
        for (int j = i + 1; j < cols; ++j) {
            double v = 0.5 * (mq(i, j) + mq(j, i));
            mq(i, j) = v;
            mq(j, i) = v;
        }
    DenseSpectrum spec = sym_eigen(mq);

    const int kk = std::min(k_out, cols);
    DenseMatrix top(cols, kk);
    for (int c = 0; c < kk; ++c)
        for (int i = 0; i < cols; ++i) top(i, c) = spec.vectors(i, c);
    return matmul(qmat, top);
}

struct SpecnormResult {
    std::vector<double> z1;
    double sigma_tilde = 0.0;
    DenseMatrix ztilde;              // n x k refined block
    std::vector<double> sigma_block; // ||A^T ztilde_i|| for every column
    int iterations = 0;
    int block_size = 0;
    std::uint64_t queries_sparsify = 0;
    std::uint64_t queries_total = 0;
    SparsifierPlan plan;
};

/// High-accuracy top singular value under the promise
/// sigma_1(A) >= alpha * max(n, ||A||_1): deflation on the sparsifier seeds a
/// block Krylov solve on A itself, which reads all of A (the sublinear query
/// budget applies to the seeding stage only). Returns z_tilde with
/// ||A z_tilde|| >= (1 - eps) * sigma_1(A) under the promise.
inline SpecnormResult high_accuracy_specnorm(const EntryOracle& a, double alpha,
                                             double eps, std::uint64_t seed,
                                             KrylovConfig cfg = {},
                                             const EigensolveConfig& ecfg = {}) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw BadSizes("high_accuracy_specnorm: alpha must lie in (0,1)");
    if (!(eps > 0.0 && eps < 1.0))
        throw BadSizes("high_accuracy_specnorm: eps must lie in (0,1)");
    cfg.alpha = alpha;
    cfg.eps = eps;
    const int n = a.n();

    SpecnormResult res;
    double eps_sp = std::min(0.5, cfg.c_sp * std::pow(alpha, 4.0));
    res.plan = plan(MatrixClass::General, eps_sp, n, seed);
    std::uint64_t q0 = a.queries();
    SparseSymMatrix atilde = sparsify(a, res.plan);
    res.queries_sparsify = a.queries() - q0;

    const int k = std::min(cfg.k(), n);
    SparseOp op(atilde);
    DeflationResult defl = deflation_singvals(op, eps_sp, k, ecfg);

    DenseMatrix adense = a.materialize(); // refinement stage reads all of A
    res.queries_total = a.queries() - q0;

    res.iterations = cfg.q(n);
    res.block_size = k;
    DenseOp aop(adense);
    res.ztilde = block_krylov(aop, defl.z, res.iterations, k);

    res.sigma_block.resize(static_cast<std::size_t>(res.ztilde.cols()));
    for (int c = 0; c < res.ztilde.cols(); ++c) {
        std::vector<double> zc(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) zc[static_cast<std::size_t>(i)] = res.ztilde(i, c);
        std::vector<double> az(static_cast<std::size_t>(n));
        aop.apply_t(zc.data(), az.data());
        res.sigma_block[static_cast<std::size_t>(c)] = norm2(az);
    }
    res.z1.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) res.z1[static_cast<std::size_t>(i)] = res.ztilde(i, 0);
    res.sigma_tilde = res.sigma_block.empty() ? 0.0 : res.sigma_block.front();
    return res;
}

} // namespace specsparse
