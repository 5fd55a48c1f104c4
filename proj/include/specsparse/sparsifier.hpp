#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "dense_matrix.hpp"
#include "entry_oracle.hpp"
#include "errors.hpp"
#include "expander.hpp"
#include "reference.hpp"
#include "sparse_sym.hpp"

namespace specsparse {

/// Entry positions to be read, with the rescaling that makes the pattern an
/// unbiased sparsifier: kept entries are multiplied by scale = n^2 / s where
/// s counts the pattern's nonzeros over the full matrix (2 per unordered
/// pair; the diagonal is never sampled).
struct SamplingPattern {
    int n = 0;
    std::vector<std::pair<int, int>> pairs; // sorted, i < j

    static SamplingPattern from_expander(const CirculantExpander& g) {
        SamplingPattern p;
        p.n = g.n;
        p.pairs = g.edges();
        return p;
    }

    std::uint64_t s() const { return 2 * static_cast<std::uint64_t>(pairs.size()); }

    double scale() const {
        return static_cast<double>(n) * static_cast<double>(n) / static_cast<double>(s());
    }
};

enum class MatrixClass { Psd, General };

inline const char* to_string(MatrixClass c) {
    return c == MatrixClass::Psd ? "psd" : "general";
}

/// Accuracy plan: the expansion quality eps_prime the sampling graph must
/// certify so that the sparsifier meets the requested eps for the declared
/// matrix class. PSD needs eps_prime = eps; the general symmetric case needs
/// eps_prime = eps^2 / (c_gen * log2^2(1/eps)).
struct SparsifierPlan {
    MatrixClass matrix_class = MatrixClass::Psd;
    double eps = 0.0;
    double eps_prime = 0.0;
    CirculantExpander graph;
    ExpanderCertificate certificate;
    SamplingPattern pattern;

    /// Bound certified for bounded PSD inputs: ||A - A0S||_2 <= eps_hat * n.
    double certified_bound_psd() const { return certificate.eps_hat * certificate.n; }
};

inline double general_eps_prime(double eps, double c_gen) {
    double lg = std::log2(1.0 / eps);
    double denom = c_gen * lg * lg;
    if (denom <= 0.0) return eps;
    double ep = eps * eps / denom;
    // a PSD-grade pattern is strictly stronger; fall back to it when the
    // formula degenerates near eps = 1
    if (!(ep < 1.0)) return eps;
    return ep;
}

inline SparsifierPlan plan(MatrixClass matrix_class, double eps, int n,
                           std::uint64_t seed, double c_gen = 4.0) {
    if (!(eps > 0.0 && eps < 1.0))
        throw BadSizes("plan: eps must lie in (0,1)");
    if (n < 4) throw BadSizes("plan: n must be at least 4");
    SparsifierPlan p;
    p.matrix_class = matrix_class;
    p.eps = eps;
    p.eps_prime = (matrix_class == MatrixClass::Psd) ? eps : general_eps_prime(eps, c_gen);
    auto [g, c] = build_for_epsilon(n, p.eps_prime, seed);
    p.graph = std::move(g);
    p.certificate = std::move(c);
    p.pattern = SamplingPattern::from_expander(p.graph);
    return p;
}

/// A0S: reads A at exactly the pattern's unordered pairs (one counted query
/// each) and scales kept values by n^2/s. Exact zeros of A are dropped from
/// the output structure. Requires a symmetric oracle; symmetrize asymmetric
/// inputs with hermitian_dilation first and plan for 2n.
inline SparseSymMatrix sparsify(const EntryOracle& a, const SparsifierPlan& p) {
    if (a.n() != p.pattern.n)
        throw DimensionMismatch("sparsify: oracle and plan dimensions disagree");
    if (!a.symmetric())
        throw AsymmetricInput("sparsify: oracle must be symmetric");
    if (!a.bounded())
        throw EntryOutOfRange("sparsify: oracle must declare bounded entries");
    const double scale = p.pattern.scale();
    SparseSymMatrix out(p.pattern.n);
    for (auto [i, j] : p.pattern.pairs) {
        double v = a.entry(i, j);
        if (v != 0.0) out.push(i, j, scale * v);
    }
    return out;
}

/// |x^T A x - x^T Atilde x| for a unit vector x. For bounded PSD A this is at
/// most eps_hat * n * (x^T diag(A) x).
inline double quad_form_gap(const DenseMatrix& a, const SparseSymMatrix& atilde,
                            const std::vector<double>& x) {
    if (a.rows() != atilde.n() || static_cast<int>(x.size()) != a.rows())
        throw DimensionMismatch("quad_form_gap: size disagreement");
    double qa = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
        const double* row = a.row(i);
        double s = 0.0;
        for (int j = 0; j < a.cols(); ++j) s += row[j] * x[static_cast<std::size_t>(j)];
        qa += x[static_cast<std::size_t>(i)] * s;
    }
    double qt = 0.0;
    for (const auto& e : atilde.entries()) {
        double term = e.value * x[static_cast<std::size_t>(e.i)] * x[static_cast<std::size_t>(e.j)];
        qt += (e.i == e.j) ? term : 2.0 * term;
    }
    return std::fabs(qa - qt);
}

/// Exact ||A - Atilde||_2 through the dense eigensolver. Test-time oracle.
inline double certify_error(const DenseMatrix& a, const SparseSymMatrix& atilde) {
    if (a.rows() != atilde.n())
        throw DimensionMismatch("certify_error: size disagreement");
    DenseMatrix diff = a;
    for (const auto& e : atilde.entries()) {
        diff(e.i, e.j) -= e.value;
        if (e.i != e.j) diff(e.j, e.i) -= e.value;
    }
    return spectral_norm(diff);
}

} // namespace specsparse
