#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "specsparse/eigensolve.hpp"
#include "specsparse/entry_oracle.hpp"
#include "specsparse/linop.hpp"
#include "specsparse/reference.hpp"
#include "test_util.hpp"

using namespace specsparse;

namespace {

SparseSymMatrix all_ones_sparse(int n) {
    SparseSymMatrix s(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) s.push(i, j, 1.0);
    return s;
}

SparseSymMatrix diag_sparse(const std::vector<double>& d) {
    SparseSymMatrix s(static_cast<int>(d.size()));
    for (int i = 0; i < static_cast<int>(d.size()); ++i)
        if (d[static_cast<std::size_t>(i)] != 0.0) s.push(i, i, d[static_cast<std::size_t>(i)]);
    return s;
}

} // namespace

TEST_CASE("power method fixed points") {
    SECTION("all-ones reaches sigma = n exactly") {
        const int n = 16;
        SparseOp op(all_ones_sparse(n));
        SpectralEstimate est = power_method_top(op, 0.25);
        CHECK(est.sigma_tilde == Catch::Approx(static_cast<double>(n)).margin(1e-9));
        // direction is the normalized all-ones vector up to sign
        for (double v : est.z)
            CHECK(std::fabs(std::fabs(v) - 1.0 / std::sqrt(n)) <= 1e-9);
    }
    SECTION("identity ties resolve to the last start") {
        const int n = 8;
        DenseOp op(DenseMatrix::identity(n));
        SpectralEstimate est = power_method_top(op, 0.5);
        CHECK(est.sigma_tilde == Catch::Approx(1.0).margin(1e-12));
        CHECK(est.z[n - 1] == Catch::Approx(1.0).margin(1e-12));
        for (int i = 0; i < n - 1; ++i)
            CHECK(est.z[static_cast<std::size_t>(i)] == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("zero matrix returns e_n with score 0") {
        DenseOp op(DenseMatrix(6, 6));
        SpectralEstimate est = power_method_top(op, 0.5);
        CHECK(est.sigma_tilde == 0.0);
        CHECK(est.z[5] == 1.0);
    }
}

TEST_CASE("power method gap-independent guarantee on seeded instances") {
    const int n = 128;
    for (std::uint64_t seed : {21, 22, 23}) {
        DenseMatrix a = gen_random_symmetric(n, seed).materialize();
        double sigma1 = sym_eigen(a).singular_values().front();
        DenseOp op(a);
        for (double eps : {0.05, 0.1, 0.25}) {
            SpectralEstimate est = power_method_top(op, eps);
            CHECK(est.sigma_tilde >= (1.0 - eps) * sigma1);
            CHECK(est.sigma_tilde <= sigma1 * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("deflation on a diagonal matrix recovers the spectrum") {
    std::vector<double> d = {3.0, 2.0, 1.0};
    SparseOp op(diag_sparse(d));
    const double eps = 1e-3;
    DeflationResult r = deflation_singvals(op, eps, 3);
    REQUIRE(r.estimates.size() == 3);
    for (int i = 0; i < 3; ++i) {
        double sigma = d[static_cast<std::size_t>(i)];
        double est = r.estimates[static_cast<std::size_t>(i)].sigma_tilde;
        CHECK(est >= (1.0 - eps) * sigma);
        CHECK(est <= sigma + 3.0 * std::sqrt((i + 1) * eps));
        // z_i is +-e_{perm(i)}: one dominant coordinate
        double maxc = 0.0;
        for (double v : r.estimates[static_cast<std::size_t>(i)].z) maxc = std::max(maxc, std::fabs(v));
        CHECK(maxc >= 1.0 - 1e-6);
    }
    CHECK(test_util::max_offdiag_gram_dev(r.z) <= 1e-8);
}

TEST_CASE("deflation on the all-ones matrix") {
    const int n = 32;
    const double eps = 0.01;
    SparseOp op(all_ones_sparse(n));
    DeflationResult r = deflation_singvals(op, eps, 2);
    CHECK(r.estimates[0].sigma_tilde == Catch::Approx(static_cast<double>(n)).margin(1e-9));
    CHECK(r.estimates[1].sigma_tilde <= n * std::sqrt(2.0 * eps));
    CHECK(test_util::max_offdiag_gram_dev(r.z) <= 1e-8);
}

TEST_CASE("deflation flags exhausted rank and completes orthonormally") {
    std::vector<double> d = {5.0, 0.0, 0.0, 0.0};
    SparseOp op(diag_sparse(d));
    DeflationResult r = deflation_singvals(op, 0.1, 3);
    CHECK(r.rank_exhausted);
    CHECK(r.estimates[0].sigma_tilde == Catch::Approx(5.0).margin(1e-9));
    CHECK(r.estimates[1].sigma_tilde <= 1e-9);
    CHECK(r.estimates[2].sigma_tilde <= 1e-9);
    CHECK(test_util::max_offdiag_gram_dev(r.z) <= 1e-8);
}

TEST_CASE("deflated operators dominate the corresponding singular values") {
    // sigma_1(A^{(i)}) >= sigma_i(A), by the minimax principle
    const int n = 48;
    DenseMatrix a = gen_random_symmetric(n, 77).materialize();
    std::vector<double> sigma = sym_eigen(a).singular_values();
    auto base = std::make_shared<DenseOp>(a);
    DeflationResult r = deflation_singvals(*base, 0.05, 5);
    for (int i = 1; i < 5; ++i) {
        DenseMatrix zi(n, i);
        for (int rr = 0; rr < n; ++rr)
            for (int c = 0; c < i; ++c) zi(rr, c) = r.z(rr, c);
        DeflatedOp defl(base, zi);
        double top = singular_values(defl.to_dense()).front();
        CHECK(top >= sigma[static_cast<std::size_t>(i)] - 1e-8);
    }
}

TEST_CASE("end-to-end singular value approximation") {
    SECTION("all-ones") {
        const int n = 64;
        const double eps = 0.25;
        EntryOracle a = gen_all_ones(n);
        SingvalsResult r = approx_all_singvals(a, eps, 0);
        CHECK(std::fabs(r.sigma[0] - n) <= eps * n);
        CHECK(r.sigma[0] <= n * (1.0 + 1e-9));
        for (std::size_t i = 1; i < r.sigma.size(); ++i)
            CHECK(r.sigma[i] <= 4.0 * eps * n);
        CHECK(r.queries == r.plan.pattern.pairs.size());
    }
    SECTION("zero matrix") {
        EntryOracle a = from_dense(DenseMatrix(16, 16), true, true);
        SingvalsResult r = approx_all_singvals(a, 0.25, 0);
        for (double s : r.sigma) CHECK(s == 0.0);
    }
    SECTION("seeded psd instance within the additive bound") {
        const int n = 128;
        const double eps = 0.25;
        EntryOracle a = gen_random_psd_bounded(n, 9);
        DenseMatrix dense = a.materialize();
        std::vector<double> sigma = sym_eigen(dense).singular_values();
        double bound = eps * std::max<double>(n, nuclear_norm(dense));
        SingvalsResult r = approx_all_singvals(a, eps, 1);
        for (int i = 0; i < n; ++i)
            CHECK(std::fabs(r.sigma[static_cast<std::size_t>(i)] - sigma[static_cast<std::size_t>(i)]) <= bound);
        // vectors also approximate through the true matrix
        for (std::size_t i = 0; i < r.deflation.estimates.size(); ++i) {
            std::vector<double> az = matvec(dense, r.deflation.estimates[i].z);
            CHECK(std::fabs(norm2(az) - sigma[i]) <= bound);
        }
        CHECK(test_util::max_offdiag_gram_dev(r.vectors) <= 1e-8);
    }
}

TEST_CASE("pipeline determinism across runs and thread counts") {
    const int n = 64;
    EntryOracle a1 = gen_random_symmetric(n, 404);
    EntryOracle a2 = gen_random_symmetric(n, 404);
    EntryOracle a3 = gen_random_symmetric(n, 404);

    int saved = num_threads();
    set_num_threads(1);
    SingvalsResult r1 = approx_all_singvals(a1, 0.3, 7);
    SingvalsResult r2 = approx_all_singvals(a2, 0.3, 7);
    set_num_threads(2);
    SingvalsResult r3 = approx_all_singvals(a3, 0.3, 7);
    set_num_threads(saved);

    CHECK(r1.sigma == r2.sigma); // bitwise
    CHECK(r1.sigma == r3.sigma); // thread count cannot change results
    CHECK(r1.vectors == r2.vectors);
    CHECK(r1.vectors == r3.vectors);
    CHECK(r1.queries == r3.queries);
}
