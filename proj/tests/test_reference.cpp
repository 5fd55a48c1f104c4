#include <catch2/catch_amalgamated.hpp>

#include "specsparse/entry_oracle.hpp"
#include "specsparse/expander.hpp"
#include "specsparse/reference.hpp"
#include "specsparse/sparsifier.hpp"
#include "test_util.hpp"

using namespace specsparse;

TEST_CASE("eigendecomposition of canonical matrices") {
    DenseSpectrum id = sym_eigen(DenseMatrix::identity(6));
    for (double l : id.eigenvalues) CHECK(l == 1.0);

    DenseSpectrum ones = sym_eigen(DenseMatrix(4, 4, 1.0));
    CHECK(ones.eigenvalues[0] == Catch::Approx(4.0).margin(1e-12));
    for (int i = 1; i < 4; ++i)
        CHECK(ones.eigenvalues[static_cast<std::size_t>(i)] == Catch::Approx(0.0).margin(1e-12));

    DenseMatrix blocks = gen_signed_blocks(5, {{3, {1}}, {2, {}}}).materialize();
    DenseSpectrum s = sym_eigen(blocks);
    CHECK(s.eigenvalues[0] == Catch::Approx(3.0).margin(1e-10));
    CHECK(s.eigenvalues[1] == Catch::Approx(2.0).margin(1e-10));
    for (int i = 2; i < 5; ++i)
        CHECK(s.eigenvalues[static_cast<std::size_t>(i)] == Catch::Approx(0.0).margin(1e-10));
}

TEST_CASE("oracle self-consistency on seeded symmetric input") {
    const int n = 96;
    DenseMatrix a = gen_random_symmetric(n, 11).materialize();
    DenseSpectrum s = sym_eigen(a);

    double sum_sq = 0.0;
    for (double l : s.eigenvalues) sum_sq += l * l;
    double fro2 = a.frobenius_norm() * a.frobenius_norm();
    CHECK(std::fabs(sum_sq - fro2) <= 1e-10 * fro2);

    // reconstruction residual ||A - V L V^T||_max
    DenseMatrix lv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            lv(i, j) = s.vectors(i, j) * s.eigenvalues[static_cast<std::size_t>(j)];
    DenseMatrix rec = matmul_abt(lv, s.vectors);
    double dev = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dev = std::max(dev, std::fabs(rec(i, j) - a(i, j)));
    CHECK(dev <= 1e-8 * std::max(1.0, a.max_abs() * n));
}

TEST_CASE("sym_eigen rejects bad input") {
    CHECK_THROWS_AS(sym_eigen(DenseMatrix(2, 3)), NonSquare);
    DenseMatrix asym(2, 2);
    asym(0, 1) = 1.0;
    CHECK_THROWS_AS(sym_eigen(asym), AsymmetricInput);
}

TEST_CASE("sym_eigen reports non-convergence at the sweep cap") {
    DenseMatrix a = gen_random_symmetric(16, 4).materialize();
    CHECK_THROWS_AS(sym_eigen(a, 1e-12, 1), NoConvergence);
}

TEST_CASE("norms") {
    CHECK(nuclear_norm(DenseMatrix::identity(7)) == Catch::Approx(7.0).margin(1e-10));
    CHECK(spectral_norm(DenseMatrix(8, 8, 1.0)) == Catch::Approx(8.0).margin(1e-10));

    // bounded PSD: nuclear norm equals the trace
    DenseMatrix psd = gen_random_psd_bounded(48, 5).materialize();
    double tr = 0.0;
    for (int i = 0; i < 48; ++i) tr += psd(i, i);
    CHECK(nuclear_norm(psd) == Catch::Approx(tr).margin(1e-7));
    CHECK(tr <= 48.0 + 1e-12);
}

TEST_CASE("singular values of general matrices") {
    DenseMatrix a(2, 2);
    a(0, 0) = 1; a(0, 1) = 2; a(1, 0) = 3; a(1, 1) = 4;
    std::vector<double> s = singular_values(a);
    CHECK(s[0] == Catch::Approx(5.4649857042190426).margin(1e-9));
    CHECK(s[1] == Catch::Approx(0.36596619062625746).margin(1e-9));

    DenseMatrix nil(2, 2);
    nil(0, 1) = 1.0;
    std::vector<double> sn = singular_values(nil);
    CHECK(sn[0] == Catch::Approx(1.0).margin(1e-12));
    CHECK(sn[1] == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("weyl check") {
    DenseMatrix a = gen_random_psd_bounded(40, 3).materialize();
    SECTION("identical matrices give zero margin") {
        WeylReport w = weyl_check(a, a);
        CHECK(w.ok);
        CHECK(w.max_sing_diff == Catch::Approx(0.0).margin(1e-12));
        CHECK(w.spectral_err == Catch::Approx(0.0).margin(1e-10));
    }
    SECTION("sparsified all-ones attains both sides") {
        const int n = 12;
        SparsifierPlan p = plan(MatrixClass::Psd, 0.5, n, 0);
        REQUIRE(p.graph.complete());
        EntryOracle ones = gen_all_ones(n);
        SparseSymMatrix at = sparsify(ones, p);
        WeylReport w = weyl_check(DenseMatrix(n, n, 1.0), at.to_dense());
        double expect = static_cast<double>(n) / (n - 1);
        CHECK(w.spectral_err == Catch::Approx(expect).margin(1e-9));
        CHECK(w.max_sing_diff == Catch::Approx(expect).margin(1e-9));
        CHECK(w.ok);
    }
    SECTION("random PSD and its sparsification") {
        const int n = 64;
        SparsifierPlan p = plan(MatrixClass::Psd, 0.3, n, 1);
        EntryOracle o = gen_random_psd_bounded(n, 17);
        SparseSymMatrix at = sparsify(o, p);
        WeylReport w = weyl_check(o.materialize(), at.to_dense());
        CHECK(w.ok);
    }
}

TEST_CASE("jacobi agrees with the closed-form circulant spectrum") {
    for (auto [n, eps, seed] : {std::tuple<int, double, std::uint64_t>{32, 0.5, 0},
                                {64, 0.4, 1},
                                {96, 0.3, 2}}) {
        auto [g, cert] = build_for_epsilon(n, eps, seed);
        std::vector<double> closed = cert.lambda;
        std::sort(closed.begin(), closed.end(), std::greater<double>());
        std::vector<double> dense = sym_eigen(g.adjacency()).eigenvalues;
        for (std::size_t i = 0; i < closed.size(); ++i)
            CHECK(std::fabs(closed[i] - dense[i]) <= 1e-9);
    }
}
