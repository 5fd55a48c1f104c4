#include <catch2/catch_amalgamated.hpp>

#include "specsparse/entry_oracle.hpp"
#include "specsparse/psd_test.hpp"
#include "specsparse/reference.hpp"
#include "test_util.hpp"

using namespace specsparse;

TEST_CASE("psd verdicts on canonical instances") {
    SECTION("identity is PSD") {
        // the pattern never samples the diagonal, so the identity sparsifies
        // to zero and takes the degenerate-scale path
        PsdVerdict v = psd_test(gen_identity(64), 0.2, 0);
        CHECK(v.verdict == PsdVerdictKind::Psd);
        CHECK(v.degenerate_scale);
    }
    SECTION("planted far instance is rejected") {
        const int n = 256;
        const double eps = 0.2;
        PlantedNegative p = gen_planted_negative(n, eps);
        REQUIRE(p.planted);
        // promise validation through the dense oracle
        DenseMatrix dense = p.oracle.materialize();
        double far = eps * std::max<double>(n, nuclear_norm(dense));
        REQUIRE(min_eigenvalue(dense) <= -far);
        PsdVerdict v = psd_test(from_dense(dense, true, true), eps, 3);
        CHECK(v.verdict == PsdVerdictKind::FarFromPsd);
        CHECK(v.sigma1_b > v.threshold);
    }
    SECTION("random PSD instances pass") {
        for (std::uint64_t seed : {50, 51}) {
            PsdVerdict v = psd_test(gen_random_psd_bounded(256, seed), 0.2, seed);
            CHECK(v.verdict == PsdVerdictKind::Psd);
        }
    }
    SECTION("zero matrix short-circuits with the degenerate flag") {
        EntryOracle z = from_dense(DenseMatrix(32, 32), true, true);
        PsdVerdict v = psd_test(z, 0.2, 0);
        CHECK(v.verdict == PsdVerdictKind::Psd);
        CHECK(v.degenerate_scale);
    }
}

TEST_CASE("psd test reads nothing beyond the sparsifier pattern") {
    const int n = 128;
    EntryOracle a = gen_random_psd_bounded(n, 8);
    PsdVerdict v = psd_test(a, 0.2, 1);
    SparsifierPlan p = plan(MatrixClass::General, 0.2 / 10.0, n, 1);
    CHECK(v.queries == p.pattern.pairs.size());
    CHECK(a.queries() == v.queries);
}

TEST_CASE("permuted planted instances are rejected across seeds") {
    const int n = 128;
    const double eps = 0.2;
    PlantedNegative p = gen_planted_negative(n, eps);
    DenseMatrix base = p.oracle.materialize();
    for (std::uint64_t seed : {1, 2, 3}) {
        DenseMatrix m = test_util::permute_sym(base, seed);
        PsdVerdict v = psd_test(from_dense(m, true, true), eps, seed);
        CHECK(v.verdict == PsdVerdictKind::FarFromPsd);
    }
}
