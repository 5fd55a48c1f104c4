#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "specsparse/entry_oracle.hpp"
#include "specsparse/matrix_market.hpp"
#include "specsparse/reference.hpp"
#include "test_util.hpp"

using namespace specsparse;

TEST_CASE("from_dense basic access and validation") {
    DenseMatrix id2 = DenseMatrix::identity(2);
    EntryOracle o = from_dense(id2, true, true);
    CHECK(o.entry(0, 0) == 1.0);
    CHECK(o.entry(0, 1) == 0.0);

    DenseMatrix bad(2, 2);
    bad(0, 1) = 1.5;
    bad(1, 0) = 1.5;
    CHECK_THROWS_AS(from_dense(bad, true, true), EntryOutOfRange);

    DenseMatrix rect(2, 3);
    CHECK_THROWS_AS(from_dense(rect, false, false), NonSquare);

    DenseMatrix asym(2, 2);
    asym(0, 1) = 0.25;
    CHECK_THROWS_AS(from_dense(asym, true, true), AsymmetricInput);
    CHECK_NOTHROW(from_dense(asym, false, true));
}

TEST_CASE("bound violations surface at the read position") {
    // a custom oracle can lie about its range; the read itself checks
    EntryOracle o(2, true, true, [](int, int) { return 2.0; });
    CHECK_THROWS_AS(o.entry(0, 1), EntryOutOfRange);
}

TEST_CASE("unordered-pair query counting on symmetric oracles") {
    DenseMatrix m(3, 3);
    m(0, 1) = 0.5;
    m(1, 0) = 0.5;
    EntryOracle o = from_dense(m, true, true);
    o.entry(0, 1);
    o.entry(1, 0);
    CHECK(o.queries() == 1);
    CHECK(o.queries_doubled() == 2);
    o.entry(1, 1);
    CHECK(o.queries() == 2);
    CHECK(o.queries_doubled() == 3); // diagonal counts once in both figures
}

TEST_CASE("query counter is exact under concurrent readers") {
    const int n = 64;
    EntryOracle o = gen_all_ones(n);
    std::set<std::pair<int, int>> expected;
    std::vector<std::pair<int, int>> reads;
    SplitMix64 rng(7);
    for (int k = 0; k < 5000; ++k) {
        int i = static_cast<int>(rng.next_below(n));
        int j = static_cast<int>(rng.next_below(n));
        reads.emplace_back(i, j);
        expected.insert({std::min(i, j), std::max(i, j)});
    }
    std::vector<std::thread> workers;
    for (int w = 0; w < 4; ++w)
        workers.emplace_back([&o, &reads, w] {
            for (std::size_t k = static_cast<std::size_t>(w); k < reads.size(); k += 4)
                o.entry(reads[k].first, reads[k].second);
        });
    for (auto& t : workers) t.join();
    CHECK(o.queries() == expected.size());
}

TEST_CASE("generator entries match their closed forms") {
    CHECK(gen_all_ones(4).entry(2, 3) == 1.0);
    CHECK(gen_identity(5).entry(3, 3) == 1.0);
    CHECK(gen_identity(5).entry(3, 4) == 0.0);

    EntryOracle blocks = gen_signed_blocks(3, {{3, {2}}});
    CHECK(blocks.entry(0, 2) == -1.0);
    CHECK(blocks.entry(0, 1) == 1.0);

    CHECK_THROWS_AS(gen_signed_blocks(3, {{4, {}}}), BadSizes);
    CHECK_THROWS_AS(gen_signed_blocks(4, {{2, {3}}}), BadSizes);
}

TEST_CASE("planted negative block eigenvalue") {
    PlantedNegative p = gen_planted_negative(100, 0.1);
    REQUIRE(p.planted);
    CHECK(p.block_size == 20);
    DenseMatrix a = p.oracle.materialize();
    // I_k - J_k contributes 1 - k; dense oracle cross-check
    double lmin = min_eigenvalue(a);
    CHECK(lmin == Catch::Approx(1.0 - 20.0).margin(1e-9));
    CHECK(lmin <= -0.1 * 100);

    PlantedNegative tiny = gen_planted_negative(8, 0.05); // eps*n < 1
    CHECK_FALSE(tiny.planted);
    CHECK(tiny.oracle.materialize() == DenseMatrix::identity(8));
}

TEST_CASE("random PSD generator invariants") {
    EntryOracle o = gen_random_psd_bounded(64, 42);
    DenseMatrix a = o.materialize();
    REQUIRE(a.is_symmetric());
    CHECK(a.max_abs() <= 1.0);
    for (int i = 0; i < 64; ++i) CHECK(a(i, i) == 1.0);
    CHECK(min_eigenvalue(a) >= -1e-8);
}

TEST_CASE("hermitian dilation") {
    SECTION("1x1") {
        DenseMatrix m(1, 1);
        m(0, 0) = 0.5;
        EntryOracle b = hermitian_dilation(from_dense(m, false, true));
        CHECK(b.n() == 2);
        CHECK(b.entry(0, 1) == 0.5);
        CHECK(b.entry(1, 0) == 0.5);
        CHECK(b.entry(0, 0) == 0.0);
        CHECK(spectral_norm(b.materialize()) == Catch::Approx(0.5).margin(1e-12));
    }
    SECTION("zero matrix dilates to zero") {
        EntryOracle b = hermitian_dilation(from_dense(DenseMatrix(3, 3), false, true));
        CHECK(b.materialize().max_abs() == 0.0);
    }
    SECTION("singular values duplicate, nuclear norm doubles (n <= 8)") {
        for (int n = 1; n <= 8; ++n) {
            DenseMatrix m(n, n);
            SplitMix64 rng(100 + static_cast<std::uint64_t>(n));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) m(i, j) = rng.next_pm1();
            std::vector<double> sa = singular_values(m);
            DenseMatrix b = hermitian_dilation(from_dense(m, false, true)).materialize();
            std::vector<double> sb = sym_eigen(b).singular_values();
            REQUIRE(sb.size() == static_cast<std::size_t>(2 * n));
            double nuc_a = 0.0, nuc_b = 0.0;
            for (int i = 0; i < n; ++i) {
                CHECK(sb[static_cast<std::size_t>(2 * i)] ==
                      Catch::Approx(sa[static_cast<std::size_t>(i)]).margin(1e-9));
                CHECK(sb[static_cast<std::size_t>(2 * i + 1)] ==
                      Catch::Approx(sa[static_cast<std::size_t>(i)]).margin(1e-9));
                nuc_a += sa[static_cast<std::size_t>(i)];
            }
            for (double s : sb) nuc_b += s;
            CHECK(nuc_b == Catch::Approx(2.0 * nuc_a).margin(1e-8));
        }
    }
}

TEST_CASE("matrix market round trips") {
    std::string dir = "mm_test_tmp";
    std::string f1 = dir + "_a.mtx", f2 = dir + "_b.mtx";

    SECTION("dense array identity") {
        write_matrix_market(f1, DenseMatrix::identity(3));
        MatrixMarketData d = read_matrix_market(f1);
        CHECK_FALSE(d.symmetric);
        CHECK(d.dense == DenseMatrix::identity(3));
    }

    SECTION("coordinate symmetric round trip is byte-identical") {
        SplitMix64 rng(9);
        DenseMatrix m(100, 100);
        for (int i = 0; i < 100; ++i)
            for (int j = i; j < 100; ++j) {
                double v = rng.next_pm1();
                m(i, j) = v;
                m(j, i) = v;
            }
        write_matrix_market_sym(f1, m);
        MatrixMarketData d = read_matrix_market(f1);
        REQUIRE(d.symmetric);
        CHECK(d.dense == m); // exact, 17 significant digits
        write_matrix_market_sym(f2, d.dense);
        std::ifstream a(f1), b(f2);
        std::stringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        CHECK(sa.str() == sb.str());
    }

    SECTION("duplicate coordinate entry rejected") {
        std::ofstream out(f1);
        out << "%%MatrixMarket matrix coordinate real symmetric\n";
        out << "3 3 2\n2 1 1.0\n2 1 2.0\n";
        out.close();
        CHECK_THROWS_AS(read_matrix_market(f1), ParseError);
    }

    SECTION("missing file is an IoError") {
        CHECK_THROWS_AS(read_matrix_market("definitely_not_here.mtx"), IoError);
    }

    std::remove(f1.c_str());
    std::remove(f2.c_str());
}
