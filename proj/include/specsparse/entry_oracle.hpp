#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "dense_matrix.hpp"
#include "errors.hpp"
#include "prng.hpp"

namespace specsparse {

/// Matrix visible only through counted per-entry reads.
///
/// The counter reports the number of *distinct* positions read since
/// construction. For symmetric oracles, a read of (i, j) determines (j, i),
/// so unordered pairs are counted once; `queries_doubled()` gives the figure
/// with off-diagonal reads counted twice for comparison. Counting state is
/// shared between copies of the same oracle and tolerates concurrent reads:
/// the per-position bits and the counter are maintained atomically, so the
/// total is exact once all readers have finished.
class EntryOracle {
public:
    using EntryFn = std::function<double(int, int)>;

    EntryOracle() = default;

    EntryOracle(int n, bool symmetric, bool bounded, EntryFn fn)
        : state_(std::make_shared<State>()) {
        state_->n = n;
        state_->symmetric = symmetric;
        state_->bounded = bounded;
        state_->fn = std::move(fn);
        std::size_t cells = static_cast<std::size_t>(n) * n;
        state_->seen.assign((cells + 63) / 64, 0);
    }

    int n() const { return state_->n; }
    bool symmetric() const { return state_->symmetric; }
    bool bounded() const { return state_->bounded; }

    double entry(int i, int j) const {
        State& s = *state_;
        if (i < 0 || j < 0 || i >= s.n || j >= s.n)
            throw DimensionMismatch("EntryOracle::entry: index out of range");
        int a = i, b = j;
        if (s.symmetric && a > b) std::swap(a, b);
        std::size_t key = static_cast<std::size_t>(a) * s.n + b;
        std::uint64_t mask = std::uint64_t{1} << (key & 63);
        std::atomic_ref<std::uint64_t> word(s.seen[key >> 6]);
        if ((word.fetch_or(mask, std::memory_order_relaxed) & mask) == 0) {
            s.counter.fetch_add(1, std::memory_order_relaxed);
            if (a != b && s.symmetric)
                s.offdiag.fetch_add(1, std::memory_order_relaxed);
        }
        double v = s.fn(a, b);
        if (s.bounded && !(std::fabs(v) <= 1.0))
            throw EntryOutOfRange("EntryOracle: |entry| > 1 at a read position");
        return v;
    }

    /// Distinct positions read (unordered pairs counted once when symmetric).
    std::uint64_t queries() const { return state_->counter.load(); }

    /// Same count with symmetric off-diagonal reads counted as two positions.
    std::uint64_t queries_doubled() const {
        return state_->counter.load() + state_->offdiag.load();
    }

    /// Reads every entry (counted). Used where an algorithm genuinely needs
    /// full access, e.g. the Krylov refinement stage.
    DenseMatrix materialize() const {
        int n = state_->n;
        DenseMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = entry(i, j);
        return m;
    }

private:
    struct State {
        int n = 0;
        bool symmetric = false;
        bool bounded = false;
        EntryFn fn;
        std::atomic<std::uint64_t> counter{0};
        std::atomic<std::uint64_t> offdiag{0};
        mutable std::vector<std::uint64_t> seen;
    };
    std::shared_ptr<State> state_;
};

/// Wraps a dense matrix as an oracle, validating the declared flags.
inline EntryOracle from_dense(const DenseMatrix& m, bool symmetric, bool bounded) {
    if (m.rows() != m.cols())
        throw NonSquare("from_dense: matrix is not square");
    if (symmetric && !m.is_symmetric())
        throw AsymmetricInput("from_dense: symmetric flag set on asymmetric matrix");
    if (bounded && m.max_abs() > 1.0)
        throw EntryOutOfRange("from_dense: bounded flag set but |entry| > 1");
    auto holder = std::make_shared<DenseMatrix>(m);
    return EntryOracle(m.rows(), symmetric, bounded,
                       [holder](int i, int j) { return (*holder)(i, j); });
}

inline EntryOracle gen_all_ones(int n) {
    return EntryOracle(n, true, true, [](int, int) { return 1.0; });
}

inline EntryOracle gen_identity(int n) {
    return EntryOracle(n, true, true, [](int i, int j) { return i == j ? 1.0 : 0.0; });
}

/// One signed rank-1 block: `size` consecutive indices, of which the local
/// indices in `negatives` carry sign -1.
struct SignedBlockSpec {
    int size;
    std::vector<int> negatives;
};

/// Block-diagonal matrix of signed all-ones blocks laid out consecutively
/// from index 0; remaining rows/columns are zero. Entry (a, b) within one
/// block is sign(a) * sign(b); everything else is 0.
inline EntryOracle gen_signed_blocks(int n, const std::vector<SignedBlockSpec>& blocks) {
    long long total = 0;
    for (const auto& b : blocks) {
        if (b.size <= 0) throw BadSizes("gen_signed_blocks: block size must be positive");
        for (int neg : b.negatives)
            if (neg < 0 || neg >= b.size)
                throw BadSizes("gen_signed_blocks: negative index outside block");
        total += b.size;
    }
    if (total > n) throw BadSizes("gen_signed_blocks: block sizes sum past n");
    DenseMatrix m(n, n);
    int base = 0;
    for (const auto& b : blocks) {
        std::vector<double> sign(static_cast<std::size_t>(b.size), 1.0);
        for (int neg : b.negatives) sign[static_cast<std::size_t>(neg)] = -1.0;
        for (int a = 0; a < b.size; ++a)
            for (int c = 0; c < b.size; ++c)
                m(base + a, base + c) = sign[a] * sign[c];
        base += b.size;
    }
    return from_dense(m, true, true);
}

/// A = B^T B with unit-norm columns of B drawn from splitmix64(seed), entries
/// uniform in [-1, 1) before normalization. PSD with unit diagonal; all
/// entries bounded by Cauchy-Schwarz. The diagonal is pinned to exactly 1 and
/// off-diagonal values clamped to [-1, 1] to absorb last-bit rounding.
inline EntryOracle gen_random_psd_bounded(int n, std::uint64_t seed) {
    DenseMatrix b(n, n);
    SplitMix64 rng(seed);
    for (int j = 0; j < n; ++j) {
        double nrm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            double v = rng.next_pm1();
            b(i, j) = v;
            nrm2 += v * v;
        }
        double inv = 1.0 / std::sqrt(nrm2);
        for (int i = 0; i < n; ++i) b(i, j) *= inv;
    }
    DenseMatrix a = matmul_atb(b, b);
    for (int i = 0; i < n; ++i) {
        a(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j) {
            double v = std::clamp(a(i, j), -1.0, 1.0);
            a(i, j) = v;
            a(j, i) = v;
        }
    }
    return from_dense(a, true, true);
}

struct PlantedNegative {
    EntryOracle oracle;
    bool planted;   // false when eps*n < 1: no block achieves the margin
    int block_size; // k, the planted principal block dimension
};

/// Identity with the leading k x k principal block replaced by I_k - J_k,
/// k = ceil(2*eps*n). The block contributes eigenvalue 1 - k <= -eps*n.
inline PlantedNegative gen_planted_negative(int n, double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw BadSizes("gen_planted_negative: eps must lie in (0,1)");
    bool planted = eps * n >= 1.0;
    int k = planted ? static_cast<int>(std::ceil(2.0 * eps * n)) : 0;
    if (k > n) k = n;
    DenseMatrix m = DenseMatrix::identity(n);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) m(i, j) = (i == j) ? 0.0 : -1.0;
    return {from_dense(m, true, true), planted, k};
}

/// Symmetric 2n x 2n oracle [[0, A], [A^T, 0]]. Reads of the off-diagonal
/// blocks pass through to A; the zero blocks are answered without touching A.
/// Singular values of the dilation are those of A, each twice, and its
/// nuclear norm doubles.
inline EntryOracle hermitian_dilation(const EntryOracle& a) {
    int n = a.n();
    return EntryOracle(2 * n, true, a.bounded(), [a, n](int i, int j) {
        bool ilo = i < n, jlo = j < n;
        if (ilo == jlo) return 0.0;
        return ilo ? a.entry(i, j - n) : a.entry(j, i - n);
    });
}

/// Seeded permuted signed-block instance: a handful of blocks with sizes
/// around eps*n up to ~3*eps*n covering roughly three quarters of the
/// indices, random sign splits, indices scattered by a seeded permutation,
/// remaining rows zero. Returns the dense matrix so callers can both wrap it
/// as an oracle and keep the ground truth.
inline DenseMatrix gen_signed_block_instance(int n, double eps, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    shuffle(perm, rng.next());

    DenseMatrix m(n, n);
    int used = 0;
    const int budget = 3 * n / 4;
    while (used < budget) {
        int lo = std::max(2, static_cast<int>(eps * n / 2.0));
        int hi = std::max(lo + 1, static_cast<int>(3.0 * eps * n));
        int size = lo + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(hi - lo)));
        size = std::min(size, budget - used);
        if (size < 1) break;
        std::vector<double> sign(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i) sign[static_cast<std::size_t>(i)] = rng.next_unit() < 0.5 ? 1.0 : -1.0;
        for (int a = 0; a < size; ++a)
            for (int b = 0; b < size; ++b) {
                int pa = perm[static_cast<std::size_t>(used + a)];
                int pb = perm[static_cast<std::size_t>(used + b)];
                m(pa, pb) = sign[static_cast<std::size_t>(a)] * sign[static_cast<std::size_t>(b)];
            }
        used += size;
    }
    return m;
}

/// Seeded symmetric matrix with entries uniform in [-1, 1). Test instance
/// generator for the general (not necessarily PSD) case.
inline EntryOracle gen_random_symmetric(int n, std::uint64_t seed) {
    DenseMatrix m(n, n);
    SplitMix64 rng(seed);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double v = rng.next_pm1();
            m(i, j) = v;
            m(j, i) = v;
        }
    return from_dense(m, true, true);
}

} // namespace specsparse
