#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "dense_matrix.hpp"
#include "entry_oracle.hpp"
#include "errors.hpp"
#include "expander.hpp"
#include "sparse_sym.hpp"

namespace specsparse {

namespace uf {

/// Union-find with union by size and path compression. Merges applied over a
/// deterministically ordered edge list give reproducible components.
class UnionFind {
public:
    explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)), size_(static_cast<std::size_t>(n), 1) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    int find(int x) {
        int root = x;
        while (parent_[static_cast<std::size_t>(root)] != root) root = parent_[static_cast<std::size_t>(root)];
        while (parent_[static_cast<std::size_t>(x)] != root) {
            int next = parent_[static_cast<std::size_t>(x)];
            parent_[static_cast<std::size_t>(x)] = root;
            x = next;
        }
        return root;
    }

    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[static_cast<std::size_t>(a)] < size_[static_cast<std::size_t>(b)]) std::swap(a, b);
        parent_[static_cast<std::size_t>(b)] = a;
        size_[static_cast<std::size_t>(a)] += size_[static_cast<std::size_t>(b)];
    }

private:
    std::vector<int> parent_;
    std::vector<int> size_;
};

} // namespace uf

/// Signed rank-1 block structure of a PSD matrix with entries in {-1, 0, 1}:
/// rows group into disjoint supports S_i split into a positive and a negative
/// side, and A is the sum of the corresponding signed outer products.
struct BlockDecomposition {
    struct Block {
        std::vector<int> support;  // sorted
        std::vector<int> positive; // sorted, first member's side
        std::vector<int> negative; // sorted
    };
    std::vector<Block> blocks; // sorted by size descending, then min vertex

    std::vector<int> sizes() const {
        std::vector<int> s;
        s.reserve(blocks.size());
        for (const auto& b : blocks) s.push_back(static_cast<int>(b.support.size()));
        return s;
    }
};

/// Recovers the block structure of a dense {-1,0,1} PSD matrix and verifies
/// it: components of the nonzero pattern over unit-diagonal indices, sides
/// assigned by sign propagation, then every entry checked against the implied
/// value. Throws NotBinaryPsd when the input cannot be a PSD matrix over that
/// alphabet.
inline BlockDecomposition block_structure(const DenseMatrix& a) {
    const int n = a.rows();
    if (n != a.cols()) throw NonSquare("block_structure: matrix is not square");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = a(i, j);
            if (v != 0.0 && v != 1.0 && v != -1.0)
                throw NotBinaryPsd("block_structure: entry outside {-1,0,1}");
            if (v != a(j, i))
                throw NotBinaryPsd("block_structure: matrix is not symmetric");
        }
    for (int i = 0; i < n; ++i) {
        if (a(i, i) == -1.0)
            throw NotBinaryPsd("block_structure: negative diagonal entry");
        if (a(i, i) == 0.0) {
            for (int j = 0; j < n; ++j)
                if (a(i, j) != 0.0)
                    throw NotBinaryPsd("block_structure: zero diagonal with nonzero row");
        }
    }

    uf::UnionFind components(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (a(i, j) != 0.0) components.unite(i, j);

    std::map<int, std::vector<int>> by_root;
    for (int i = 0; i < n; ++i)
        if (a(i, i) == 1.0) by_root[components.find(i)].push_back(i);

    BlockDecomposition dec;
    for (auto& [root, members] : by_root) {
        (void)root;
        std::sort(members.begin(), members.end());
        // sign of each member relative to the minimum vertex, via its row
        int rep = members.front();
        BlockDecomposition::Block blk;
        blk.support = members;
        for (int v : members) {
            double s = (v == rep) ? 1.0 : a(rep, v);
            if (s == 0.0)
                throw NotBinaryPsd("block_structure: connected members with zero entry");
            (s > 0 ? blk.positive : blk.negative).push_back(v);
        }
        dec.blocks.push_back(std::move(blk));
    }

    // consistency: every entry must equal sign_i * sign_j within a block and 0 across
    std::vector<double> sign(static_cast<std::size_t>(n), 0.0);
    std::vector<int> block_of(static_cast<std::size_t>(n), -1);
    for (std::size_t b = 0; b < dec.blocks.size(); ++b) {
        for (int v : dec.blocks[b].positive) { sign[static_cast<std::size_t>(v)] = 1.0; block_of[static_cast<std::size_t>(v)] = static_cast<int>(b); }
        for (int v : dec.blocks[b].negative) { sign[static_cast<std::size_t>(v)] = -1.0; block_of[static_cast<std::size_t>(v)] = static_cast<int>(b); }
    }
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double expect = (block_of[static_cast<std::size_t>(i)] >= 0 &&
                             block_of[static_cast<std::size_t>(i)] == block_of[static_cast<std::size_t>(j)])
                                ? sign[static_cast<std::size_t>(i)] * sign[static_cast<std::size_t>(j)]
                                : 0.0;
            if (a(i, j) != expect)
                throw NotBinaryPsd("block_structure: inconsistent entry (not PSD over {-1,0,1})");
        }

    std::sort(dec.blocks.begin(), dec.blocks.end(), [](const auto& x, const auto& y) {
        if (x.support.size() != y.support.size()) return x.support.size() > y.support.size();
        return x.support.front() < y.support.front();
    });
    return dec;
}

inline DenseMatrix reconstruct(const BlockDecomposition& dec, int n) {
    DenseMatrix a(n, n);
    for (const auto& blk : dec.blocks) {
        std::vector<double> v(static_cast<std::size_t>(n), 0.0);
        for (int i : blk.positive) v[static_cast<std::size_t>(i)] = 1.0;
        for (int i : blk.negative) v[static_cast<std::size_t>(i)] = -1.0;
        for (int i : blk.support)
            for (int j : blk.support)
                a(i, j) += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
    }
    return a;
}

struct RecoveredApprox {
    SparseSymMatrix atilde;
    struct Component {
        std::vector<int> vertices; // sorted
        int representative;        // minimum vertex
    };
    std::vector<Component> components_used;
    std::uint64_t queries = 0;
    std::uint64_t edges_sampled = 0; // |E(G)|
    CirculantExpander graph;
};

namespace binary_detail {

inline double read_alphabet(const EntryOracle& a, int i, int j) {
    double v = a.entry(i, j);
    if (v != 0.0 && v != 1.0 && v != -1.0)
        throw EntryOutOfAlphabet("binary_psd_approx: entry outside {-1,0,1}");
    return v;
}

} // namespace binary_detail

/// Spectral approximation of a PSD {-1,0,1} matrix from expander-sampled
/// entries: read A on the edges of an (eps/6 * n)-expander, keep edges where
/// |A_ij| = 1, and for every connected component larger than eps*n/2 read the
/// column of its minimum vertex and add that signed outer product. Guarantee
/// under the promise: ||A - Atilde||_2 <= eps * n using at most
/// |E(G)| + (2/eps) * n distinct reads.
///
/// Vertices with a zero diagonal have all-zero rows, so they are never
/// incident to a kept edge and never join a component; no diagonal reads are
/// spent on excluding them.
inline RecoveredApprox binary_psd_approx(const EntryOracle& a, double eps,
                                         std::uint64_t seed,
                                         ExpanderMode mode = ExpanderMode::Seeded) {
    if (!(eps > 0.0 && eps < 1.0))
        throw BadSizes("binary_psd_approx: eps must lie in (0,1)");
    const int n = a.n();
    std::uint64_t q0 = a.queries();

    RecoveredApprox out;
    auto [g, cert] = build_epsn_expander(n, eps / 6.0, mode, seed);
    (void)cert;
    out.graph = std::move(g);
    auto edge_list = out.graph.edges();
    out.edges_sampled = edge_list.size();

    uf::UnionFind components(n);
    std::vector<char> touched(static_cast<std::size_t>(n), 0);
    for (auto [i, j] : edge_list) {
        if (binary_detail::read_alphabet(a, i, j) != 0.0) {
            components.unite(i, j);
            touched[static_cast<std::size_t>(i)] = 1;
            touched[static_cast<std::size_t>(j)] = 1;
        }
    }

    std::map<int, std::vector<int>> by_root; // keyed by root; emitted in min-vertex order below
    for (int i = 0; i < n; ++i)
        if (touched[static_cast<std::size_t>(i)]) by_root[components.find(i)].push_back(i);

    // when eps*n/2 < 1 even singletons qualify; only then spend n diagonal
    // reads to find the isolated nonzero vertices (the query bound 2n/eps is
    // far above n^2 in that regime)
    if (eps * n / 2.0 < 1.0) {
        for (int i = 0; i < n; ++i)
            if (!touched[static_cast<std::size_t>(i)] &&
                binary_detail::read_alphabet(a, i, i) != 0.0)
                by_root[i].push_back(i);
    }

    std::vector<RecoveredApprox::Component> big;
    for (auto& [root, members] : by_root) {
        (void)root;
        if (static_cast<double>(members.size()) > eps * n / 2.0) {
            std::sort(members.begin(), members.end());
            big.push_back({members, members.front()});
        }
    }
    std::sort(big.begin(), big.end(),
              [](const auto& x, const auto& y) { return x.representative < y.representative; });

    std::map<std::pair<int, int>, double> acc;
    for (const auto& comp : big) {
        int j = comp.representative;
        std::vector<int> support;
        std::vector<double> val;
        for (int i = 0; i < n; ++i) {
            double v = binary_detail::read_alphabet(a, i, j);
            if (v != 0.0) {
                support.push_back(i);
                val.push_back(v);
            }
        }
        for (std::size_t p = 0; p < support.size(); ++p)
            for (std::size_t q = p; q < support.size(); ++q)
                acc[{support[p], support[q]}] += val[p] * val[q];
    }

    out.atilde = SparseSymMatrix(n);
    for (const auto& [pos, v] : acc)
        if (v != 0.0) out.atilde.push(pos.first, pos.second, v);
    out.components_used = std::move(big);
    out.queries = a.queries() - q0;
    return out;
}

/// Per-block two-sided component size bound report: for each true block S_i
/// of A with size lambda_i, the largest connected component C_i of the kept
/// subgraph restricted to S_i satisfies lambda_i - eps/2 * n < |C_i| <=
/// lambda_i (vacuous for lambda_i <= eps/2 * n).
struct ComponentBoundReport {
    struct Row {
        int block_size = 0;
        int largest_component = 0;
        bool vacuous = false;
        bool ok = false;
    };
    std::vector<Row> rows;
    bool all_ok = true;
};

inline ComponentBoundReport component_size_bound_check(const DenseMatrix& a,
                                                       const CirculantExpander& g,
                                                       double eps) {
    BlockDecomposition dec = block_structure(a);
    const int n = a.rows();
    std::vector<int> block_of(static_cast<std::size_t>(n), -1);
    for (std::size_t b = 0; b < dec.blocks.size(); ++b)
        for (int v : dec.blocks[b].support) block_of[static_cast<std::size_t>(v)] = static_cast<int>(b);

    std::vector<uf::UnionFind> per_block;
    per_block.reserve(dec.blocks.size());
    for (std::size_t b = 0; b < dec.blocks.size(); ++b) per_block.emplace_back(n);
    for (auto [i, j] : g.edges()) {
        int bi = block_of[static_cast<std::size_t>(i)];
        if (bi >= 0 && bi == block_of[static_cast<std::size_t>(j)] && a(i, j) != 0.0)
            per_block[static_cast<std::size_t>(bi)].unite(i, j);
    }

    ComponentBoundReport rep;
    for (std::size_t b = 0; b < dec.blocks.size(); ++b) {
        const auto& blk = dec.blocks[b];
        std::map<int, int> comp_size;
        int largest = 0;
        for (int v : blk.support)
            largest = std::max(largest, ++comp_size[per_block[b].find(v)]);
        ComponentBoundReport::Row row;
        row.block_size = static_cast<int>(blk.support.size());
        row.largest_component = largest;
        row.vacuous = row.block_size <= eps / 2.0 * n;
        row.ok = row.vacuous ||
                 (largest > row.block_size - eps / 2.0 * n && largest <= row.block_size);
        rep.rows.push_back(row);
        rep.all_ok = rep.all_ok && row.ok;
    }
    return rep;
}

} // namespace specsparse
