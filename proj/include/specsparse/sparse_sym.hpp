#pragma once

#include <algorithm>
#include <cmath>
#include <tuple>
#include <vector>

#include "dense_matrix.hpp"
#include "errors.hpp"

namespace specsparse {

/// Symmetric sparse matrix stored as the upper triangle: entries (i, j, v)
/// with i <= j, sorted lexicographically, no duplicates, values nonzero.
/// The mirror entry for j > i is implicit.
class SparseSymMatrix {
public:
    struct Entry {
        int i, j;
        double value;
    };

    SparseSymMatrix() : n_(0) {}
    explicit SparseSymMatrix(int n) : n_(n) {}

    /// Entries must be pushed in sorted (i, j) order with i <= j.
    void push(int i, int j, double value) {
        if (i < 0 || j < i || j >= n_)
            throw DimensionMismatch("SparseSymMatrix: entry out of bounds or not upper-triangular");
        if (!entries_.empty()) {
            const Entry& last = entries_.back();
            if (std::tie(last.i, last.j) >= std::tie(i, j))
                throw DimensionMismatch("SparseSymMatrix: entries out of order or duplicated");
        }
        if (!std::isfinite(value))
            throw EntryOutOfRange("SparseSymMatrix: non-finite value");
        if (value != 0.0) entries_.push_back({i, j, value});
    }

    int n() const { return n_; }
    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t nnz_stored() const { return entries_.size(); }

    /// Count of nonzeros in the full (mirrored) matrix.
    std::size_t nnz_full() const {
        std::size_t c = 0;
        for (const Entry& e : entries_) c += (e.i == e.j) ? 1 : 2;
        return c;
    }

    /// y = A x, symmetric expansion of the stored triangle.
    void apply(const double* x, double* y) const {
        std::fill(y, y + n_, 0.0);
        for (const Entry& e : entries_) {
            y[e.i] += e.value * x[e.j];
            if (e.i != e.j) y[e.j] += e.value * x[e.i];
        }
    }

    std::vector<double> apply(const std::vector<double>& x) const {
        if (static_cast<int>(x.size()) != n_)
            throw DimensionMismatch("SparseSymMatrix::apply: size disagreement");
        std::vector<double> y(static_cast<std::size_t>(n_));
        apply(x.data(), y.data());
        return y;
    }

    DenseMatrix to_dense() const {
        DenseMatrix m(n_, n_);
        for (const Entry& e : entries_) {
            m(e.i, e.j) = e.value;
            m(e.j, e.i) = e.value;
        }
        return m;
    }

    bool operator==(const SparseSymMatrix& o) const {
        if (n_ != o.n_ || entries_.size() != o.entries_.size()) return false;
        for (std::size_t k = 0; k < entries_.size(); ++k) {
            const Entry& a = entries_[k];
            const Entry& b = o.entries_[k];
            if (a.i != b.i || a.j != b.j || a.value != b.value) return false;
        }
        return true;
    }

private:
    int n_;
    std::vector<Entry> entries_;
};

} // namespace specsparse
