#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <thread>
#include <vector>

#include "errors.hpp"

namespace specsparse {

// Deterministic parallelism: every kernel below accumulates each output
// element in a fixed order, so results are bitwise identical for any thread
// count. Threads only partition independent output rows.
inline int& num_threads_ref() {
    static int t = 1;
    return t;
}

inline void set_num_threads(int t) { num_threads_ref() = t < 1 ? 1 : t; }
inline int num_threads() { return num_threads_ref(); }

/// Runs fn(begin, end) over a partition of [0, count) across worker threads.
/// Partitioning depends only on count, never on the thread count seen by the
/// result (each index is processed exactly once, independently).
template <typename Fn>
inline void parallel_for(std::size_t count, Fn&& fn) {
    int t = num_threads();
    if (t <= 1 || count < 64) {
        fn(std::size_t{0}, count);
        return;
    }
    std::size_t chunk = (count + t - 1) / t;
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(t));
    for (int w = 0; w < t; ++w) {
        std::size_t b = std::min(count, static_cast<std::size_t>(w) * chunk);
        std::size_t e = std::min(count, b + chunk);
        if (b >= e) break;
        workers.emplace_back([&fn, b, e] { fn(b, e); });
    }
    for (auto& th : workers) th.join();
}

/// Row-major dense matrix of doubles. Plain storage plus the handful of
/// kernels the solvers need; no external BLAS.
class DenseMatrix {
public:
    DenseMatrix() : rows_(0), cols_(0) {}
    DenseMatrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols),
          data_(static_cast<std::size_t>(rows) * cols, fill) {}

    static DenseMatrix identity(int n) {
        DenseMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    double* row(int i) { return data_.data() + static_cast<std::size_t>(i) * cols_; }
    const double* row(int i) const { return data_.data() + static_cast<std::size_t>(i) * cols_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    bool operator==(const DenseMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    DenseMatrix transposed() const {
        DenseMatrix t(cols_, rows_);
        const int bs = 64;
        for (int i0 = 0; i0 < rows_; i0 += bs)
            for (int j0 = 0; j0 < cols_; j0 += bs)
                for (int i = i0; i < std::min(i0 + bs, rows_); ++i)
                    for (int j = j0; j < std::min(j0 + bs, cols_); ++j)
                        t(j, i) = (*this)(i, j);
        return t;
    }

    bool is_symmetric(double tol = 0.0) const {
        if (rows_ != cols_) return false;
        for (int i = 0; i < rows_; ++i)
            for (int j = i + 1; j < cols_; ++j)
                if (std::fabs((*this)(i, j) - (*this)(j, i)) > tol) return false;
        return true;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (double x : data_) s += x * x;
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (double x : data_) m = std::max(m, std::fabs(x));
        return m;
    }

    void scale(double a) {
        for (double& x : data_) x *= a;
    }

private:
    int rows_, cols_;
    std::vector<double> data_;
};

/// C = A * B. ikj loop order: each C(i,j) accumulates over k ascending, so
/// the summation order is fixed regardless of blocking or thread count.
inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows())
        throw DimensionMismatch("matmul: inner dimensions disagree");
    const int m = a.rows(), k = a.cols(), n = b.cols();
    DenseMatrix c(m, n);
    parallel_for(static_cast<std::size_t>(m), [&](std::size_t i0, std::size_t i1) {
        for (std::size_t i = i0; i < i1; ++i) {
            double* ci = c.row(static_cast<int>(i));
            const double* ai = a.row(static_cast<int>(i));
            for (int kk = 0; kk < k; ++kk) {
                const double aik = ai[kk];
                if (aik == 0.0) continue;
                const double* bk = b.row(kk);
                for (int j = 0; j < n; ++j) ci[j] += aik * bk[j];
            }
        }
    });
    return c;
}

/// C = A * B^T.
inline DenseMatrix matmul_abt(const DenseMatrix& a, const DenseMatrix& b) {
    return matmul(a, b.transposed());
}

/// C = A^T * B.
inline DenseMatrix matmul_atb(const DenseMatrix& a, const DenseMatrix& b) {
    return matmul(a.transposed(), b);
}

inline void matvec(const DenseMatrix& a, const double* x, double* y) {
    const int m = a.rows(), n = a.cols();
    for (int i = 0; i < m; ++i) {
        const double* ai = a.row(i);
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += ai[j] * x[j];
        y[i] = s;
    }
}

inline std::vector<double> matvec(const DenseMatrix& a, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != a.cols())
        throw DimensionMismatch("matvec: size disagreement");
    std::vector<double> y(static_cast<std::size_t>(a.rows()));
    matvec(a, x.data(), y.data());
    return y;
}

inline double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm2(const std::vector<double>& x) { return std::sqrt(dot(x, x)); }

} // namespace specsparse
