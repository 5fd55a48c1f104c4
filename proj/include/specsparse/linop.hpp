#pragma once

#include <memory>
#include <vector>

#include "dense_matrix.hpp"
#include "errors.hpp"
#include "sparse_sym.hpp"

namespace specsparse {

/// Square linear map exposing v -> Mv and v -> M^T v, plus dense
/// materialization for the solvers that iterate via matrix products.
class LinOp {
public:
    virtual ~LinOp() = default;
    virtual int dim() const = 0;
    virtual void apply(const double* x, double* y) const = 0;
    virtual void apply_t(const double* x, double* y) const = 0;
    virtual DenseMatrix to_dense() const = 0;

    std::vector<double> apply(const std::vector<double>& x) const {
        check(x);
        std::vector<double> y(x.size());
        apply(x.data(), y.data());
        return y;
    }

    std::vector<double> apply_t(const std::vector<double>& x) const {
        check(x);
        std::vector<double> y(x.size());
        apply_t(x.data(), y.data());
        return y;
    }

private:
    void check(const std::vector<double>& x) const {
        if (static_cast<int>(x.size()) != dim())
            throw DimensionMismatch("LinOp: vector size disagreement");
    }
};

class DenseOp final : public LinOp {
public:
    using LinOp::apply;
    using LinOp::apply_t;
    explicit DenseOp(DenseMatrix m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols()) throw NonSquare("DenseOp: matrix is not square");
        t_ = m_.transposed();
    }

    int dim() const override { return m_.rows(); }
    void apply(const double* x, double* y) const override { matvec(m_, x, y); }
    void apply_t(const double* x, double* y) const override { matvec(t_, x, y); }
    DenseMatrix to_dense() const override { return m_; }

private:
    DenseMatrix m_, t_;
};

class SparseOp final : public LinOp {
public:
    using LinOp::apply;
    using LinOp::apply_t;
    explicit SparseOp(SparseSymMatrix m) : m_(std::move(m)) {}

    int dim() const override { return m_.n(); }
    void apply(const double* x, double* y) const override { m_.apply(x, y); }
    void apply_t(const double* x, double* y) const override { m_.apply(x, y); }
    DenseMatrix to_dense() const override { return m_.to_dense(); }

    const SparseSymMatrix& matrix() const { return m_; }

private:
    SparseSymMatrix m_;
};

/// Deflated operator (I - Z Z^T) M for an orthonormal block Z: applications
/// go through the base and are projected off span(Z) on the way out, so
/// iterates stay orthogonal to the deflated directions by construction.
class DeflatedOp final : public LinOp {
public:
    using LinOp::apply;
    using LinOp::apply_t;
    DeflatedOp(std::shared_ptr<const LinOp> base, DenseMatrix z)
        : base_(std::move(base)), z_(std::move(z)) {
        if (z_.rows() != base_->dim())
            throw DimensionMismatch("DeflatedOp: block height disagreement");
    }

    int dim() const override { return base_->dim(); }

    // y = (I - Z Z^T) M x
    void apply(const double* x, double* y) const override {
        base_->apply(x, y);
        project_out(y);
    }

    // y = M^T (I - Z Z^T) x
    void apply_t(const double* x, double* y) const override {
        std::vector<double> tmp(x, x + dim());
        project_out(tmp.data());
        base_->apply_t(tmp.data(), y);
    }

    DenseMatrix to_dense() const override {
        DenseMatrix d = base_->to_dense();
        DenseMatrix ztd = matmul_atb(z_, d);  // Z^T M
        DenseMatrix corr = matmul(z_, ztd);   // Z Z^T M
        for (int i = 0; i < d.rows(); ++i)
            for (int j = 0; j < d.cols(); ++j) d(i, j) -= corr(i, j);
        return d;
    }

    const DenseMatrix& block() const { return z_; }

private:
    void project_out(double* v) const {
        const int n = dim(), k = z_.cols();
        std::vector<double> coef(static_cast<std::size_t>(k), 0.0);
        for (int i = 0; i < n; ++i) {
            const double* zr = z_.row(i);
            for (int c = 0; c < k; ++c) coef[static_cast<std::size_t>(c)] += zr[c] * v[i];
        }
        for (int i = 0; i < n; ++i) {
            const double* zr = z_.row(i);
            double s = 0.0;
            for (int c = 0; c < k; ++c) s += zr[c] * coef[static_cast<std::size_t>(c)];
            v[i] -= s;
        }
    }

    std::shared_ptr<const LinOp> base_;
    DenseMatrix z_;
};

/// y = x - c * (M x); represents I - c*M without materializing it.
class IdentityMinusScaledOp final : public LinOp {
public:
    using LinOp::apply;
    using LinOp::apply_t;
    IdentityMinusScaledOp(std::shared_ptr<const LinOp> base, double c)
        : base_(std::move(base)), c_(c) {}

    int dim() const override { return base_->dim(); }

    void apply(const double* x, double* y) const override {
        base_->apply(x, y);
        for (int i = 0; i < dim(); ++i) y[i] = x[i] - c_ * y[i];
    }

    void apply_t(const double* x, double* y) const override {
        base_->apply_t(x, y);
        for (int i = 0; i < dim(); ++i) y[i] = x[i] - c_ * y[i];
    }

    DenseMatrix to_dense() const override {
        DenseMatrix d = base_->to_dense();
        d.scale(-c_);
        for (int i = 0; i < d.rows(); ++i) d(i, i) += 1.0;
        return d;
    }

private:
    std::shared_ptr<const LinOp> base_;
    double c_;
};

} // namespace specsparse
