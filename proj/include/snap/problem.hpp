#pragma once

#include <snap/types.hpp>

#include <Eigen/Dense>

namespace snap {

/**
 * An optimization instance: design X (n x p), response y, ridge weight
 * alpha >= 0, and the cached correlation X'y. Immutable after construction;
 * copies share the design, so one instance can back many concurrent solves.
 */
template <class Scalar>
class ProblemData
{
public:
    using value_t = Scalar;
    using vec_t = Vec<Scalar>;
    using mat_t = Mat<Scalar>;

    ProblemData(mat_t X, vec_t y, Scalar alpha = Scalar(0), bool normalized = false)
        : X_(std::make_shared<const mat_t>(std::move(X))),
          y_(std::make_shared<const vec_t>(std::move(y))),
          alpha_(alpha),
          normalized_(normalized)
    {
        const mat_t& Xr = *X_;
        if (Xr.rows() < 1 || Xr.cols() < 1) {
            throw Error(ErrorKind::DimensionMismatch, "design must have at least one row and one column");
        }
        if (y_->size() != Xr.rows()) {
            throw Error(ErrorKind::DimensionMismatch,
                        "response length " + std::to_string(y_->size()) + " != rows " +
                            std::to_string(Xr.rows()));
        }
        if (!Xr.allFinite()) throw Error(ErrorKind::InvalidArgument, "design has non-finite entries");
        if (!y_->allFinite()) throw Error(ErrorKind::InvalidArgument, "response has non-finite entries");
        if (!(alpha >= Scalar(0)) || !std::isfinite(static_cast<double>(alpha))) {
            throw Error(ErrorKind::InvalidArgument, "alpha must be finite and >= 0");
        }
        xty_ = std::make_shared<const vec_t>(Xr.transpose() * (*y_));
        vec_t sq(Xr.cols());
        for (Index j = 0; j < Xr.cols(); ++j) sq(j) = Xr.col(j).squaredNorm();
        col_sq_norm_ = std::make_shared<const vec_t>(std::move(sq));
    }

    Index n() const { return X_->rows(); }
    Index p() const { return X_->cols(); }
    const mat_t& X() const { return *X_; }
    const vec_t& y() const { return *y_; }
    const vec_t& xty() const { return *xty_; }
    const vec_t& column_squared_norms() const { return *col_sq_norm_; }
    Scalar alpha() const { return alpha_; }
    bool normalized() const { return normalized_; }

    /// Same data with a different ridge weight; the design is shared.
    ProblemData with_alpha(Scalar alpha) const
    {
        if (!(alpha >= Scalar(0))) throw Error(ErrorKind::InvalidArgument, "alpha must be >= 0");
        ProblemData out = *this;
        out.alpha_ = alpha;
        return out;
    }

private:
    std::shared_ptr<const mat_t> X_;
    std::shared_ptr<const vec_t> y_;
    std::shared_ptr<const vec_t> xty_;
    std::shared_ptr<const vec_t> col_sq_norm_;
    Scalar alpha_;
    bool normalized_;
};

using Problem = ProblemData<double>;

/**
 * Centers y and every column of X, then rescales each column to
 * Euclidean norm sqrt(n). Columns that are constant (norm after centering
 * below 1e-12 times the column scale) are rejected.
 */
template <class Derived, class DerivedY>
ProblemData<typename Derived::Scalar> normalize(const Eigen::MatrixBase<Derived>& X,
                                                const Eigen::MatrixBase<DerivedY>& y,
                                                typename Derived::Scalar alpha = 0)
{
    using Scalar = typename Derived::Scalar;
    const Index n = X.rows();
    if (y.size() != n) {
        throw Error(ErrorKind::DimensionMismatch,
                    "response length " + std::to_string(y.size()) + " != rows " + std::to_string(n));
    }
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "normalization needs n >= 2");

    Mat<Scalar> Xc = X;
    const Scalar root_n = std::sqrt(Scalar(n));
    for (Index j = 0; j < Xc.cols(); ++j) {
        auto col = Xc.col(j);
        const Scalar scale = col.cwiseAbs().maxCoeff();
        col.array() -= col.mean();
        const Scalar norm = col.norm();
        if (!(norm > Scalar(1e-12) * std::max(scale, Scalar(1e-300)))) {
            throw Error(ErrorKind::ZeroVarianceColumn, "column " + std::to_string(j) + " is constant", j);
        }
        col *= root_n / norm;
    }
    Vec<Scalar> yc = y;
    yc.array() -= yc.mean();
    return ProblemData<Scalar>(std::move(Xc), std::move(yc), alpha, true);
}

/// X * beta, touching only the columns where beta is nonzero.
template <class Scalar, class Derived>
Vec<Scalar> design_times(const ProblemData<Scalar>& prob, const Eigen::MatrixBase<Derived>& beta)
{
    Vec<Scalar> out = Vec<Scalar>::Zero(prob.n());
    for (Index j = 0; j < beta.size(); ++j) {
        if (beta(j) != Scalar(0)) out.noalias() += beta(j) * prob.X().col(j);
    }
    return out;
}

/// y - X * beta.
template <class Scalar, class Derived>
Vec<Scalar> residual(const ProblemData<Scalar>& prob, const Eigen::MatrixBase<Derived>& beta)
{
    return prob.y() - design_times(prob, beta);
}

/**
 * Elastic-net objective (1/2n)||X beta - y||^2 + lambda ||beta||_1
 * + (alpha/2n)||beta||^2. With alpha = 0 this is the LASSO objective.
 */
template <class Scalar, class Derived>
Scalar objective(const ProblemData<Scalar>& prob, const Eigen::MatrixBase<Derived>& beta, Scalar lambda)
{
    if (beta.size() != prob.p()) throw Error(ErrorKind::DimensionMismatch, "beta length != p");
    const Scalar n = Scalar(prob.n());
    return residual(prob, beta).squaredNorm() / (2 * n) + lambda * beta.template lpNorm<1>() +
           prob.alpha() / (2 * n) * beta.squaredNorm();
}

}  // namespace snap
