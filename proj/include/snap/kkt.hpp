#pragma once

#include <snap/problem.hpp>

#include <Eigen/LU>

namespace snap {

/// Soft threshold sign(x) max(|x| - lambda, 0). Exact zero on |x| <= lambda.
template <class Scalar>
inline Scalar soft_threshold(Scalar x, Scalar lambda)
{
    if (x > lambda) return x - lambda;
    if (x < -lambda) return x + lambda;
    return Scalar(0);
}

/// Componentwise soft threshold; returns a lazy Eigen expression.
template <class Derived>
auto soft_threshold(const Eigen::MatrixBase<Derived>& x, typename Derived::Scalar lambda)
{
    using Scalar = typename Derived::Scalar;
    return x.unaryExpr([lambda](Scalar v) { return soft_threshold(v, lambda); });
}

/**
 * Dual correlations d = (X'y - (X'X + alpha I) beta) / n, computed as
 * (X'(y - X beta) - alpha beta) / n. The Gram matrix is never formed.
 */
template <class Scalar, class Derived>
Vec<Scalar> refresh_dual(const ProblemData<Scalar>& prob, const Eigen::MatrixBase<Derived>& beta)
{
    if (beta.size() != prob.p()) throw Error(ErrorKind::DimensionMismatch, "beta length != p");
    const Vec<Scalar> r = residual(prob, beta);
    Vec<Scalar> d = prob.X().transpose() * r;
    d -= prob.alpha() * beta;
    d /= Scalar(prob.n());
    return d;
}

/// Active set { j : |beta_j + d_j| > lambda }; ties go to the inactive set.
template <class Scalar>
ActivePartition partition(const PrimalDualState<Scalar>& state, Scalar lambda)
{
    ActivePartition part;
    for (Index j = 0; j < state.size(); ++j) {
        if (std::abs(state.beta(j) + state.dual(j)) > lambda)
            part.active.push_back(j);
        else
            part.inactive.push_back(j);
    }
    return part;
}

/// sign(beta_j + d_j) over an index set.
template <class Scalar>
std::vector<int> active_signs(const PrimalDualState<Scalar>& state, const IndexSet& idx)
{
    std::vector<int> s;
    s.reserve(idx.size());
    for (Index j : idx) s.push_back(static_cast<int>(sign(state.beta(j) + state.dual(j))));
    return s;
}

/**
 * KKT residual F(z) = (beta - T(beta + d), (G beta + n d - X'y) / n).
 * The second block is divided by n so both blocks are on the scale of
 * lambda.
 */
template <class Scalar>
struct KktResidual
{
    Vec<Scalar> f1;
    Vec<Scalar> f2;
    Scalar norm_inf = 0;
};

template <class Scalar>
KktResidual<Scalar> kkt_residual(const ProblemData<Scalar>& prob, const PrimalDualState<Scalar>& state,
                                 Scalar lambda)
{
    KktResidual<Scalar> res;
    res.f1 = state.beta - soft_threshold(state.beta + state.dual, lambda);
    // (G beta + n d - X'y)/n = d - refresh_dual(beta)
    res.f2 = state.dual - refresh_dual(prob, state.beta);
    res.norm_inf = std::max(res.f1.template lpNorm<Eigen::Infinity>(),
                            res.f2.template lpNorm<Eigen::Infinity>());
    return res;
}

/**
 * Dense Newton matrix in the reordered coordinates (d_A, beta_B, beta_A, d_B):
 *
 *     [ -I_AA   0        0        0     ]
 *     [  0      I_BB     0        0     ]
 *     [  nI_AA  X_A'X_B  G_AA     0     ]
 *     [  0      G_BB     X_B'X_A  nI_BB ]
 *
 * Verification scale only (2p <= 2000).
 */
template <class Scalar>
struct NewtonMatrix
{
    Mat<Scalar> H;
    ActivePartition ordering;
};

inline constexpr Index kMaxDenseNewtonDim = 2000;

template <class Scalar>
NewtonMatrix<Scalar> assemble_newton_matrix(const ProblemData<Scalar>& prob, const ActivePartition& part)
{
    const Index p = prob.p();
    if (2 * p > kMaxDenseNewtonDim) {
        throw Error(ErrorKind::OutOfMemory, "dense Newton matrix limited to 2p <= 2000");
    }
    const Index a = static_cast<Index>(part.active.size());
    const Index b = static_cast<Index>(part.inactive.size());
    if (a + b != p) throw Error(ErrorKind::DimensionMismatch, "partition does not cover 0..p-1");
    const Scalar n = Scalar(prob.n());

    Mat<Scalar> XA(prob.n(), a), XB(prob.n(), b);
    for (Index i = 0; i < a; ++i) XA.col(i) = prob.X().col(part.active[i]);
    for (Index i = 0; i < b; ++i) XB.col(i) = prob.X().col(part.inactive[i]);

    // block offsets: d_A | beta_B | beta_A | d_B
    const Index o1 = 0, o2 = a, o3 = a + b, o4 = 2 * a + b;
    Mat<Scalar> H = Mat<Scalar>::Zero(2 * p, 2 * p);
    H.block(o1, o1, a, a) = -Mat<Scalar>::Identity(a, a);
    H.block(o2, o2, b, b) = Mat<Scalar>::Identity(b, b);
    H.block(o3, o1, a, a) = n * Mat<Scalar>::Identity(a, a);
    H.block(o3, o2, a, b) = XA.transpose() * XB;
    H.block(o3, o3, a, a) = XA.transpose() * XA + prob.alpha() * Mat<Scalar>::Identity(a, a);
    H.block(o4, o2, b, b) = XB.transpose() * XB + prob.alpha() * Mat<Scalar>::Identity(b, b);
    H.block(o4, o3, b, a) = XB.transpose() * XA;
    H.block(o4, o4, b, b) = n * Mat<Scalar>::Identity(b, b);
    return {std::move(H), part};
}

/**
 * One semismooth Newton step z + D with H D = -F(z), solved densely.
 * Exists to check the active-set update against the textbook Newton
 * iteration; throws SingularSystem if the factorization fails.
 */
template <class Scalar>
PrimalDualState<Scalar> newton_step_dense(const ProblemData<Scalar>& prob, const PrimalDualState<Scalar>& state,
                                          const ActivePartition& part, Scalar lambda)
{
    if (!(lambda > Scalar(0))) throw Error(ErrorKind::InvalidArgument, "lambda must be > 0");
    const NewtonMatrix<Scalar> nm = assemble_newton_matrix(prob, part);
    const Index p = prob.p();
    const Index a = static_cast<Index>(part.active.size());
    const Index b = static_cast<Index>(part.inactive.size());
    const Scalar n = Scalar(prob.n());

    const Vec<Scalar> f1 = state.beta - soft_threshold(state.beta + state.dual, lambda);
    // unscaled F2 = G beta + n d - X'y
    const Vec<Scalar> f2 = n * (state.dual - refresh_dual(prob, state.beta));

    Vec<Scalar> F(2 * p), z(2 * p);
    for (Index i = 0; i < a; ++i) {
        const Index j = part.active[i];
        F(i) = f1(j);
        F(a + b + i) = f2(j);
        z(i) = state.dual(j);
        z(a + b + i) = state.beta(j);
    }
    for (Index i = 0; i < b; ++i) {
        const Index j = part.inactive[i];
        F(a + i) = f1(j);
        F(2 * a + b + i) = f2(j);
        z(a + i) = state.beta(j);
        z(2 * a + b + i) = state.dual(j);
    }

    Eigen::FullPivLU<Mat<Scalar>> lu(nm.H);
    if (!lu.isInvertible()) throw Error(ErrorKind::SingularSystem, "Newton matrix is singular");
    const Vec<Scalar> D = lu.solve(-F);
    if (!D.allFinite()) throw Error(ErrorKind::SingularSystem, "Newton step is not finite");
    z += D;

    PrimalDualState<Scalar> out{Vec<Scalar>(p), Vec<Scalar>(p)};
    for (Index i = 0; i < a; ++i) {
        const Index j = part.active[i];
        out.dual(j) = z(i);
        out.beta(j) = z(a + b + i);
    }
    for (Index i = 0; i < b; ++i) {
        const Index j = part.inactive[i];
        out.beta(j) = z(a + i);
        out.dual(j) = z(2 * a + b + i);
    }
    return out;
}

}  // namespace snap
