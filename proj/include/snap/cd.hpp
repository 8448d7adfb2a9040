#pragma once

#include <snap/path.hpp>

namespace snap {

template <class Scalar>
struct CdResult
{
    Vec<Scalar> beta;
    Index sweeps = 0;
    bool converged = false;
    std::vector<Scalar> objective_trace;  // after each sweep, when requested
};

/**
 * Cyclic coordinate descent for the elastic-net objective. Coordinate j is
 * set to T_lambda(c_j beta_j + X_j'r/n) / (c_j + alpha/n) with
 * c_j = ||X_j||^2/n (1 on normalized data) and r = y - X beta kept up to
 * date with rank-one updates. Stops when the largest coordinate change in
 * a sweep is at most `tol`; on budget exhaustion returns the last iterate
 * with `converged = false`.
 */
template <class Scalar, class Derived>
CdResult<Scalar> cd_solve(const ProblemData<Scalar>& prob, Scalar lambda, const Eigen::MatrixBase<Derived>& init,
                          Scalar tol, Index max_sweeps, bool trace_objective = false)
{
    if (init.size() != prob.p()) throw Error(ErrorKind::DimensionMismatch, "init length != p");
    if (!(lambda >= Scalar(0))) throw Error(ErrorKind::InvalidArgument, "lambda must be >= 0");
    if (!(tol > Scalar(0))) throw Error(ErrorKind::InvalidArgument, "tol must be > 0");
    if (max_sweeps < 1) throw Error(ErrorKind::InvalidArgument, "max_sweeps must be >= 1");

    const Scalar n = Scalar(prob.n());
    const Scalar ridge = prob.alpha() / n;
    const Vec<Scalar> curv = prob.column_squared_norms() / n;
    const auto& X = prob.X();

    CdResult<Scalar> out;
    out.beta = init;
    Vec<Scalar> r = residual(prob, out.beta);

    for (Index sweep = 1; sweep <= max_sweeps; ++sweep) {
        Scalar max_change = 0;
        for (Index j = 0; j < prob.p(); ++j) {
            const Scalar old = out.beta(j);
            const Scalar z = curv(j) * old + X.col(j).dot(r) / n;
            const Scalar next = soft_threshold(z, lambda) / (curv(j) + ridge);
            const Scalar delta = next - old;
            if (delta != Scalar(0)) {
                r.noalias() -= delta * X.col(j);
                out.beta(j) = next;
                max_change = std::max(max_change, std::abs(delta));
            }
        }
        out.sweeps = sweep;
        if (trace_objective) out.objective_trace.push_back(objective(prob, out.beta, lambda));
        if (max_change <= tol) {
            out.converged = true;
            break;
        }
    }
    return out;
}

/// Support threshold used to read a support off coordinate-descent iterates.
inline constexpr double kCdSupportThreshold = 1e-10;

/**
 * Coordinate-descent path on the same grid and warm-start contract as
 * snap_run. A knot whose support exceeds the sparsity cap ends the path.
 */
template <class Scalar>
PathResult<Scalar> cd_path(const ProblemData<Scalar>& prob, const PathConfig<Scalar>& config)
{
    const auto start = std::chrono::steady_clock::now();
    const Scalar l0 = config.lambda0 ? *config.lambda0 : default_lambda0(prob);
    config.validate(l0);
    const Index cap = config.cap_for(prob.n());
    const Scalar thr = Scalar(kCdSupportThreshold);

    PathResult<Scalar> result;
    result.support_threshold = thr;
    Vec<Scalar> beta = Vec<Scalar>::Zero(prob.p());
    const std::vector<Scalar> grid = config.grid(l0);
    for (Index t = 0; t <= config.num_knots; ++t) {
        const Scalar lam = grid[static_cast<std::size_t>(t)];
        CdResult<Scalar> cd = cd_solve(prob, lam, beta, config.cd_tol, config.cd_max_sweeps);
        const Index support = (cd.beta.array().abs() > thr).count();
        if (support > cap) {
            result.terminated_at = t;
            break;
        }
        PathKnot<Scalar> knot;
        knot.lambda = lam;
        knot.beta = SparseCoefficients<Scalar>::from_dense(cd.beta);
        knot.dual = refresh_dual(prob, cd.beta);
        knot.inner_iterations = cd.sweeps;
        knot.active_size = support;
        knot.stop_reason = cd.converged ? StopReason::Converged : StopReason::MaxSweeps;
        result.knots.push_back(std::move(knot));
        beta = std::move(cd.beta);
    }
    result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

/**
 * Elastic-net solutions for a decreasing sequence of ridge weights at a
 * fixed lambda, each warm-started from the previous one and solved to
 * tolerance `tol`. As alpha -> 0 these approach the minimum-norm LASSO
 * solution.
 */
template <class Scalar>
std::vector<Vec<Scalar>> min_norm_lasso_probe(const ProblemData<Scalar>& prob, Scalar lambda,
                                              const std::vector<Scalar>& alphas, Scalar tol = Scalar(1e-14),
                                              Index max_sweeps = 1000000)
{
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (!(alphas[i] > Scalar(0))) throw Error(ErrorKind::InvalidArgument, "alphas must be positive");
        if (i > 0 && !(alphas[i] < alphas[i - 1])) {
            throw Error(ErrorKind::InvalidArgument, "alphas must be strictly decreasing");
        }
    }
    std::vector<Vec<Scalar>> out;
    Vec<Scalar> beta = Vec<Scalar>::Zero(prob.p());
    for (Scalar a : alphas) {
        const ProblemData<Scalar> enet = prob.with_alpha(a);
        beta = cd_solve(enet, lambda, beta, tol, max_sweeps).beta;
        out.push_back(beta);
    }
    return out;
}

}  // namespace snap
