#pragma once

#include <snap/kkt.hpp>

#include <Eigen/Cholesky>

#include <limits>

namespace snap {

/**
 * How the restricted system G_AA beta_A = rhs is solved. Systems with at
 * most `dense_threshold` unknowns are factorized directly; larger ones run
 * conjugate gradients, warm-started from the previous iterate and capped at
 * max(1, floor(p / (2|A|))) iterations unless `max_iter` overrides the cap.
 */
template <class Scalar>
struct CgPolicy
{
    Scalar tol = Scalar(1e-12);
    std::optional<Index> max_iter;
    Index dense_threshold = 32;

    Index cap(Index p, Index active_size) const
    {
        if (max_iter) return std::max<Index>(1, *max_iter);
        return std::max<Index>(1, p / (2 * std::max<Index>(1, active_size)));
    }
};

enum class StopReason {
    ActiveSetRepeated,
    MaxIter,
    SparsityCapExceeded,
    ResidualBelowTol,
    Converged,  // coordinate descent: sweep change below tolerance
    MaxSweeps,  // coordinate descent: sweep budget exhausted
};

inline const char* to_string(StopReason r)
{
    switch (r) {
        case StopReason::ActiveSetRepeated: return "ActiveSetRepeated";
        case StopReason::MaxIter: return "MaxIter";
        case StopReason::SparsityCapExceeded: return "SparsityCapExceeded";
        case StopReason::ResidualBelowTol: return "ResidualBelowTol";
        case StopReason::Converged: return "Converged";
        case StopReason::MaxSweeps: return "MaxSweeps";
    }
    return "Unknown";
}

template <class Scalar>
struct SnaConfig
{
    Scalar lambda = Scalar(1);
    Scalar shift = Scalar(0);
    Index max_iter = 5;
    CgPolicy<Scalar> cg;
    Index sparsity_cap = std::numeric_limits<Index>::max();
    Scalar residual_tol = Scalar(0);  // 0 disables the residual stop

    void validate() const
    {
        if (!(lambda > Scalar(0))) throw Error(ErrorKind::InvalidArgument, "lambda must be > 0");
        if (!(shift >= Scalar(0) && shift < lambda)) {
            throw Error(ErrorKind::InvalidArgument, "shift must lie in [0, lambda)");
        }
        if (max_iter < 1) throw Error(ErrorKind::InvalidArgument, "max_iter must be >= 1");
        if (!(cg.tol > Scalar(0))) throw Error(ErrorKind::InvalidArgument, "cg tolerance must be > 0");
        if (sparsity_cap < 1) throw Error(ErrorKind::InvalidArgument, "sparsity cap must be >= 1");
        if (!(residual_tol >= Scalar(0))) throw Error(ErrorKind::InvalidArgument, "residual_tol must be >= 0");
    }
};

template <class Scalar>
struct SnaOutcome
{
    PrimalDualState<Scalar> state;
    Index iterations = 0;
    StopReason stop_reason = StopReason::MaxIter;
    ActivePartition active;
    Index cg_iterations = 0;
};

/// Diagnostics of one restricted solve.
struct UpdateStats
{
    Index cg_iterations = 0;
    bool converged = true;  // false when CG stopped at its cap above tolerance
};

namespace detail {

template <class Scalar>
SolveError solve_error(ErrorKind kind, const std::string& what, const PrimalDualState<Scalar>& s)
{
    return SolveError(kind, what, s.beta.template cast<double>(), s.dual.template cast<double>());
}

/**
 * Solves (X_A'X_A + alpha I) x = rhs. `x` holds the warm start on entry.
 * Fills `stats` with the CG count (0 for the direct path) and whether the
 * solve reached its tolerance before the iteration cap.
 */
template <class Scalar>
void solve_restricted(const Mat<Scalar>& XA, Scalar alpha, const Vec<Scalar>& rhs, Vec<Scalar>& x,
                      const CgPolicy<Scalar>& cg, Index p, const PrimalDualState<Scalar>& state,
                      UpdateStats& stats)
{
    stats = {};
    const Index a = XA.cols();
    if (a == 0) return;
    if (a <= cg.dense_threshold) {
        Mat<Scalar> G = XA.transpose() * XA;
        G.diagonal().array() += alpha;
        Eigen::LLT<Mat<Scalar>> llt(G);
        // rounding can let an exactly singular Gram matrix factor "successfully"
        if (llt.info() != Eigen::Success || !(llt.rcond() > std::numeric_limits<Scalar>::epsilon())) {
            throw solve_error(ErrorKind::CgBreakdown, "restricted Gram matrix is not positive definite", state);
        }
        x = llt.solve(rhs);
        if (!x.allFinite()) throw solve_error(ErrorKind::CgBreakdown, "restricted solve is not finite", state);
        return;
    }

    auto apply = [&](const Vec<Scalar>& v) -> Vec<Scalar> {
        Vec<Scalar> Xv = XA * v;
        Vec<Scalar> out = XA.transpose() * Xv;
        out += alpha * v;
        return out;
    };

    const Scalar rhs_norm = rhs.norm();
    if (rhs_norm == Scalar(0)) {
        x.setZero();
        return;
    }
    const Scalar target = cg.tol * rhs_norm;
    Vec<Scalar> r = rhs - apply(x);
    Vec<Scalar> d = r;
    Scalar rr = r.squaredNorm();
    const Index cap = cg.cap(p, a);
    Index it = 0;
    while (it < cap && std::sqrt(rr) > target) {
        const Vec<Scalar> Gd = apply(d);
        const Scalar curv = d.dot(Gd);
        if (!(curv > std::numeric_limits<Scalar>::epsilon() * d.squaredNorm())) {
            throw solve_error(ErrorKind::CgBreakdown, "non-positive curvature in conjugate gradients", state);
        }
        const Scalar step = rr / curv;
        x += step * d;
        r -= step * Gd;
        const Scalar rr_next = r.squaredNorm();
        d = r + (rr_next / rr) * d;
        rr = rr_next;
        ++it;
    }
    if (!x.allFinite()) throw solve_error(ErrorKind::CgBreakdown, "conjugate gradients diverged", state);
    stats.cg_iterations = it;
    stats.converged = std::sqrt(rr) <= target;
}

}  // namespace detail

/**
 * One active-set update at fixed (lambda, shift):
 *
 *   beta_B = 0
 *   d_A    = (lambda - shift) sign(beta + d)_A    (signs of the incoming state)
 *   beta_A = G_AA^{-1} (X'y_A - n d_A)
 *   d_B    = (X'y_B - G_BA beta_A) / n
 *
 * `stats`, when non-null, receives the diagnostics of the restricted solve.
 */
template <class Scalar>
PrimalDualState<Scalar> sna_update(const ProblemData<Scalar>& prob, const PrimalDualState<Scalar>& state,
                                   const ActivePartition& part, Scalar lambda, Scalar shift,
                                   const CgPolicy<Scalar>& cg = {},
                                   Index sparsity_cap = std::numeric_limits<Index>::max(),
                                   UpdateStats* stats = nullptr)
{
    const Index p = prob.p();
    const Index a = static_cast<Index>(part.active.size());
    if (state.beta.size() != p || state.dual.size() != p) {
        throw Error(ErrorKind::DimensionMismatch, "state length != p");
    }
    if (a > sparsity_cap) {
        throw detail::solve_error(ErrorKind::ActiveSetTooLarge,
                                  "active set of size " + std::to_string(a) + " exceeds cap " +
                                      std::to_string(sparsity_cap),
                                  state);
    }
    const Scalar n = Scalar(prob.n());
    const Vec<Scalar>& xty = prob.xty();

    Mat<Scalar> XA(prob.n(), a);
    Vec<Scalar> dA(a), rhs(a), betaA(a);
    for (Index i = 0; i < a; ++i) {
        const Index j = part.active[i];
        XA.col(i) = prob.X().col(j);
        dA(i) = (lambda - shift) * sign(state.beta(j) + state.dual(j));
        rhs(i) = xty(j) - n * dA(i);
        betaA(i) = state.beta(j);
    }
    UpdateStats local;
    detail::solve_restricted(XA, prob.alpha(), rhs, betaA, cg, p, state, local);
    if (stats) *stats = local;

    PrimalDualState<Scalar> out{Vec<Scalar>::Zero(p), Vec<Scalar>(p)};
    for (Index i = 0; i < a; ++i) {
        const Index j = part.active[i];
        out.beta(j) = betaA(i);
        out.dual(j) = dA(i);
    }
    // G_BA beta_A = X_B' X_A beta_A; the ridge term is diagonal and drops out.
    const Vec<Scalar> fit = XA * betaA;
    for (Index j : part.inactive) {
        out.dual(j) = (xty(j) - prob.X().col(j).dot(fit)) / n;
    }
    return out;
}

namespace detail {

template <class Scalar>
bool same_signed_set(const IndexSet& a, const std::vector<int>& sa, const IndexSet& b, const std::vector<int>& sb)
{
    return a == b && sa == sb;
}

/**
 * Whether `state` is already a fixed point of the update on `part`:
 * beta_B = 0, d_A = (lambda - shift) sign, and d consistent with beta.
 */
template <class Scalar>
bool is_fixed_point(const ProblemData<Scalar>& prob, const PrimalDualState<Scalar>& state,
                    const ActivePartition& part, Scalar lambda, Scalar shift, Scalar tol)
{
    for (Index j : part.inactive) {
        if (state.beta(j) != Scalar(0)) return false;
    }
    for (Index j : part.active) {
        const Scalar target = (lambda - shift) * sign(state.beta(j) + state.dual(j));
        if (std::abs(state.dual(j) - target) > tol) return false;
    }
    const Vec<Scalar> d = refresh_dual(prob, state.beta);
    return (state.dual - d).template lpNorm<Eigen::Infinity>() <= tol;
}

}  // namespace detail

/**
 * Semismooth Newton solve at fixed (lambda, shift). Iterates
 * partition -> update until the signed active set repeats, the iteration
 * budget is spent, the sparsity cap trips, or (when enabled) the KKT
 * residual falls below `residual_tol`.
 *
 * The warm start's support plays the role of the previous active set, so
 * a start that is already a fixed point returns after zero updates. A
 * repeat right after a CG solve truncated by its cap does not stop the
 * loop: the next update resumes CG from the current iterate.
 */
template <class Scalar>
SnaOutcome<Scalar> sna_solve(const ProblemData<Scalar>& prob, const PrimalDualState<Scalar>& init,
                             const SnaConfig<Scalar>& config)
{
    config.validate();
    if (init.beta.size() != prob.p() || init.dual.size() != prob.p()) {
        throw Error(ErrorKind::DimensionMismatch, "initial state length != p");
    }
    if (!init.beta.allFinite() || !init.dual.allFinite()) {
        throw Error(ErrorKind::InvalidArgument, "initial state is not finite");
    }

    SnaOutcome<Scalar> out;
    out.state = init;

    IndexSet prev_active;
    std::vector<int> prev_signs;
    for (Index j = 0; j < init.size(); ++j) {
        if (init.beta(j) != Scalar(0)) {
            prev_active.push_back(j);
            prev_signs.push_back(static_cast<int>(sign(init.beta(j))));
        }
    }
    const Scalar scale = std::max(Scalar(1), prob.xty().template lpNorm<Eigen::Infinity>() / Scalar(prob.n()));
    const Scalar fixed_tol = std::max(Scalar(10) * config.cg.tol * scale, Scalar(1e-12) * scale);
    bool last_solve_converged = true;

    for (Index k = 0;; ++k) {
        ActivePartition part = partition(out.state, config.lambda);
        std::vector<int> signs = active_signs(out.state, part.active);
        out.active = part;

        bool repeated = detail::same_signed_set<Scalar>(part.active, signs, prev_active, prev_signs);
        if (repeated && k == 0) {
            repeated = detail::is_fixed_point(prob, out.state, part, config.lambda, config.shift, fixed_tol);
        }
        repeated = repeated && last_solve_converged;
        if (repeated) {
            out.stop_reason = StopReason::ActiveSetRepeated;
            return out;
        }
        if (config.residual_tol > Scalar(0) &&
            kkt_residual(prob, out.state, config.lambda).norm_inf <= config.residual_tol) {
            out.stop_reason = StopReason::ResidualBelowTol;
            return out;
        }
        if (k >= config.max_iter) {
            out.stop_reason = StopReason::MaxIter;
            return out;
        }
        if (static_cast<Index>(part.active.size()) > config.sparsity_cap) {
            out.stop_reason = StopReason::SparsityCapExceeded;
            return out;
        }

        UpdateStats stats;
        out.state = sna_update(prob, out.state, part, config.lambda, config.shift, config.cg,
                               config.sparsity_cap, &stats);
        out.cg_iterations += stats.cg_iterations;
        last_solve_converged = stats.converged;
        out.iterations = k + 1;
        prev_active = std::move(part.active);
        prev_signs = std::move(signs);
    }
}

}  // namespace snap
