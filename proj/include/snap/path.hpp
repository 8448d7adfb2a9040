#pragma once

#include <snap/sna.hpp>

#include <chrono>
#include <cmath>
#include <ostream>

namespace snap {

/// Per-knot shift rule.
template <class Scalar>
struct ShiftSchedule
{
    enum class Kind { Zero, Theorem6, Custom };

    Kind kind = Kind::Zero;
    Scalar delta_u = Scalar(0);  // Theorem6: shift_t = 0.9 lambda_t + delta_u
    std::vector<Scalar> custom;  // Custom: one entry per knot

    Scalar at(Index knot, Scalar lambda) const
    {
        switch (kind) {
            case Kind::Zero: return Scalar(0);
            case Kind::Theorem6: return Scalar(9) / Scalar(10) * lambda + delta_u;
            case Kind::Custom:
                if (knot >= static_cast<Index>(custom.size())) {
                    throw Error(ErrorKind::InvalidArgument, "custom shift schedule shorter than the grid");
                }
                return custom[static_cast<std::size_t>(knot)];
        }
        return Scalar(0);
    }
};

/**
 * Geometric grid lambda_t = lambda0 gamma^t for t = 0..num_knots (so the
 * path has num_knots + 1 knots), with warm-started inner solves.
 */
template <class Scalar>
struct PathConfig
{
    std::optional<Scalar> lambda0;  // default: ||X'y/n||_inf
    Scalar gamma = Scalar(0.5);
    Index num_knots = 100;
    Index max_inner = 1;
    ShiftSchedule<Scalar> shift;
    std::optional<Index> sparsity_cap;  // default: ceil(n/2)
    CgPolicy<Scalar> cg;
    Scalar residual_tol = Scalar(0);
    // coordinate-descent path only
    Scalar cd_tol = Scalar(1e-7);
    Index cd_max_sweeps = 100000;

    /// gamma such that lambda_N / lambda_0 = ratio.
    static Scalar gamma_for_ratio(Index num_knots, Scalar ratio = Scalar(1e-3))
    {
        return std::pow(ratio, Scalar(1) / Scalar(num_knots));
    }

    Index cap_for(Index n) const
    {
        return sparsity_cap ? *sparsity_cap : static_cast<Index>(std::ceil(0.5 * static_cast<double>(n)));
    }

    /// lambda_0, ..., lambda_N; each knot is the previous one times gamma.
    std::vector<Scalar> grid(Scalar l0) const
    {
        std::vector<Scalar> g(static_cast<std::size_t>(num_knots + 1));
        g[0] = l0;
        for (std::size_t t = 1; t < g.size(); ++t) g[t] = g[t - 1] * gamma;
        return g;
    }

    void validate(Scalar l0) const
    {
        if (!(l0 > Scalar(0))) throw Error(ErrorKind::InvalidArgument, "lambda0 must be > 0");
        if (!(gamma > Scalar(0) && gamma < Scalar(1))) {
            throw Error(ErrorKind::InvalidArgument, "gamma must lie in (0, 1)");
        }
        if (num_knots < 1) throw Error(ErrorKind::InvalidArgument, "num_knots must be >= 1");
        if (max_inner < 1) throw Error(ErrorKind::InvalidArgument, "max_inner must be >= 1");
        if (sparsity_cap && *sparsity_cap < 1) throw Error(ErrorKind::InvalidArgument, "sparsity cap must be >= 1");
        const std::vector<Scalar> g = grid(l0);
        for (Index t = 0; t <= num_knots; ++t) {
            const Scalar lam = g[static_cast<std::size_t>(t)];
            const Scalar s = shift.at(t, lam);
            if (!(s >= Scalar(0) && s < lam)) {
                throw Error(ErrorKind::InvalidArgument,
                            "shift must satisfy 0 <= shift < lambda at knot " + std::to_string(t), t);
            }
        }
    }
};

template <class Scalar>
struct PathKnot
{
    Scalar lambda = 0;
    Scalar shift = 0;
    SparseCoefficients<Scalar> beta;
    Vec<Scalar> dual;
    Index inner_iterations = 0;
    Index active_size = 0;
    StopReason stop_reason = StopReason::MaxIter;
};

template <class Scalar>
struct PathResult
{
    std::vector<PathKnot<Scalar>> knots;
    double wall_time_s = 0.0;
    std::optional<Index> terminated_at;  // knot that tripped the sparsity cap
    Scalar support_threshold = Scalar(0);  // |beta_j| above this counts as selected

    Index size() const { return static_cast<Index>(knots.size()); }
};

/// ||X'y/n||_inf: the smallest lambda whose solution is identically zero.
template <class Scalar>
Scalar default_lambda0(const ProblemData<Scalar>& prob)
{
    const Scalar l0 = prob.xty().template lpNorm<Eigen::Infinity>() / Scalar(prob.n());
    if (!(l0 > Scalar(0))) {
        throw Error(ErrorKind::DegenerateResponse, "X'y = 0; the response is orthogonal to every column");
    }
    return l0;
}

/**
 * Path preset carrying the finite-step sign-consistency guarantee:
 * lambda_u = sigma sqrt(2 log p / n), delta_u = 3 lambda_u, gamma = 8/13,
 * N the knot with lambda_N > 10 delta_u >= lambda_{N+1}, and shift
 * 0.9 lambda_t + delta_u. The guarantee needs max_inner >= T; pass it when
 * T is known.
 */
template <class Scalar>
PathConfig<Scalar> theorem6_schedule(const ProblemData<Scalar>& prob, Scalar sigma,
                                     std::optional<Index> max_inner = std::nullopt)
{
    if (!(sigma > Scalar(0))) throw Error(ErrorKind::InvalidArgument, "sigma must be > 0");
    const Scalar l0 = default_lambda0(prob);
    const Scalar lambda_u = sigma * std::sqrt(Scalar(2) * std::log(Scalar(prob.p())) / Scalar(prob.n()));
    const Scalar delta_u = Scalar(3) * lambda_u;
    const Scalar gamma = Scalar(8) / Scalar(13);
    const Scalar floor = Scalar(10) * delta_u;
    if (floor >= l0 * gamma) {
        throw Error(ErrorKind::NoiseTooLarge, "10 delta_u >= lambda_1; no valid knot count exists");
    }
    Index N = 1;
    for (Scalar next = l0 * gamma * gamma; next > floor; next *= gamma) ++N;

    PathConfig<Scalar> cfg;
    cfg.lambda0 = l0;
    cfg.gamma = gamma;
    cfg.num_knots = N;
    cfg.max_inner = max_inner.value_or(10);
    cfg.shift.kind = ShiftSchedule<Scalar>::Kind::Theorem6;
    cfg.shift.delta_u = delta_u;
    cfg.validate(l0);
    return cfg;
}

/**
 * Pathwise semismooth Newton: each knot is warm-started from the previous
 * knot's (beta, d); knot -1 is (0, X'y/n). The path stops early, without
 * error, when a knot's active set exceeds the sparsity cap; that knot is not
 * recorded.
 */
template <class Scalar>
PathResult<Scalar> snap_run(const ProblemData<Scalar>& prob, const PathConfig<Scalar>& config)
{
    const auto start = std::chrono::steady_clock::now();
    const Scalar l0 = config.lambda0 ? *config.lambda0 : default_lambda0(prob);
    config.validate(l0);

    PathResult<Scalar> result;
    result.knots.reserve(static_cast<std::size_t>(config.num_knots + 1));
    PrimalDualState<Scalar> state{Vec<Scalar>::Zero(prob.p()), prob.xty() / Scalar(prob.n())};

    SnaConfig<Scalar> sc;
    sc.max_iter = config.max_inner;
    sc.cg = config.cg;
    sc.sparsity_cap = config.cap_for(prob.n());
    sc.residual_tol = config.residual_tol;

    const std::vector<Scalar> grid = config.grid(l0);
    for (Index t = 0; t <= config.num_knots; ++t) {
        sc.lambda = grid[static_cast<std::size_t>(t)];
        sc.shift = config.shift.at(t, sc.lambda);
        SnaOutcome<Scalar> out;
        try {
            out = sna_solve(prob, state, sc);
        } catch (const SolveError& e) {
            throw e.at_knot(t);
        }
        if (out.stop_reason == StopReason::SparsityCapExceeded) {
            result.terminated_at = t;
            break;
        }
        PathKnot<Scalar> knot;
        knot.lambda = sc.lambda;
        knot.shift = sc.shift;
        knot.beta = SparseCoefficients<Scalar>::from_dense(out.state.beta);
        knot.dual = out.state.dual;
        knot.inner_iterations = out.iterations;
        knot.active_size = knot.beta.nnz();
        knot.stop_reason = out.stop_reason;
        result.knots.push_back(std::move(knot));
        state = std::move(out.state);
    }
    result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

/// Path summary: `knot,lambda,nnz,inner_iters,stop_reason`.
template <class Scalar>
void write_path_csv(std::ostream& os, const PathResult<Scalar>& path)
{
    os << "#schema=1\n";
    os << "knot,lambda,nnz,inner_iters,stop_reason\n";
    os.precision(17);
    for (Index t = 0; t < path.size(); ++t) {
        const auto& k = path.knots[static_cast<std::size_t>(t)];
        os << t << ',' << k.lambda << ',' << k.beta.nnz() << ',' << k.inner_iterations << ','
           << to_string(k.stop_reason) << '\n';
    }
}

/// Sparse coefficients: `knot,index,value`.
template <class Scalar>
void write_coefficients_csv(std::ostream& os, const PathResult<Scalar>& path)
{
    os << "#schema=1\n";
    os << "knot,index,value\n";
    os.precision(17);
    for (Index t = 0; t < path.size(); ++t) {
        const auto& b = path.knots[static_cast<std::size_t>(t)].beta;
        for (std::size_t k = 0; k < b.index.size(); ++k) {
            os << t << ',' << b.index[k] << ',' << b.value[k] << '\n';
        }
    }
}

}  // namespace snap
