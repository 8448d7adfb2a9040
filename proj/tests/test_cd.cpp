#include "properties.hpp"

#include <snap/cd.hpp>

#include <doctest.h>

using namespace snap;
using namespace snap::test;

TEST_SUITE("cd")
{
    TEST_CASE("orthogonal design decouples in one sweep")
    {
        for (double alpha : {0.0, 0.7}) {
            const Problem orth = orthogonal_problem(12, 1, alpha);
            const double lam = 0.3;
            const CdResult<double> r = cd_solve(orth, lam, Eigen::VectorXd::Zero(12), 1e-12, 10);
            const Eigen::VectorXd expect = st_oracle(orth.xty() / 12.0, lam) * (12.0 / (12.0 + alpha));
            CHECK(max_abs_diff(r.beta, expect) < 1e-14);
            CHECK(r.sweeps <= 2);
            CHECK(r.converged);
        }
    }

    TEST_CASE("null model above lambda0")
    {
        const Problem prob = random_problem(20, 30, 0.0, 2);
        // X'y is cached by one matrix product and recomputed here column by
        // column, so stay a rounding step above lambda0
        const double lam = default_lambda0(prob) * (1 + 1e-12);
        const CdResult<double> r = cd_solve(prob, lam, Eigen::VectorXd::Zero(30), 1e-12, 10);
        CHECK(r.beta.isZero(0.0));
        CHECK(r.sweeps == 1);
    }

    TEST_CASE("objective never increases across sweeps")
    {
        CHECK(cd_monotonicity_violations(30, 100) == 0);
    }

    TEST_CASE("unnormalized columns use their own curvature")
    {
        Rng rng(3);
        Eigen::MatrixXd X = gaussian(30, 5, rng);
        X.col(2) *= 7.0;
        const Problem prob(X, gaussian(30, rng), 0.2);
        const double lam = 0.05;
        const Eigen::VectorXd b = cd_solve(prob, lam, Eigen::VectorXd::Zero(5), 1e-14, 100000).beta;
        // subgradient optimality
        const Eigen::VectorXd g = -dual_oracle(prob, b);
        for (Index j = 0; j < 5; ++j) {
            if (b(j) != 0.0)
                CHECK(std::abs(g(j) + lam * sign(b(j))) < 1e-10);
            else
                CHECK(std::abs(g(j)) <= lam + 1e-10);
        }
    }

    TEST_CASE("budget exhaustion is reported")
    {
        const Problem prob = random_problem(20, 40, 0.0, 4, 6);
        const CdResult<double> r = cd_solve(prob, 1e-3, Eigen::VectorXd::Zero(40), 1e-15, 1);
        CHECK_FALSE(r.converged);
        CHECK(r.sweeps == 1);
    }

    TEST_CASE("cd path records supports and duals")
    {
        const Problem prob = random_problem(40, 60, 0.0, 5, 3);
        PathConfig<double> cfg;
        cfg.num_knots = 20;
        cfg.gamma = PathConfig<double>::gamma_for_ratio(20, 0.05);
        const PathResult<double> path = cd_path(prob, cfg);
        CHECK(path.support_threshold == kCdSupportThreshold);
        CHECK(path.knots[0].beta.nnz() == 0);
        for (const auto& k : path.knots) {
            CHECK(k.stop_reason == StopReason::Converged);
            CHECK(max_abs_diff(k.dual, dual_oracle(prob, k.beta.to_dense())) < 1e-12);
        }
    }

    TEST_CASE("ridge limit: distance to the lasso solution shrinks with alpha")
    {
        const Problem prob = random_problem(50, 10, 0.0, 6, 4);
        const double lam = 0.1 * default_lambda0(prob);
        const Eigen::VectorXd lasso = cd_solve(prob, lam, Eigen::VectorXd::Zero(10), 1e-15, 1000000).beta;
        const auto sols = min_norm_lasso_probe(prob, lam, {1e-1, 1e-2, 1e-4, 1e-6});
        double prev = INFINITY;
        for (const auto& b : sols) {
            const double dist = (b - lasso).norm();
            CHECK(dist < prev);
            prev = dist;
        }
        CHECK(prev < 1e-4);
    }

    TEST_CASE("ridge limit: null model above lambda0")
    {
        const Problem prob = random_problem(30, 20, 0.0, 7);
        for (const auto& b : min_norm_lasso_probe(prob, 1.01 * default_lambda0(prob), {1.0, 1e-3})) {
            CHECK(b.isZero(0.0));
        }
        CHECK_THROWS_AS(min_norm_lasso_probe(prob, 0.1, {1e-3, 1e-2}), Error);
    }

    TEST_CASE("ridge limit splits duplicated columns evenly")
    {
        Rng rng(8);
        Eigen::MatrixXd X = gaussian(30, 4, rng);
        X.col(1) = X.col(0);
        const Eigen::VectorXd y = 2.0 * X.col(0) - X.col(3) + 0.1 * gaussian(30, rng);
        const Problem prob = normalize(X, y);
        const double lam = 0.1 * default_lambda0(prob);
        const auto sols = min_norm_lasso_probe(prob, lam, {1.0, 1e-2, 1e-4, 1e-6});
        // the split is symmetric for every alpha > 0; CD reaches it up to its
        // slow contraction along the duplicated direction
        for (const auto& b : sols) CHECK(std::abs(b(0) - b(1)) < 1e-5 * std::abs(b(0) + b(1)));
        CHECK(sols.back()(0) > 0.5);
    }
}
