#include "test_util.hpp"

#include <snap/bench.hpp>

#include <doctest.h>

#include <sstream>

using namespace snap;
using namespace snap::test;

TEST_SUITE("bench")
{
    TEST_CASE("metrics examples")
    {
        Eigen::VectorXd b(5);
        b << 0, 2, 0, -4, 1;
        const TruthModel t = TruthModel::from_beta(b, 0.1);

        const ReplicationMetrics exact = metrics(b, t);
        CHECK(exact.ms == 3);
        CHECK(exact.correct);
        CHECK(exact.contains);
        CHECK(exact.ae == 0.0);
        CHECK(exact.re == 0.0);

        const ReplicationMetrics null = metrics(Eigen::VectorXd::Zero(5), t);
        CHECK(null.ms == 0);
        CHECK_FALSE(null.correct);
        CHECK_FALSE(null.contains);
        CHECK(null.ae == 4.0);
        CHECK(null.re == 1.0);

        Eigen::VectorXd over = b;
        over(0) = 1e-3;
        const ReplicationMetrics m = metrics(over, t);
        CHECK(m.ms == 4);
        CHECK_FALSE(m.correct);
        CHECK(m.contains);
        CHECK(metrics(over, t, 1e-2).correct);

        CHECK_THROWS_AS(metrics(b, TruthModel::from_beta(Eigen::VectorXd::Zero(5), 0)), Error);
        CHECK_THROWS_AS(metrics(Eigen::VectorXd::Zero(4), t), Error);
    }

    TEST_CASE("metrics against re-evaluated norms")
    {
        Rng rng(1);
        for (int rep = 0; rep < 50; ++rep) {
            const Eigen::VectorXd truth = gaussian(30, rng), est = gaussian(30, rng);
            const ReplicationMetrics m = metrics(est, TruthModel::from_beta(truth, 0));
            double inf = 0, num = 0, den = 0;
            for (Index j = 0; j < 30; ++j) {
                inf = std::max(inf, std::abs(est(j) - truth(j)));
                num += (est(j) - truth(j)) * (est(j) - truth(j));
                den += truth(j) * truth(j);
            }
            CHECK(std::abs(m.ae - inf) <= 1e-14);
            CHECK(std::abs(m.re - std::sqrt(num / den)) <= 1e-14);
        }
    }

    TEST_CASE("orthogonal single-signal replication recovers with soft-threshold bias")
    {
        const Index n = 50;
        Eigen::MatrixXd X = std::sqrt(double(n)) * Eigen::MatrixXd::Identity(n, n);
        Eigen::VectorXd beta = Eigen::VectorXd::Zero(n);
        beta(7) = 5.0;
        SimInstance inst{Problem(X, X * beta), TruthModel::from_beta(beta, 0.0), SimConfig{}};
        BenchOptions opt;
        opt.replications = 1;
        const ReplicationOutcome r = run_replication(inst, opt);
        CHECK(r.metrics.correct);
        CHECK(r.metrics.ae == doctest::Approx(r.chosen_lambda).epsilon(1e-10));
    }

    TEST_CASE("benchmark is deterministic and CM never exceeds containment")
    {
        SimConfig cell;
        cell.n = 60;
        cell.p = 120;
        cell.design = Design::classical(0.3);
        cell.sigma = 0.1;
        cell.T = 3;
        BenchOptions opt;
        opt.replications = 4;
        opt.num_knots = 30;
        opt.base_seed = 9;
        for (SolverKind s : {SolverKind::SNAP, SolverKind::CDPATH}) {
            opt.solver = s;
            const auto a = run_benchmark({cell}, opt), b = run_benchmark({cell}, opt);
            REQUIRE(a.size() == 1);
            CHECK(a[0].ms == b[0].ms);
            CHECK(a[0].cm == b[0].cm);
            CHECK(a[0].ae == b[0].ae);
            CHECK(a[0].re == b[0].re);
            CHECK(a[0].median_inner == b[0].median_inner);
            CHECK(a[0].cm <= a[0].contain);
            CHECK(a[0].failures == 0);
        }
        CHECK(replication_seed(1, 0, 0) != replication_seed(1, 0, 1));
        CHECK(replication_seed(1, 0, 0) != replication_seed(1, 1, 0));
    }

    TEST_CASE("presets and csv")
    {
        CHECK(bench_preset("table1").size() == 1);
        CHECK(bench_preset("table1-full").size() == 6);
        CHECK(bench_preset("table2").size() == 6);
        CHECK(bench_preset("table1")[0].T == 40);
        CHECK_THROWS_AS(bench_preset("nope"), Error);

        SimConfig cell = bench_preset("fallback")[0];
        cell.n = 40;
        cell.p = 60;
        BenchOptions opt;
        opt.replications = 2;
        opt.num_knots = 10;
        std::ostringstream os;
        write_metrics_csv(os, run_benchmark({cell}, opt), opt);
        std::istringstream in(os.str());
        std::string line;
        std::getline(in, line);
        CHECK(line == "#schema=1");
        std::getline(in, line);
        CHECK(line.rfind("n,p,design,corr,sigma,T,solver,selector,M,", 0) == 0);
        std::getline(in, line);
        CHECK(line.rfind("40,60,classical,0.1,0.01,5,snap,MBIC,2,0,", 0) == 0);
    }
}
