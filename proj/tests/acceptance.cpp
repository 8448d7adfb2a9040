// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails. Pass criterion numbers as
// arguments to run a subset.

#include "properties.hpp"

#include <snap/bench.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

using namespace snap;
using namespace snap::test;

namespace {

struct Verdict
{
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

PathConfig<double> path_to(double l0, double target, Index knots, Index K, Index cap)
{
    PathConfig<double> cfg;
    cfg.lambda0 = l0;
    cfg.num_knots = knots;
    cfg.gamma = std::pow(target / l0, 1.0 / double(knots));
    cfg.max_inner = K;
    cfg.sparsity_cap = cap;
    return cfg;
}

// 1. orthogonal design, every knot in closed form
Verdict orthogonal_closed_form()
{
    const auto t0 = Clock::now();
    const Problem orth = orthogonal_problem(50, 2024);
    PathConfig<double> cfg;
    cfg.num_knots = 100;
    cfg.gamma = PathConfig<double>::gamma_for_ratio(100);
    cfg.sparsity_cap = 50;
    const PathResult<double> path = snap_run(orth, cfg);
    const Eigen::VectorXd u = orth.xty() / 50.0;
    double worst = 0;
    for (const auto& k : path.knots) worst = std::max(worst, max_abs_diff(k.beta.to_dense(), st_oracle(u, k.lambda)));
    const double secs = seconds_since(t0);
    return {path.size() == 101 && worst <= 1e-10 && secs < 1.0,
            fmt("knots=%td max_err=%.2e time=%.3fs", path.size(), worst, secs)};
}

// 2. residual at every repeat-stopped knot
Verdict kkt_exactness()
{
    int checked = 0, bad = 0;
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const double alpha = i % 2 ? 0.1 : 0.0;
        const Problem prob = random_problem(50, 200, alpha, 5000 + std::uint64_t(i), 5, 0.1);
        PathConfig<double> cfg;
        cfg.num_knots = 100;
        cfg.gamma = PathConfig<double>::gamma_for_ratio(100);
        cfg.max_inner = 5;
        const PathResult<double> path = snap_run(prob, cfg);
        const double scale = std::max(1.0, default_lambda0(prob));
        for (const auto& k : path.knots) {
            if (k.stop_reason != StopReason::ActiveSetRepeated) continue;
            const double r =
                kkt_residual(prob, PrimalDualState<double>{k.beta.to_dense(), k.dual}, k.lambda).norm_inf / scale;
            worst = std::max(worst, r);
            bad += r > 1e-8;
            ++checked;
        }
    }
    return {bad == 0 && checked > 0, fmt("repeat-stopped knots=%d violations=%d max_scaled_residual=%.2e", checked, bad, worst)};
}

// 3. agreement with coordinate descent (elastic net, unique minimizer)
Verdict cd_agreement()
{
    double worst_obj = 0, worst_beta = 0;
    for (int i = 0; i < 50; ++i) {
        const Problem prob = random_problem(20, 40, 0.1, 6000 + std::uint64_t(i), 4, 0.1);
        Rng rng(6100 + std::uint64_t(i));
        const double l0 = default_lambda0(prob);
        const double lam = (0.02 + 0.5 * rng.uniform()) * l0;
        const PathResult<double> path = snap_run(prob, path_to(l0, lam, 20, 20, 40));
        const Eigen::VectorXd b_sna = path.knots.back().beta.to_dense();
        const Eigen::VectorXd b_cd = cd_solve(prob, lam, Eigen::VectorXd::Zero(40), 1e-12, 10000000).beta;
        worst_obj = std::max(worst_obj, std::abs(objective(prob, b_sna, lam) - objective(prob, b_cd, lam)));
        worst_beta = std::max(worst_beta, max_abs_diff(b_sna, b_cd));
    }
    return {worst_obj <= 1e-8 && worst_beta <= 1e-6,
            fmt("instances=50 max|dJ|=%.2e max|dbeta|=%.2e", worst_obj, worst_beta)};
}

// 4. active-set update equals the dense semismooth Newton step
Verdict newton_equivalence()
{
    double worst = 0;
    for (int i = 0; i < 50; ++i) {
        Rng rng(7000 + std::uint64_t(i));
        const Index p = 10 + Index(rng.below(51));
        const Index n = 20 + Index(rng.below(40));
        const double alpha = i % 2 ? 0.1 : 0.0;
        const Problem prob = random_problem(n, p, alpha, 7100 + std::uint64_t(i), 3, 0.1);
        const double lam = (0.05 + 0.5 * rng.uniform()) * default_lambda0(prob);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(p);
        for (Index j = 0; j < p; ++j) {
            if (rng.uniform() < 0.15) b(j) = rng.normal();
        }
        const PrimalDualState<double> z{b, refresh_dual(prob, b) + 0.05 * gaussian(p, rng)};
        ActivePartition part = partition(z, lam);
        if (alpha == 0.0 && Index(part.active.size()) > n) continue;
        const PrimalDualState<double> dense = newton_step_dense(prob, z, part, lam);
        // compare against an exact restricted solve, not the capped default
        CgPolicy<double> exact;
        exact.max_iter = 10 * p;
        const PrimalDualState<double> upd = sna_update(prob, z, part, lam, 0.0, exact);
        worst = std::max({worst, max_abs_diff(dense.beta, upd.beta), max_abs_diff(dense.dual, upd.dual)});
    }
    return {worst <= 1e-10, fmt("instances=50 max_componentwise_diff=%.2e", worst)};
}

// 5. one update from inside the convergence margin recovers the solution
Verdict one_step_convergence()
{
    int built = 0, ok = 0, tried = 0;
    double worst = 0, min_margin = INFINITY;
    for (std::uint64_t s = 8000; built < 20 && tried < 200; ++s, ++tried) {
        const Problem prob = random_problem(40, 80, 0.0, s, 4, 0.05);
        Rng rng(s);
        const double lam = (0.05 + 0.4 * rng.uniform()) * default_lambda0(prob);
        const Eigen::VectorXd bhat = cd_solve(prob, lam, Eigen::VectorXd::Zero(80), 1e-15, 10000000).beta;
        const Eigen::VectorXd dhat = refresh_dual(prob, bhat);
        const Eigen::VectorXd u = bhat + dhat;
        double C = INFINITY;
        for (Index j = 0; j < 80; ++j) C = std::min(C, std::abs(std::abs(u(j)) - lam));
        if (!(C > 1e-6)) continue;
        ++built;
        min_margin = std::min(min_margin, C);
        Eigen::VectorXd b0(80), d0(80);
        for (Index j = 0; j < 80; ++j) {
            b0(j) = bhat(j) + 0.49 * C * (2 * rng.uniform() - 1);
            d0(j) = dhat(j) + 0.49 * C * (2 * rng.uniform() - 1);
        }
        SnaConfig<double> cfg;
        cfg.lambda = lam;
        cfg.max_iter = 1;
        const SnaOutcome<double> out = sna_solve(prob, PrimalDualState<double>{b0, d0}, cfg);
        const double err = max_abs_diff(out.state.beta, bhat);
        worst = std::max(worst, err);
        ok += out.iterations == 1 && err <= 1e-9;
    }
    return {built == 20 && ok == 20,
            fmt("instances=%d one_step_ok=%d max_err=%.2e min_margin=%.2e", built, ok, worst, min_margin)};
}

// 6. elastic net approaches the (unique) lasso solution as alpha -> 0
Verdict ridge_limit()
{
    int monotone = 0;
    double worst_last = 0;
    for (int i = 0; i < 10; ++i) {
        const Problem prob = random_problem(50, 10, 0.0, 9000 + std::uint64_t(i), 4, 0.1);
        const double lam = 0.1 * default_lambda0(prob);
        const Eigen::VectorXd lasso = cd_solve(prob, lam, Eigen::VectorXd::Zero(10), 1e-15, 10000000).beta;
        const auto sols = min_norm_lasso_probe(prob, lam, {1e-2, 1e-4, 1e-6});
        const double d0 = (sols[0] - lasso).norm(), d1 = (sols[1] - lasso).norm(), d2 = (sols[2] - lasso).norm();
        monotone += d0 > d1 && d1 > d2;
        worst_last = std::max(worst_last, d2);
    }
    return {monotone == 10 && worst_last < 1e-4, fmt("monotone=%d/10 max_dist_at_1e-6=%.2e", monotone, worst_last)};
}

std::string describe(const MetricsRecord& r, double secs)
{
    return fmt("CM=%.2f MS=%.2f AE=%.4f RE=%.4f contain=%.2f failures=%td time=%.1fs", r.cm, r.ms, r.ae, r.re,
               r.contain, r.failures, secs);
}

// 7. support recovery on the reference cell and the scaled fallback
Verdict support_recovery()
{
    BenchOptions opt;
    opt.replications = 20;
    opt.base_seed = 1;
    opt.num_knots = 100;
    opt.max_inner = 1;

    auto t0 = Clock::now();
    const MetricsRecord big = run_benchmark(bench_preset("table1"), opt).front();
    const double big_s = seconds_since(t0);
    const bool big_ok =
        big.cm >= 0.80 && big.ms >= 40.0 && big.ms <= 41.0 && big.ae <= 0.12 && big.failures == 0 && big_s < 600;

    t0 = Clock::now();
    const MetricsRecord small = run_benchmark(bench_preset("fallback"), opt).front();
    const double small_s = seconds_since(t0);
    const bool small_ok = small.cm >= 0.90 && small.failures == 0 && small_s < 60;

    return {big_ok && small_ok, fmt("table1[%s]: %s | fallback[%s]: %s", big_ok ? "ok" : "miss",
                                    describe(big, big_s).c_str(), small_ok ? "ok" : "miss",
                                    describe(small, small_s).c_str())};
}

// 8. few inner iterations and active sets inside the true support
Verdict inner_iteration_economy()
{
    BenchOptions opt;
    opt.replications = 20;
    opt.max_inner = 5;
    const SimConfig cell = bench_preset("converge").front();
    std::vector<Index> inner;
    int nested_to_chosen = 0, nested_full = 0;
    for (Index m = 0; m < opt.replications; ++m) {
        SimConfig c = cell;
        c.seed = replication_seed(opt.base_seed, 0, m);
        const SimInstance inst = simulate(c);
        const ReplicationOutcome r = run_replication(inst, opt);
        inner.insert(inner.end(), r.inner_iterations.begin(), r.inner_iterations.end());
        auto nested = [&](std::size_t upto) {
            for (std::size_t t = 0; t < upto; ++t) {
                if (!std::includes(inst.truth.support.begin(), inst.truth.support.end(), r.supports[t].begin(),
                                   r.supports[t].end()))
                    return false;
            }
            return true;
        };
        nested_to_chosen += nested(std::size_t(r.chosen_knot) + 1);
        nested_full += nested(r.supports.size());
    }
    std::sort(inner.begin(), inner.end());
    const std::size_t h = inner.size() / 2;
    const double median = inner.size() % 2 ? double(inner[h]) : 0.5 * double(inner[h - 1] + inner[h]);
    const bool ok = median <= 2.0 && nested_to_chosen >= 18;
    return {ok, fmt("median_inner=%.1f nested_through_selected_knot=%d/20 nested_whole_path=%d/20", median,
                    nested_to_chosen, nested_full)};
}

// 9. finite-step sign consistency under the theory schedule
Verdict sign_consistency()
{
    struct Case
    {
        Index n, p, T;
        double sigma;
    };
    const std::vector<Case> cases = {{500, 1000, 2, 1e-3}, {500, 1000, 1, 1e-3}, {2000, 1000, 2, 1e-3}};
    std::ostringstream detail;
    int applicable = 0, passed = 0;
    for (const Case& c : cases) {
        SimConfig cfg;
        cfg.n = c.n;
        cfg.p = c.p;
        cfg.T = c.T;
        cfg.sigma = c.sigma;
        cfg.design = Design::autocorr(0.0);
        int qualifying = 0, good = 0, tried = 0;
        const int max_tries = c.n * c.p > 1000000 ? 40 : 100;
        for (std::uint64_t s = 1; qualifying < 20 && tried < max_tries; ++s, ++tried) {
            cfg.seed = derive_seed(0x7468656f, std::uint64_t(c.n), std::uint64_t(c.T), s);
            const SimInstance inst = simulate(cfg);
            const TheoryReport rep = theory_check(inst.problem, inst.truth);
            if (!rep.a1_holds || !rep.a2_holds) continue;
            ++qualifying;
            const PathConfig<double> pc = theorem6_schedule(inst.problem, c.sigma, std::max<Index>(c.T, 10));
            const PathResult<double> path = snap_run(inst.problem, pc);
            if (path.size() != pc.num_knots + 1) continue;
            const Eigen::VectorXd b = path.knots.back().beta.to_dense();
            bool signs = true;
            for (Index j = 0; j < c.p; ++j) signs &= sign(b(j)) == sign(inst.truth.beta_true(j));
            good += signs && max_abs_diff(b, inst.truth.beta_true) < 23.0 / 6.0 * rep.lambda_u;
        }
        detail << fmt(" [n=%td p=%td T=%td sigma=%g: ", c.n, c.p, c.T, c.sigma);
        if (qualifying < 20) {
            detail << fmt("not-applicable, %d/%d seeds qualify]", qualifying, tried);
            continue;
        }
        ++applicable;
        const bool ok = good >= 18;
        passed += ok;
        detail << fmt("%d/20 sign-consistent within bound, %s]", good, ok ? "ok" : "miss");
    }
    return {applicable > 0 && passed == applicable,
            fmt("applicable=%d passed=%d;", applicable, passed) + detail.str()};
}

// 10. randomized property suites
Verdict property_suites()
{
    const int lemma = coherence_inequality_violations(500, 10001);
    const int lip = soft_threshold_lipschitz_violations(1000, 10002);
    const int newton = newton_derivative_violations(1000, 10003);
    const int cd = cd_monotonicity_violations(100, 10004);
    return {lemma + lip + newton + cd == 0,
            fmt("coherence_ineq=%d lipschitz=%d newton_derivative=%d cd_monotone=%d violations", lemma, lip, newton,
                cd)};
}

}  // namespace

int main(int argc, char** argv)
{
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"orthogonal design closed form", orthogonal_closed_form},
        {"KKT exactness at repeat stops", kkt_exactness},
        {"agreement with coordinate descent", cd_agreement},
        {"active-set update equals dense Newton step", newton_equivalence},
        {"one-step local convergence", one_step_convergence},
        {"ridge limit to the lasso solution", ridge_limit},
        {"support recovery benchmark", support_recovery},
        {"inner-iteration economy", inner_iteration_economy},
        {"sign consistency under the theory schedule", sign_consistency},
        {"property suites", property_suites},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = int(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        const auto t0 = Clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += !v.pass;
        std::printf("%s criterion %d (%s): %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first,
                    v.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
