#include <snap/bench.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

namespace snap {

ReplicationMetrics metrics(const Eigen::VectorXd& beta_hat, const TruthModel& truth, double support_threshold)
{
    if (beta_hat.size() != truth.beta_true.size()) {
        throw Error(ErrorKind::DimensionMismatch, "estimate and truth differ in length");
    }
    const double truth_norm = truth.beta_true.norm();
    if (truth_norm == 0.0) throw Error(ErrorKind::ZeroTruth, "relative error undefined for a zero truth");

    ReplicationMetrics m;
    IndexSet support;
    for (Index j = 0; j < beta_hat.size(); ++j) {
        if (std::abs(beta_hat(j)) > support_threshold) support.push_back(j);
    }
    m.ms = static_cast<Index>(support.size());
    m.correct = support == truth.support;
    m.contains = std::includes(support.begin(), support.end(), truth.support.begin(), truth.support.end());
    const Eigen::VectorXd diff = beta_hat - truth.beta_true;
    m.ae = diff.lpNorm<Eigen::Infinity>();
    m.re = diff.norm() / truth_norm;
    return m;
}

PathConfig<double> bench_path_config(const BenchOptions& opt)
{
    PathConfig<double> cfg;
    cfg.num_knots = opt.num_knots;
    cfg.gamma = PathConfig<double>::gamma_for_ratio(opt.num_knots, opt.lambda_ratio);
    cfg.max_inner = opt.max_inner;
    cfg.cd_tol = opt.cd_tol;
    return cfg;
}

ReplicationOutcome run_replication(const SimInstance& inst, const BenchOptions& opt)
{
    const Problem prob = opt.alpha > 0.0 ? inst.problem.with_alpha(opt.alpha) : inst.problem;
    const PathConfig<double> cfg = bench_path_config(opt);

    const auto start = std::chrono::steady_clock::now();
    const PathResult<double> path = opt.solver == SolverKind::SNAP ? snap_run(prob, cfg) : cd_path(prob, cfg);
    if (path.knots.empty()) throw Error(ErrorKind::InvalidArgument, "path produced no knots");
    const SelectorResult<double> sel = select(prob, path, opt.selector);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    ReplicationOutcome out;
    out.time_s = elapsed;
    out.chosen_knot = sel.chosen_knot;
    out.chosen_lambda = sel.chosen_lambda;
    out.beta_hat = path.knots[static_cast<std::size_t>(sel.chosen_knot)].beta.to_dense();
    out.metrics = metrics(out.beta_hat, inst.truth, path.support_threshold);
    for (const auto& k : path.knots) {
        out.inner_iterations.push_back(k.inner_iterations);
        IndexSet s;
        for (std::size_t i = 0; i < k.beta.index.size(); ++i) {
            if (std::abs(k.beta.value[i]) > path.support_threshold) s.push_back(k.beta.index[i]);
        }
        out.supports.push_back(std::move(s));
    }
    return out;
}

std::uint64_t replication_seed(std::uint64_t base_seed, Index cell, Index m)
{
    return derive_seed(base_seed, 0x62656e6368ULL, static_cast<std::uint64_t>(cell), static_cast<std::uint64_t>(m));
}

namespace {

// Compensated running sums for mean and spread.
class Accumulator
{
public:
    void add(double x)
    {
        kahan(sum_, comp_, x);
        kahan(sq_, sq_comp_, x * x);
        ++count_;
    }

    double mean() const { return count_ ? sum_ / static_cast<double>(count_) : NAN; }

    double sd() const
    {
        if (count_ < 2) return 0.0;
        const double c = static_cast<double>(count_);
        const double var = (sq_ - sum_ * sum_ / c) / (c - 1.0);
        return std::sqrt(std::max(var, 0.0));
    }

private:
    static void kahan(double& sum, double& comp, double x)
    {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }

    double sum_ = 0.0, comp_ = 0.0, sq_ = 0.0, sq_comp_ = 0.0;
    Index count_ = 0;
};

double median(std::vector<Index> v)
{
    if (v.empty()) return NAN;
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? static_cast<double>(v[h]) : 0.5 * static_cast<double>(v[h - 1] + v[h]);
}

}  // namespace

std::vector<MetricsRecord> run_benchmark(const std::vector<SimConfig>& grid, const BenchOptions& opt)
{
    if (opt.replications < 1) throw Error(ErrorKind::InvalidArgument, "replications must be >= 1");
    std::vector<MetricsRecord> table;
    for (std::size_t c = 0; c < grid.size(); ++c) {
        MetricsRecord rec;
        rec.cell = grid[c];
        rec.replications = opt.replications;
        Accumulator time, ms, cm, ae, re, contain;
        std::vector<Index> inner;
        for (Index m = 0; m < opt.replications; ++m) {
            SimConfig cfg = grid[c];
            cfg.seed = replication_seed(opt.base_seed, static_cast<Index>(c), m);
            try {
                const SimInstance inst = simulate(cfg);
                const ReplicationOutcome r = run_replication(inst, opt);
                time.add(r.time_s);
                ms.add(static_cast<double>(r.metrics.ms));
                cm.add(r.metrics.correct ? 1.0 : 0.0);
                ae.add(r.metrics.ae);
                re.add(r.metrics.re);
                contain.add(r.metrics.contains ? 1.0 : 0.0);
                inner.insert(inner.end(), r.inner_iterations.begin(), r.inner_iterations.end());
            } catch (const Error&) {
                ++rec.failures;
            }
        }
        rec.time_s = time.mean();
        rec.time_sd = time.sd();
        rec.ms = ms.mean();
        rec.ms_sd = ms.sd();
        rec.cm = cm.mean();
        rec.cm_sd = cm.sd();
        rec.ae = ae.mean();
        rec.ae_sd = ae.sd();
        rec.re = re.mean();
        rec.re_sd = re.sd();
        rec.contain = contain.mean();
        rec.median_inner = median(std::move(inner));
        table.push_back(rec);
    }
    return table;
}

std::vector<SimConfig> bench_preset(const std::string& name)
{
    auto cell = [](Index n, Index p, Design d, double sigma, Index T) {
        SimConfig c;
        c.n = n;
        c.p = p;
        c.design = d;
        c.sigma = sigma;
        c.T = T;
        return c;
    };
    if (name == "table1") return {cell(600, 3000, Design::classical(0.3), 0.2, 40)};
    if (name == "table1-full") {
        std::vector<SimConfig> grid;
        for (double rho : {0.3, 0.5, 0.7}) {
            for (double sigma : {0.2, 0.4}) grid.push_back(cell(600, 3000, Design::classical(rho), sigma, 40));
        }
        return grid;
    }
    if (name == "table2") {
        std::vector<SimConfig> grid;
        for (double nu : {0.3, 0.5, 0.7}) {
            for (double sigma : {0.2, 0.4}) grid.push_back(cell(1000, 10000, Design::autocorr(nu), sigma, 50));
        }
        return grid;
    }
    if (name == "fallback") return {cell(200, 1000, Design::classical(0.1), 0.01, 5)};
    if (name == "converge") return {cell(400, 2000, Design::classical(0.5), 0.1, 10)};
    throw Error(ErrorKind::InvalidArgument, "unknown preset '" + name + "'");
}

void write_metrics_csv(std::ostream& os, const std::vector<MetricsRecord>& table, const BenchOptions& opt)
{
    os << "#schema=1\n";
    os << "n,p,design,corr,sigma,T,solver,selector,M,failures,time_s,time_sd,ms,ms_sd,cm,cm_sd,ae,ae_sd,re,re_sd,"
          "median_inner\n";
    os.precision(10);
    for (const auto& r : table) {
        os << r.cell.n << ',' << r.cell.p << ','
           << (r.cell.design.kind == Design::Kind::Classical ? "classical" : "autocorr") << ','
           << r.cell.design.param << ',' << r.cell.sigma << ',' << r.cell.T << ','
           << (opt.solver == SolverKind::SNAP ? "snap" : "cd") << ',' << to_string(opt.selector) << ','
           << r.replications << ',' << r.failures << ',' << r.time_s << ',' << r.time_sd << ',' << r.ms << ','
           << r.ms_sd << ',' << r.cm << ',' << r.cm_sd << ',' << r.ae << ',' << r.ae_sd << ',' << r.re << ','
           << r.re_sd << ',' << r.median_inner << '\n';
    }
}

}  // namespace snap
