#pragma once

#include <snap/cd.hpp>
#include <snap/datagen.hpp>
#include <snap/selectors.hpp>

#include <iosfwd>
#include <string>

namespace snap {

/// Single-replication accuracy of an estimate against the truth.
struct ReplicationMetrics
{
    Index ms = 0;          // |supp(beta_hat)|
    bool correct = false;  // supp(beta_hat) == A_true
    bool contains = false; // A_true subset of supp(beta_hat)
    double ae = 0.0;       // ||beta_hat - beta_true||_inf
    double re = 0.0;       // ||beta_hat - beta_true||_2 / ||beta_true||_2
};

/// Throws ZeroTruth when beta_true = 0 (relative error undefined).
ReplicationMetrics metrics(const Eigen::VectorXd& beta_hat, const TruthModel& truth, double support_threshold = 0.0);

enum class SolverKind { SNAP, CDPATH };

/**
 * Aggregates over replications. Spreads are sample standard deviations
 * (M - 1 denominator), the figure reported in parentheses alongside the
 * means in the usual simulation tables.
 */
struct MetricsRecord
{
    SimConfig cell;
    Index replications = 0;  // M requested
    Index failures = 0;
    double time_s = 0.0, time_sd = 0.0;
    double ms = 0.0, ms_sd = 0.0;
    double cm = 0.0, cm_sd = 0.0;
    double ae = 0.0, ae_sd = 0.0;
    double re = 0.0, re_sd = 0.0;
    double contain = 0.0;  // fraction with A_true subset of the selected support
    double median_inner = 0.0;
};

struct BenchOptions
{
    SolverKind solver = SolverKind::SNAP;
    Criterion selector = Criterion::MBIC;
    Index replications = 20;
    std::uint64_t base_seed = 1;
    Index num_knots = 100;
    Index max_inner = 1;
    double lambda_ratio = 1e-3;  // lambda_N / lambda_0
    double alpha = 0.0;
    double cd_tol = 1e-7;
};

/// Path configuration the benchmark uses for one instance.
PathConfig<double> bench_path_config(const BenchOptions& opt);

/// One replication: path + selection on an instance, timing path and selection only.
struct ReplicationOutcome
{
    ReplicationMetrics metrics;
    double time_s = 0.0;
    Index chosen_knot = 0;
    double chosen_lambda = 0.0;
    std::vector<Index> inner_iterations;
    std::vector<IndexSet> supports;  // per knot
    Eigen::VectorXd beta_hat;
};

ReplicationOutcome run_replication(const SimInstance& inst, const BenchOptions& opt);

/// Seed of replication m in grid cell `cell`.
std::uint64_t replication_seed(std::uint64_t base_seed, Index cell, Index m);

std::vector<MetricsRecord> run_benchmark(const std::vector<SimConfig>& grid, const BenchOptions& opt);

/// Named grids: "table1", "table1-full", "fallback", "converge".
std::vector<SimConfig> bench_preset(const std::string& name);

void write_metrics_csv(std::ostream& os, const std::vector<MetricsRecord>& table, const BenchOptions& opt);

}  // namespace snap
