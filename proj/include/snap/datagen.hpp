#pragma once

#include <snap/path.hpp>
#include <snap/random.hpp>

#include <string>

namespace snap {

/// Column correlation model of a simulated design.
struct Design
{
    enum class Kind { Classical, AutoCorr };

    Kind kind = Kind::Classical;
    double param = 0.0;  // rho for Classical, stencil weight for AutoCorr

    static Design classical(double rho) { return {Kind::Classical, rho}; }
    static Design autocorr(double nu) { return {Kind::AutoCorr, nu}; }
};

struct SimConfig
{
    Index n = 100;
    Index p = 200;
    Design design;
    double sigma = 0.1;
    Index T = 5;
    std::uint64_t seed = 0;
    bool normalize_after = true;

    void validate() const;
};

/// A generated instance: normalized problem plus the truth behind it.
struct SimInstance
{
    Problem problem;
    TruthModel truth;
    SimConfig config;
};

/**
 * Rows i.i.d. N(0, Sigma), Sigma_jk = rho^|j-k|, via the AR(1) recursion
 * x_1 = e_1, x_j = rho x_{j-1} + sqrt(1 - rho^2) e_j. Draws come from the
 * Design substream of `config.seed`, row by row.
 */
Eigen::MatrixXd gen_classical(const SimConfig& config);

/**
 * X_j = Z_j + nu (Z_{j-1} + Z_{j+1}) for interior columns, boundary columns
 * copied from Z, with Z i.i.d. N(0, 1) filled column by column.
 */
Eigen::MatrixXd gen_autocorr(const SimConfig& config);

/// Dispatches on config.design; centers and rescales columns when normalize_after.
Eigen::MatrixXd gen_design(const SimConfig& config);

/**
 * Random support of size T (uniform T-subset) with entries
 * xi_1 10^{xi_2}, xi_1 = +-1 fair, xi_2 ~ U[0, 1]. `sigma` is left at 0.
 */
TruthModel gen_beta(Index p, Index T, std::uint64_t seed);

/// y = X beta + eta with eta_i i.i.d. N(0, sigma^2).
Eigen::VectorXd gen_response(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta_true, double sigma,
                             std::uint64_t seed);

/**
 * Full instance: design, truth and response from the three substreams of
 * config.seed, then centering/normalization of (X, y).
 */
SimInstance simulate(const SimConfig& config);

/// max_{i != j} |X_i'X_j| / n. Guarded to p <= 5000 unless forced.
double mutual_coherence(const Problem& prob, bool force = false);

struct TheoryReport
{
    double coherence = 0.0;
    double t_nu = 0.0;
    bool a1_holds = false;  // T nu <= 1/4
    double lambda_u = 0.0;
    double delta_u = 0.0;
    double beta_min = 0.0;
    bool a2_holds = false;  // beta_min >= 78 lambda_u
    std::optional<Index> n_theorem6;
};

TheoryReport theory_check(const Problem& prob, const TruthModel& truth);

/// Parses "n=200,p=1000,rho=0.1,sigma=0.01,T=5" (or nu= for AutoCorr).
SimConfig parse_sim_spec(const std::string& spec);

}  // namespace snap
