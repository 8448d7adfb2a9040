#include <snap/datagen.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace snap {

void SimConfig::validate() const
{
    if (n < 2 || p < 1) throw Error(ErrorKind::InvalidArgument, "simulation needs n >= 2 and p >= 1");
    if (T < 0 || T > p) throw Error(ErrorKind::InvalidArgument, "sparsity T must lie in [0, p]");
    if (!(sigma >= 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma must be >= 0");
    if (design.kind == Design::Kind::Classical && !(design.param > 0.0 && design.param < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "rho must lie in (0, 1)");
    }
    if (design.kind == Design::Kind::AutoCorr && !(design.param >= 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "auto-correlation nu must be >= 0");
    }
}

namespace {

void center_and_scale(Eigen::MatrixXd& X)
{
    const double root_n = std::sqrt(static_cast<double>(X.rows()));
    for (Index j = 0; j < X.cols(); ++j) {
        auto col = X.col(j);
        col.array() -= col.mean();
        const double norm = col.norm();
        if (!(norm > 0.0)) throw Error(ErrorKind::ZeroVarianceColumn, "generated column is constant", j);
        col *= root_n / norm;
    }
}

}  // namespace

Eigen::MatrixXd gen_classical(const SimConfig& config)
{
    const double rho = config.design.param;
    const double tail = std::sqrt(1.0 - rho * rho);
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(Stream::Design)));
    Eigen::MatrixXd X(config.n, config.p);
    for (Index i = 0; i < config.n; ++i) {
        double prev = rng.normal();
        X(i, 0) = prev;
        for (Index j = 1; j < config.p; ++j) {
            prev = rho * prev + tail * rng.normal();
            X(i, j) = prev;
        }
    }
    return X;
}

Eigen::MatrixXd gen_autocorr(const SimConfig& config)
{
    const double nu = config.design.param;
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(Stream::Design)));
    Eigen::MatrixXd Z(config.n, config.p);
    for (Index j = 0; j < config.p; ++j) {
        for (Index i = 0; i < config.n; ++i) Z(i, j) = rng.normal();
    }
    Eigen::MatrixXd X = Z;
    for (Index j = 1; j + 1 < config.p; ++j) {
        X.col(j) += nu * (Z.col(j - 1) + Z.col(j + 1));
    }
    return X;
}

Eigen::MatrixXd gen_design(const SimConfig& config)
{
    config.validate();
    Eigen::MatrixXd X = config.design.kind == Design::Kind::Classical ? gen_classical(config) : gen_autocorr(config);
    if (config.normalize_after) center_and_scale(X);
    return X;
}

TruthModel gen_beta(Index p, Index T, std::uint64_t seed)
{
    if (T < 0 || T > p) throw Error(ErrorKind::InvalidArgument, "sparsity T must lie in [0, p]");
    Rng rng(seed);
    // partial Fisher-Yates: the first T slots are a uniform T-subset
    std::vector<Index> perm(static_cast<std::size_t>(p));
    for (Index j = 0; j < p; ++j) perm[static_cast<std::size_t>(j)] = j;
    for (Index k = 0; k < T; ++k) {
        const auto pick = k + static_cast<Index>(rng.below(static_cast<std::uint64_t>(p - k)));
        std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(pick)]);
    }
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    for (Index k = 0; k < T; ++k) {
        const int s = rng.coin();
        const double magnitude = std::pow(10.0, rng.uniform());
        beta(perm[static_cast<std::size_t>(k)]) = s * magnitude;
    }
    return TruthModel::from_beta(std::move(beta), 0.0);
}

Eigen::VectorXd gen_response(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta_true, double sigma,
                             std::uint64_t seed)
{
    if (beta_true.size() != X.cols()) throw Error(ErrorKind::DimensionMismatch, "beta length != columns");
    if (!(sigma >= 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma must be >= 0");
    Eigen::VectorXd y = Eigen::VectorXd::Zero(X.rows());
    for (Index j = 0; j < beta_true.size(); ++j) {
        if (beta_true(j) != 0.0) y.noalias() += beta_true(j) * X.col(j);
    }
    if (sigma > 0.0) {
        Rng rng(seed);
        for (Index i = 0; i < y.size(); ++i) y(i) += sigma * rng.normal();
    }
    return y;
}

SimInstance simulate(const SimConfig& config)
{
    config.validate();
    Eigen::MatrixXd X = gen_design(config);
    TruthModel truth = gen_beta(config.p, config.T,
                                derive_seed(config.seed, static_cast<std::uint64_t>(Stream::Coefficients)));
    truth.sigma = config.sigma;
    Eigen::VectorXd y = gen_response(X, truth.beta_true, config.sigma,
                                     derive_seed(config.seed, static_cast<std::uint64_t>(Stream::Noise)));
    Problem prob = config.normalize_after ? normalize(X, y) : Problem(std::move(X), std::move(y));
    return SimInstance{std::move(prob), std::move(truth), config};
}

double mutual_coherence(const Problem& prob, bool force)
{
    const Index p = prob.p();
    if (p > 5000 && !force) {
        throw Error(ErrorKind::OutOfMemory, "mutual coherence is O(p^2 n); p > 5000 needs force");
    }
    const auto& X = prob.X();
    double best = 0.0;
    for (Index i = 0; i < p; ++i) {
        for (Index j = i + 1; j < p; ++j) {
            best = std::max(best, std::abs(X.col(i).dot(X.col(j))));
        }
    }
    return best / static_cast<double>(prob.n());
}

TheoryReport theory_check(const Problem& prob, const TruthModel& truth)
{
    if (truth.beta_true.size() != prob.p()) throw Error(ErrorKind::DimensionMismatch, "truth length != p");
    TheoryReport r;
    r.coherence = mutual_coherence(prob);
    r.t_nu = static_cast<double>(truth.sparsity()) * r.coherence;
    r.a1_holds = r.t_nu <= 0.25;
    r.lambda_u = truth.sigma * std::sqrt(2.0 * std::log(static_cast<double>(prob.p())) / static_cast<double>(prob.n()));
    r.delta_u = 3.0 * r.lambda_u;
    r.beta_min = truth.sparsity() > 0 ? truth.beta_min() : 0.0;
    r.a2_holds = truth.sparsity() > 0 && r.beta_min >= 78.0 * r.lambda_u;
    if (truth.sigma > 0.0) {
        try {
            r.n_theorem6 = theorem6_schedule(prob, truth.sigma).num_knots;
        } catch (const Error&) {
            r.n_theorem6.reset();
        }
    }
    return r;
}

SimConfig parse_sim_spec(const std::string& spec)
{
    SimConfig cfg;
    bool have_design = false;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        try {
            if (key == "n") cfg.n = std::stol(val);
            else if (key == "p") cfg.p = std::stol(val);
            else if (key == "T") cfg.T = std::stol(val);
            else if (key == "sigma") cfg.sigma = std::stod(val);
            else if (key == "rho") { cfg.design = Design::classical(std::stod(val)); have_design = true; }
            else if (key == "nu") { cfg.design = Design::autocorr(std::stod(val)); have_design = true; }
            else if (key == "seed") cfg.seed = std::stoull(val);
            else throw Error(ErrorKind::ParseError, "unknown simulation key '" + key + "'");
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::ParseError, "bad value for '" + key + "': '" + val + "'");
        }
    }
    if (!have_design) throw Error(ErrorKind::ParseError, "simulation spec needs rho= or nu=");
    cfg.validate();
    return cfg;
}

}  // namespace snap
