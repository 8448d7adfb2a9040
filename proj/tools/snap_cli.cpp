// Command-line front end.
//
//   snap solve    --x X.csv --y y.csv --lambda 0.1 [--alpha 0] [--k 5] [--out beta.csv]
//   snap path     --x X.csv --y y.csv [--gamma g] [--knots 100] [--alpha 0] [--k 1]
//                 [--solver snap|cd] [--selector mbic|hbic|none] [--out path.csv] [--coef coef.csv]
//   snap simulate --sim n=200,p=1000,rho=0.1,sigma=0.01,T=5 --seed 7 --prefix out/inst
//   snap bench    --preset table1 --reps 20 --seed 1 --solver snap --selector mbic [--out metrics.csv]
//   snap check    --sim n=200,p=1000,rho=0.1,sigma=0.01,T=5 --seed 7
//
// Input CSVs are header-less decimals: X one row per line, y one value per
// line. Inputs are centered and column-normalized before solving unless
// --raw is given. Exit codes: 0 success, 1 usage or input error, 2 numerical
// failure.

#include <snap/bench.hpp>
#include <snap/io.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace snap;

struct DataArgs
{
    std::string x_path;
    std::string y_path;
    double alpha = 0.0;
    bool raw = false;

    void add(CLI::App* app)
    {
        app->add_option("--x", x_path, "design matrix CSV (n rows, p columns)")->required();
        app->add_option("--y", y_path, "response CSV (single column)")->required();
        app->add_option("--alpha", alpha, "ridge weight (0 = LASSO)")->check(CLI::NonNegativeNumber);
        app->add_flag("--raw", raw, "use X and y as given (no centering/normalization)");
    }

    Problem load() const
    {
        Eigen::MatrixXd X = io::read_matrix_csv(x_path);
        Eigen::VectorXd y = io::read_vector_csv(y_path);
        if (raw) return Problem(std::move(X), std::move(y), alpha);
        return normalize(X, y, alpha);
    }
};

std::ostream& open_or_stdout(const std::string& path, std::ofstream& file)
{
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw Error(ErrorKind::ParseError, "cannot write '" + path + "'");
    return file;
}

int exit_code_for(const Error& e)
{
    switch (e.kind()) {
        case ErrorKind::ParseError:
        case ErrorKind::InvalidArgument:
        case ErrorKind::DimensionMismatch:
        case ErrorKind::ZeroVarianceColumn:
            return 1;
        default:
            return 2;
    }
}

Criterion parse_criterion(const std::string& s)
{
    if (s == "mbic") return Criterion::MBIC;
    if (s == "hbic") return Criterion::HBIC;
    throw Error(ErrorKind::InvalidArgument, "--selector must be mbic or hbic");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Semismooth Newton path solver for LASSO / elastic net"};
    app.require_subcommand(1);

    // solve
    DataArgs solve_data;
    double solve_lambda = 0.0;
    Index solve_k = 5, solve_knots = 20;
    std::string solve_out;
    auto* solve = app.add_subcommand("solve", "solve at a single lambda via continuation from lambda_max");
    solve_data.add(solve);
    solve->add_option("--lambda", solve_lambda, "target lambda")->required()->check(CLI::PositiveNumber);
    solve->add_option("--k", solve_k, "max Newton iterations per knot")->check(CLI::PositiveNumber);
    solve->add_option("--knots", solve_knots, "continuation knots down to the target")->check(CLI::PositiveNumber);
    solve->add_option("--out", solve_out, "coefficient CSV (index,value); default stdout");

    // path
    DataArgs path_data;
    std::optional<double> path_gamma;
    Index path_knots = 100, path_k = 1;
    std::optional<Index> path_cap;
    std::string path_solver = "snap", path_selector = "mbic", path_out, path_coef;
    auto* path = app.add_subcommand("path", "compute a regularization path");
    path_data.add(path);
    path->add_option("--gamma", path_gamma, "grid ratio in (0,1); default gives lambda_min/lambda_max = 1e-3");
    path->add_option("--knots", path_knots, "number of knots (grid points)")->check(CLI::Range(2, 1000000));
    path->add_option("--k", path_k, "max Newton iterations per knot")->check(CLI::PositiveNumber);
    path->add_option("--sparsity-cap", path_cap, "stop when the active set exceeds this size (default n/2)");
    path->add_option("--solver", path_solver, "snap or cd")->check(CLI::IsMember({"snap", "cd"}));
    path->add_option("--selector", path_selector, "mbic, hbic or none")->check(CLI::IsMember({"mbic", "hbic", "none"}));
    path->add_option("--out", path_out, "path CSV; default stdout");
    path->add_option("--coef", path_coef, "sparse coefficient CSV (knot,index,value)");

    // simulate
    std::string sim_spec, sim_prefix;
    std::uint64_t sim_seed = 1;
    auto* simulate_cmd = app.add_subcommand("simulate", "generate a synthetic instance");
    simulate_cmd->add_option("--sim", sim_spec, "n=..,p=..,rho=..|nu=..,sigma=..,T=..")->required();
    simulate_cmd->add_option("--seed", sim_seed, "64-bit seed");
    simulate_cmd->add_option("--prefix", sim_prefix, "writes <prefix>_X.csv, <prefix>_y.csv, <prefix>.json")
        ->required();

    // bench
    std::string bench_preset_name, bench_sim, bench_solver = "snap", bench_selector = "mbic", bench_out;
    BenchOptions bench_opt;
    auto* bench = app.add_subcommand("bench", "replicated simulation benchmark");
    bench->add_option("--preset", bench_preset_name, "table1, table1-full, table2, fallback, converge");
    bench->add_option("--sim", bench_sim, "custom cell n=..,p=..,rho=..,sigma=..,T=..");
    bench->add_option("--reps", bench_opt.replications, "replications per cell")->check(CLI::PositiveNumber);
    bench->add_option("--seed", bench_opt.base_seed, "base seed");
    bench->add_option("--solver", bench_solver, "snap or cd")->check(CLI::IsMember({"snap", "cd"}));
    bench->add_option("--selector", bench_selector, "mbic or hbic")->check(CLI::IsMember({"mbic", "hbic"}));
    bench->add_option("--knots", bench_opt.num_knots, "grid index N (N+1 knots)")->check(CLI::PositiveNumber);
    bench->add_option("--k", bench_opt.max_inner, "max Newton iterations per knot")->check(CLI::PositiveNumber);
    bench->add_option("--alpha", bench_opt.alpha, "ridge weight")->check(CLI::NonNegativeNumber);
    bench->add_option("--out", bench_out, "metrics CSV; default stdout");

    // check
    std::string check_sim;
    std::uint64_t check_seed = 1;
    auto* check = app.add_subcommand("check", "coherence / signal-strength report as JSON");
    check->add_option("--sim", check_sim, "n=..,p=..,rho=..|nu=..,sigma=..,T=..")->required();
    check->add_option("--seed", check_seed, "64-bit seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*solve) {
            const Problem prob = solve_data.load();
            PathConfig<double> cfg;
            const double l0 = default_lambda0(prob);
            Eigen::VectorXd beta = Eigen::VectorXd::Zero(prob.p());
            Index iters = 0;
            if (solve_lambda < l0) {
                cfg.num_knots = std::max<Index>(1, solve_knots - 1);
                cfg.gamma = std::pow(solve_lambda / l0, 1.0 / static_cast<double>(cfg.num_knots));
                cfg.max_inner = solve_k;
                cfg.sparsity_cap = prob.p();
                const PathResult<double> res = snap_run(prob, cfg);
                beta = res.knots.back().beta.to_dense();
                iters = res.knots.back().inner_iterations;
                std::cerr << "lambda=" << res.knots.back().lambda
                          << " stop=" << to_string(res.knots.back().stop_reason) << '\n';
            }
            std::ofstream file;
            std::ostream& os = open_or_stdout(solve_out, file);
            os.precision(17);
            os << "#schema=1\nindex,value\n";
            for (Index j = 0; j < beta.size(); ++j) {
                if (beta(j) != 0.0) os << j << ',' << beta(j) << '\n';
            }
            std::cerr << "nnz=" << (beta.array() != 0.0).count() << " inner_iters=" << iters
                      << " objective=" << objective(prob, beta, solve_lambda) << '\n';
        } else if (*path) {
            const Problem prob = path_data.load();
            PathConfig<double> cfg;
            cfg.num_knots = path_knots - 1;
            cfg.gamma = path_gamma ? *path_gamma : PathConfig<double>::gamma_for_ratio(cfg.num_knots);
            cfg.max_inner = path_k;
            cfg.sparsity_cap = path_cap;
            const PathResult<double> res = path_solver == "snap" ? snap_run(prob, cfg) : cd_path(prob, cfg);
            std::ofstream file;
            std::ostream& os = open_or_stdout(path_out, file);
            write_path_csv(os, res);
            if (path_selector != "none" && !res.knots.empty()) {
                write_selector_row(os, select(prob, res, parse_criterion(path_selector)));
            }
            if (!path_coef.empty()) {
                std::ofstream coef(path_coef);
                if (!coef) throw Error(ErrorKind::ParseError, "cannot write '" + path_coef + "'");
                write_coefficients_csv(coef, res);
            }
            std::cerr << "knots=" << res.size() << " time_s=" << res.wall_time_s;
            if (res.terminated_at) std::cerr << " sparsity_cap_at=" << *res.terminated_at;
            std::cerr << '\n';
        } else if (*simulate_cmd) {
            SimConfig cfg = parse_sim_spec(sim_spec);
            cfg.seed = sim_seed;
            const SimInstance inst = simulate(cfg);
            io::write_matrix_csv(sim_prefix + "_X.csv", inst.problem.X());
            io::write_vector_csv(sim_prefix + "_y.csv", inst.problem.y());
            std::ofstream side(sim_prefix + ".json");
            if (!side) throw Error(ErrorKind::ParseError, "cannot write '" + sim_prefix + ".json'");
            side << io::instance_sidecar(inst).dump(2) << '\n';
        } else if (*bench) {
            std::vector<SimConfig> grid;
            if (!bench_preset_name.empty()) grid = bench_preset(bench_preset_name);
            if (!bench_sim.empty()) grid.push_back(parse_sim_spec(bench_sim));
            if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "bench needs --preset or --sim");
            bench_opt.solver = bench_solver == "snap" ? SolverKind::SNAP : SolverKind::CDPATH;
            bench_opt.selector = parse_criterion(bench_selector);
            const auto table = run_benchmark(grid, bench_opt);
            std::ofstream file;
            write_metrics_csv(open_or_stdout(bench_out, file), table, bench_opt);
        } else if (*check) {
            SimConfig cfg = parse_sim_spec(check_sim);
            cfg.seed = check_seed;
            const SimInstance inst = simulate(cfg);
            nlohmann::json out = io::to_json(theory_check(inst.problem, inst.truth));
            out["config"] = io::to_json(cfg);
            std::cout << out.dump(2) << '\n';
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
