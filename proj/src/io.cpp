#include <snap/io.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace snap::io {

namespace {

std::ifstream open_in(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
    return in;
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::ParseError, "cannot write '" + path + "'");
    return out;
}

double parse_cell(std::string_view cell, Index line)
{
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r')) cell.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": bad number '" + std::string(cell) + "'",
                    line);
    }
    return v;
}

}  // namespace

Eigen::MatrixXd read_matrix_csv(std::istream& in)
{
    std::vector<double> values;
    Index cols = -1, rows = 0, line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line.front() == '#') continue;
        Index count = 0;
        std::string_view rest(line);
        while (true) {
            const auto comma = rest.find(',');
            values.push_back(parse_cell(rest.substr(0, comma), line_no));
            ++count;
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (cols < 0) cols = count;
        if (count != cols) {
            throw Error(ErrorKind::ParseError,
                        "line " + std::to_string(line_no) + ": expected " + std::to_string(cols) + " columns, got " +
                            std::to_string(count),
                        line_no);
        }
        ++rows;
    }
    if (rows == 0) throw Error(ErrorKind::ParseError, "no data rows");
    Eigen::MatrixXd X(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) X(i, j) = values[static_cast<std::size_t>(i * cols + j)];
    }
    return X;
}

Eigen::MatrixXd read_matrix_csv(const std::string& path)
{
    auto in = open_in(path);
    return read_matrix_csv(in);
}

Eigen::VectorXd read_vector_csv(std::istream& in)
{
    const Eigen::MatrixXd m = read_matrix_csv(in);
    if (m.cols() != 1) throw Error(ErrorKind::ParseError, "response file must have a single column");
    return m.col(0);
}

Eigen::VectorXd read_vector_csv(const std::string& path)
{
    auto in = open_in(path);
    return read_vector_csv(in);
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& X)
{
    out.precision(17);
    for (Index i = 0; i < X.rows(); ++i) {
        for (Index j = 0; j < X.cols(); ++j) {
            if (j) out << ',';
            out << X(i, j);
        }
        out << '\n';
    }
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& X)
{
    auto out = open_out(path);
    write_matrix_csv(out, X);
}

void write_vector_csv(std::ostream& out, const Eigen::VectorXd& v)
{
    out.precision(17);
    for (Index i = 0; i < v.size(); ++i) out << v(i) << '\n';
}

void write_vector_csv(const std::string& path, const Eigen::VectorXd& v)
{
    auto out = open_out(path);
    write_vector_csv(out, v);
}

nlohmann::json to_json(const SimConfig& cfg)
{
    nlohmann::json j;
    j["n"] = cfg.n;
    j["p"] = cfg.p;
    j["design"] = cfg.design.kind == Design::Kind::Classical ? "classical" : "autocorr";
    j[cfg.design.kind == Design::Kind::Classical ? "rho" : "nu"] = cfg.design.param;
    j["sigma"] = cfg.sigma;
    j["T"] = cfg.T;
    j["seed"] = cfg.seed;
    j["normalize_after"] = cfg.normalize_after;
    return j;
}

SimConfig sim_config_from_json(const nlohmann::json& j)
{
    try {
        SimConfig cfg;
        cfg.n = j.at("n").get<Index>();
        cfg.p = j.at("p").get<Index>();
        const auto kind = j.at("design").get<std::string>();
        if (kind == "classical") cfg.design = Design::classical(j.at("rho").get<double>());
        else if (kind == "autocorr") cfg.design = Design::autocorr(j.at("nu").get<double>());
        else throw Error(ErrorKind::ParseError, "unknown design '" + kind + "'");
        cfg.sigma = j.at("sigma").get<double>();
        cfg.T = j.at("T").get<Index>();
        cfg.seed = j.at("seed").get<std::uint64_t>();
        cfg.normalize_after = j.value("normalize_after", true);
        cfg.validate();
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
}

nlohmann::json to_json(const TruthModel& truth)
{
    nlohmann::json j;
    j["p"] = truth.beta_true.size();
    j["sigma"] = truth.sigma;
    j["T"] = truth.sparsity();
    j["range"] = truth.range();
    nlohmann::json support = nlohmann::json::array(), values = nlohmann::json::array();
    for (Index k : truth.support) {
        support.push_back(k);
        values.push_back(truth.beta_true(k));
    }
    j["support"] = support;
    j["values"] = values;
    return j;
}

TruthModel truth_from_json(const nlohmann::json& j)
{
    try {
        const auto p = j.at("p").get<Index>();
        const auto support = j.at("support").get<std::vector<Index>>();
        const auto values = j.at("values").get<std::vector<double>>();
        if (support.size() != values.size()) throw Error(ErrorKind::ParseError, "support/values length mismatch");
        Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
        for (std::size_t k = 0; k < support.size(); ++k) {
            if (support[k] < 0 || support[k] >= p) throw Error(ErrorKind::ParseError, "support index out of range");
            beta(support[k]) = values[k];
        }
        return TruthModel::from_beta(std::move(beta), j.at("sigma").get<double>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
}

nlohmann::json to_json(const TheoryReport& r)
{
    nlohmann::json j;
    j["coherence"] = r.coherence;
    j["T_nu"] = r.t_nu;
    j["a1_holds"] = r.a1_holds;
    j["lambda_u"] = r.lambda_u;
    j["delta_u"] = r.delta_u;
    j["beta_min"] = r.beta_min;
    j["a2_holds"] = r.a2_holds;
    j["N_theorem6"] = r.n_theorem6 ? nlohmann::json(*r.n_theorem6) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json instance_sidecar(const SimInstance& inst)
{
    return {{"schema", 1}, {"config", to_json(inst.config)}, {"truth", to_json(inst.truth)}};
}

}  // namespace snap::io
