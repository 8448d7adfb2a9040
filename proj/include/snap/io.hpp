#pragma once

#include <snap/datagen.hpp>

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace snap::io {

/**
 * Header-less CSV of decimals, one matrix row per line. Blank lines and
 * lines starting with '#' are skipped. Ragged rows and unparsable cells
 * raise ParseError with the 1-based line number.
 */
Eigen::MatrixXd read_matrix_csv(std::istream& in);
Eigen::MatrixXd read_matrix_csv(const std::string& path);

/// Single-column CSV (one value per line).
Eigen::VectorXd read_vector_csv(std::istream& in);
Eigen::VectorXd read_vector_csv(const std::string& path);

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& X);
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& X);
void write_vector_csv(std::ostream& out, const Eigen::VectorXd& v);
void write_vector_csv(const std::string& path, const Eigen::VectorXd& v);

nlohmann::json to_json(const SimConfig& cfg);
SimConfig sim_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TruthModel& truth);
TruthModel truth_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TheoryReport& report);

/// Instance sidecar: {"schema": 1, "config": ..., "truth": ...}.
nlohmann::json instance_sidecar(const SimInstance& inst);

}  // namespace snap::io
