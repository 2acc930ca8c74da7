#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsefs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Error taxonomy. config_error covers invalid parameters and bad usage
// (CLI exit code 2); the others are runtime/numerical failures (exit code 1).
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct shape_error : error {
  using error::error;
};

struct config_error : error {
  using error::error;
};

struct numeric_error : error {
  using error::error;
};

struct parse_error : error {
  parse_error(const std::string& msg, std::size_t line, std::size_t column)
      : error(msg + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line(line),
        column(column) {}
  std::size_t line;
  std::size_t column;
};

// Feature-major data matrix: rows are features, columns are samples.
struct DataMatrix {
  Matrix values;
  bool centered = false;
  std::vector<std::string> feature_ids{};  // optional, one per row when set

  Index d() const { return values.rows(); }
  Index n() const { return values.cols(); }
};

// Hard cluster assignment for n samples, labels in 0..c-1.
struct ClusterLabels {
  std::vector<int> labels;
  int c = 0;

  std::size_t n() const { return labels.size(); }
};

}  // namespace sparsefs
