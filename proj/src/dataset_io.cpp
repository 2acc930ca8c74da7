#include "sparsefs/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sparsefs {

namespace {

std::string_view trim(std::string_view sv) {
  while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t')) {
    sv.remove_prefix(1);
  }
  while (!sv.empty() && (sv.back() == ' ' || sv.back() == '\t')) {
    sv.remove_suffix(1);
  }
  return sv;
}

bool parse_cell(std::string_view cell, double& out) {
  cell = trim(cell);
  if (cell.empty()) return false;
  const char* first = cell.data();
  const char* last = first + cell.size();
  const auto [p, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && p == last;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return cells;
}

int label_from_cell(double value, std::size_t line, std::size_t column) {
  const double rounded = std::round(value);
  if (std::abs(value - rounded) > 1e-9 || std::abs(rounded) > 1e9) {
    throw parse_error("label is not an integer", line, column);
  }
  return static_cast<int>(rounded);
}

ClusterLabels relabel(const std::vector<int>& raw) {
  std::map<int, int> remap;
  for (int value : raw) {
    remap.emplace(value, 0);
  }
  int next = 0;
  for (auto& [value, id] : remap) {
    id = next++;
  }
  ClusterLabels out;
  out.c = next;
  out.labels.reserve(raw.size());
  for (int value : raw) {
    out.labels.push_back(remap.at(value));
  }
  return out;
}

}  // namespace

Dataset load_csv(const std::string& path, bool has_labels,
                 SampleLayout samples_as) {
  std::ifstream file(path);
  if (!file) {
    throw error("load_csv: cannot open '" + path + "' for reading");
  }

  std::vector<std::string> lines;
  std::string line;
  while (std::getline(file, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && trim(lines.back()).empty()) {
    lines.pop_back();
  }
  if (lines.empty()) {
    throw parse_error("empty dataset file '" + path + "'", 1, 1);
  }

  // A non-numeric first row is a header.
  std::vector<std::string> header;
  std::size_t data_start = 0;
  {
    const auto cells = split_line(lines[0]);
    double ignored;
    const bool numeric = std::all_of(
        cells.begin(), cells.end(),
        [&ignored](const std::string& c) { return parse_cell(c, ignored); });
    if (!numeric) {
      header = cells;
      data_start = 1;
    }
  }
  if (data_start >= lines.size()) {
    throw parse_error("no data rows after the header", data_start + 1, 1);
  }

  std::vector<std::vector<double>> table;
  std::size_t width = 0;
  for (std::size_t li = data_start; li < lines.size(); ++li) {
    const std::size_t file_line = li + 1;
    const auto cells = split_line(lines[li]);
    if (width == 0) {
      width = cells.size();
    } else if (cells.size() != width) {
      throw parse_error("ragged row: expected " + std::to_string(width) +
                            " cells, got " + std::to_string(cells.size()),
                        file_line, 1);
    }
    std::vector<double> row(cells.size());
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
      if (!parse_cell(cells[ci], row[ci])) {
        throw parse_error(
            "cell '" + std::string(trim(cells[ci])) + "' is not numeric",
            file_line, ci + 1);
      }
    }
    table.push_back(std::move(row));
  }

  const std::size_t rows = table.size();
  const std::size_t cols = width;
  Dataset dataset;
  std::vector<int> raw_labels;

  if (samples_as == SampleLayout::rows) {
    const std::size_t label_cols = has_labels ? 1 : 0;
    if (cols < 1 + label_cols) {
      throw parse_error("need at least one feature column", data_start + 1, 1);
    }
    const std::size_t d = cols - label_cols;
    Matrix X(static_cast<Index>(d), static_cast<Index>(rows));
    for (std::size_t s = 0; s < rows; ++s) {
      for (std::size_t f = 0; f < d; ++f) {
        X(static_cast<Index>(f), static_cast<Index>(s)) = table[s][f];
      }
      if (has_labels) {
        raw_labels.push_back(
            label_from_cell(table[s][cols - 1], data_start + s + 1, cols));
      }
    }
    dataset.X.values = std::move(X);
    if (!header.empty()) {
      dataset.X.feature_ids.assign(header.begin(),
                                   header.begin() + static_cast<long>(d));
    }
  } else {
    const std::size_t label_rows = has_labels ? 1 : 0;
    if (rows < 1 + label_rows) {
      throw parse_error("need at least one feature row", data_start + 1, 1);
    }
    const std::size_t d = rows - label_rows;
    Matrix X(static_cast<Index>(d), static_cast<Index>(cols));
    for (std::size_t f = 0; f < d; ++f) {
      for (std::size_t s = 0; s < cols; ++s) {
        X(static_cast<Index>(f), static_cast<Index>(s)) = table[f][s];
      }
    }
    if (has_labels) {
      for (std::size_t s = 0; s < cols; ++s) {
        raw_labels.push_back(label_from_cell(table[rows - 1][s],
                                             data_start + rows, s + 1));
      }
    }
    dataset.X.values = std::move(X);
  }

  dataset.X.centered = false;
  if (has_labels) {
    dataset.labels = relabel(raw_labels);
  }
  return dataset;
}

DataMatrix normalize_unit_range(const DataMatrix& X) {
  DataMatrix out = X;
  for (Index f = 0; f < out.d(); ++f) {
    const double lo = out.values.row(f).minCoeff();
    const double hi = out.values.row(f).maxCoeff();
    if (hi > lo) {
      out.values.row(f) = (out.values.row(f).array() - lo) / (hi - lo);
    } else {
      out.values.row(f).setZero();
    }
  }
  out.centered = false;
  return out;
}

double trace_gram(const DataMatrix& X) {
  if (!X.centered) {
    throw config_error(
        "trace_gram: X must be centered (apply center_columns first)");
  }
  return X.values.squaredNorm();
}

void write_dataset_csv(const std::string& path, const DataMatrix& X,
                       const std::optional<ClusterLabels>& labels) {
  if (labels && labels->n() != static_cast<std::size_t>(X.n())) {
    throw shape_error("write_dataset_csv: " + std::to_string(labels->n()) +
                      " labels for " + std::to_string(X.n()) + " samples");
  }
  std::ofstream file(path);
  if (!file) {
    throw error("write_dataset_csv: cannot open '" + path + "' for writing");
  }
  char buf[64];
  for (Index s = 0; s < X.n(); ++s) {
    std::string row;
    for (Index f = 0; f < X.d(); ++f) {
      std::snprintf(buf, sizeof(buf), "%.17g", X.values(f, s));
      if (f > 0) row += ',';
      row += buf;
    }
    if (labels) {
      row += ',';
      row += std::to_string(labels->labels[s]);
    }
    row += '\n';
    file << row;
  }
  if (!file) {
    throw error("write_dataset_csv: write to '" + path + "' failed");
  }
}

}  // namespace sparsefs
