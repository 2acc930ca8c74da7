#pragma once

#include "sparsefs/types.hpp"

#include <optional>
#include <string>

namespace sparsefs {

enum class SampleLayout { rows, columns };

struct Dataset {
  DataMatrix X;
  std::optional<ClusterLabels> labels;
};

// Comma-separated numeric table, '.' decimal, UTF-8; an optional header line
// is detected by a non-numeric first row. The returned matrix always has
// features as rows. With has_labels, labels sit in the last column when
// samples are rows, in the last row when samples are columns.
Dataset load_csv(const std::string& path, bool has_labels,
                 SampleLayout samples_as);

// Map each feature row through (x - min) / (max - min); constant rows map
// to 0.
DataMatrix normalize_unit_range(const DataMatrix& X);

// tr(X X^T) = ||X||_F^2 of a centered matrix; the quantity the parameter
// strategy is based on.
double trace_gram(const DataMatrix& X);

// One sample per line, label appended as last column when present. The
// format load_csv(path, has_labels, SampleLayout::rows) reads back.
void write_dataset_csv(const std::string& path, const DataMatrix& X,
                       const std::optional<ClusterLabels>& labels);

}  // namespace sparsefs
