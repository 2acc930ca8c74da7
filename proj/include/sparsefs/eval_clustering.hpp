#pragma once

#include "sparsefs/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sparsefs {

struct EvalResult {
  double acc_mean = 0.0;
  double acc_std = 0.0;
  double nmi_mean = 0.0;
  double nmi_std = 0.0;
  int repeats = 0;
};

// Lloyd's algorithm on column points. Initial centroids are c distinct data
// points drawn by the seed; an emptied cluster is re-seeded at the point
// farthest from its current centroid. Deterministic per seed.
ClusterLabels kmeans(const Matrix& points, int c, std::uint64_t seed,
                     int max_iter = 100);

// Optimal relabeling of pred against truth: Kuhn-Munkres assignment on the
// negated contingency matrix (cluster counts capped at 64).
ClusterLabels map_labels(const ClusterLabels& pred, const ClusterLabels& truth);

// Fraction of samples whose mapped label equals the true label.
double acc(const ClusterLabels& mapped, const ClusterLabels& truth);

// I(m,l) / sqrt(H(m) H(l)) with natural-log plug-in entropies. Conventions:
// 1 when both partitions are single-cluster (identical), 0 when exactly one
// entropy is zero. Contributions are sorted before summing so the value is
// exactly invariant under label permutations.
double nmi(const ClusterLabels& pred, const ClusterLabels& truth);

// Restrict X to the selected feature rows, run kmeans with seeds
// 0..repeats-1, map labels, and aggregate ACC/NMI mean and (population)
// standard deviation with compensated summation.
EvalResult evaluate_selection(const DataMatrix& X,
                              const std::vector<int>& selected,
                              const ClusterLabels& truth, int repeats = 30);

std::string eval_to_csv(const EvalResult& result);
std::string eval_to_json(const EvalResult& result);

}  // namespace sparsefs
