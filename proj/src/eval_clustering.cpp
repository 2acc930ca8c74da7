#include "sparsefs/eval_clustering.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace sparsefs {

namespace {

constexpr int kMaxClusters = 64;

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

// Sort the addends before summing so the total depends only on the multiset
// of values, never on label numbering.
double stable_sum(std::vector<double>& addends) {
  std::sort(addends.begin(), addends.end());
  KahanSum k;
  for (double a : addends) k.add(a);
  return k.sum;
}

void check_labels(const char* who, const ClusterLabels& L) {
  if (L.c < 1) {
    throw config_error(std::string(who) + ": cluster count must be >= 1");
  }
  if (L.c > kMaxClusters) {
    throw config_error(std::string(who) + ": cluster count " +
                       std::to_string(L.c) + " exceeds the supported cap of " +
                       std::to_string(kMaxClusters));
  }
  for (int l : L.labels) {
    if (l < 0 || l >= L.c) {
      throw shape_error(std::string(who) + ": label " + std::to_string(l) +
                        " outside 0.." + std::to_string(L.c - 1));
    }
  }
}

void check_same_n(const char* who, const ClusterLabels& a,
                  const ClusterLabels& b) {
  if (a.n() != b.n()) {
    throw shape_error(std::string(who) + ": labelings cover " +
                      std::to_string(a.n()) + " vs " + std::to_string(b.n()) +
                      " samples");
  }
}

std::vector<std::vector<long long>> contingency(const ClusterLabels& pred,
                                                const ClusterLabels& truth) {
  std::vector<std::vector<long long>> counts(
      pred.c, std::vector<long long>(truth.c, 0));
  for (std::size_t i = 0; i < pred.n(); ++i) {
    ++counts[pred.labels[i]][truth.labels[i]];
  }
  return counts;
}

// Kuhn-Munkres with potentials on a square cost matrix (1-based internally).
// Returns assign[row] = column for each row.
std::vector<int> hungarian_min_cost(
    const std::vector<std::vector<long long>>& cost) {
  const int m = static_cast<int>(cost.size());
  const long long kInf = std::numeric_limits<long long>::max() / 4;
  std::vector<long long> u(m + 1, 0), v(m + 1, 0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= m; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<long long> minv(m + 1, kInf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      long long delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const long long cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assign(m, -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] >= 1) assign[p[j] - 1] = j - 1;
  }
  return assign;
}

}  // namespace

ClusterLabels kmeans(const Matrix& points, int c, std::uint64_t seed,
                     int max_iter) {
  const Index n = points.cols();
  if (c < 2) {
    throw config_error("kmeans: need at least 2 clusters, got " +
                       std::to_string(c));
  }
  if (n < c) {
    throw config_error("kmeans: need at least c = " + std::to_string(c) +
                       " samples, got " + std::to_string(n));
  }
  if (max_iter < 1) {
    throw config_error("kmeans: max_iter must be >= 1");
  }

  std::mt19937_64 rng(seed);
  std::vector<Index> idx(n);
  std::iota(idx.begin(), idx.end(), Index{0});
  for (int k = 0; k < c; ++k) {
    std::uniform_int_distribution<Index> pick(k, n - 1);
    std::swap(idx[k], idx[pick(rng)]);
  }
  Matrix centroids(points.rows(), c);
  for (int k = 0; k < c; ++k) {
    centroids.col(k) = points.col(idx[k]);
  }

  std::vector<int> labels(n, 0);
  std::vector<int> fresh(n);
  Vector own_dist(n);
  bool have_prev = false;
  for (int it = 0; it < max_iter; ++it) {
    for (Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (points.col(i) - centroids.col(0)).squaredNorm();
      for (int k = 1; k < c; ++k) {
        const double dd = (points.col(i) - centroids.col(k)).squaredNorm();
        if (dd < best_d) {
          best_d = dd;
          best = k;
        }
      }
      fresh[i] = best;
      own_dist[i] = best_d;
    }
    if (have_prev && fresh == labels) break;
    labels = fresh;
    have_prev = true;

    for (int k = 0; k < c; ++k) {
      Vector mean = Vector::Zero(points.rows());
      Index count = 0;
      for (Index i = 0; i < n; ++i) {
        if (labels[i] == k) {
          mean += points.col(i);
          ++count;
        }
      }
      if (count > 0) {
        centroids.col(k) = mean / static_cast<double>(count);
      } else {
        Index far = 0;
        own_dist.maxCoeff(&far);
        centroids.col(k) = points.col(far);
      }
    }
  }
  return ClusterLabels{std::move(labels), c};
}

ClusterLabels map_labels(const ClusterLabels& pred,
                         const ClusterLabels& truth) {
  check_labels("map_labels", pred);
  check_labels("map_labels", truth);
  check_same_n("map_labels", pred, truth);

  const int m = std::max(pred.c, truth.c);
  const auto counts = contingency(pred, truth);
  std::vector<std::vector<long long>> cost(m, std::vector<long long>(m, 0));
  for (int i = 0; i < pred.c; ++i) {
    for (int j = 0; j < truth.c; ++j) {
      cost[i][j] = -counts[i][j];
    }
  }
  const std::vector<int> assign = hungarian_min_cost(cost);

  ClusterLabels mapped;
  mapped.c = m;
  mapped.labels.resize(pred.n());
  for (std::size_t i = 0; i < pred.n(); ++i) {
    mapped.labels[i] = assign[pred.labels[i]];
  }
  return mapped;
}

double acc(const ClusterLabels& mapped, const ClusterLabels& truth) {
  check_same_n("acc", mapped, truth);
  if (mapped.n() == 0) {
    throw shape_error("acc: empty labelings");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < mapped.n(); ++i) {
    if (mapped.labels[i] == truth.labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(mapped.n());
}

double nmi(const ClusterLabels& pred, const ClusterLabels& truth) {
  check_labels("nmi", pred);
  check_labels("nmi", truth);
  check_same_n("nmi", pred, truth);
  const std::size_t n = pred.n();
  if (n == 0) {
    throw shape_error("nmi: empty labelings");
  }
  const double dn = static_cast<double>(n);

  const auto counts = contingency(pred, truth);
  std::vector<long long> row(pred.c, 0), col(truth.c, 0);
  for (int i = 0; i < pred.c; ++i) {
    for (int j = 0; j < truth.c; ++j) {
      row[i] += counts[i][j];
      col[j] += counts[i][j];
    }
  }

  auto entropy = [dn](const std::vector<long long>& marginal) {
    std::vector<double> addends;
    addends.reserve(marginal.size());
    for (long long m : marginal) {
      if (m > 0) {
        const double p = static_cast<double>(m) / dn;
        addends.push_back(-p * std::log(p));
      }
    }
    return stable_sum(addends);
  };
  const double h_pred = entropy(row);
  const double h_truth = entropy(col);
  if (h_pred == 0.0 && h_truth == 0.0) return 1.0;
  if (h_pred == 0.0 || h_truth == 0.0) return 0.0;

  std::vector<double> addends;
  for (int i = 0; i < pred.c; ++i) {
    for (int j = 0; j < truth.c; ++j) {
      const long long nij = counts[i][j];
      if (nij > 0) {
        const double pij = static_cast<double>(nij) / dn;
        addends.push_back(
            pij * std::log(dn * static_cast<double>(nij) /
                           (static_cast<double>(row[i]) *
                            static_cast<double>(col[j]))));
      }
    }
  }
  const double mi = stable_sum(addends);
  const double value = mi / std::sqrt(h_pred * h_truth);
  return std::clamp(value, 0.0, 1.0);
}

EvalResult evaluate_selection(const DataMatrix& X,
                              const std::vector<int>& selected,
                              const ClusterLabels& truth, int repeats) {
  if (selected.empty()) {
    throw config_error("evaluate_selection: selected feature set is empty");
  }
  for (int f : selected) {
    if (f < 0 || f >= X.d()) {
      throw config_error("evaluate_selection: feature index " +
                         std::to_string(f) + " outside 0.." +
                         std::to_string(X.d() - 1));
    }
  }
  if (static_cast<std::size_t>(X.n()) != truth.n()) {
    throw shape_error("evaluate_selection: X has " + std::to_string(X.n()) +
                      " samples but truth covers " + std::to_string(truth.n()));
  }
  if (repeats < 1) {
    throw config_error("evaluate_selection: repeats must be >= 1");
  }

  Matrix sub(static_cast<Index>(selected.size()), X.n());
  for (std::size_t r = 0; r < selected.size(); ++r) {
    sub.row(static_cast<Index>(r)) = X.values.row(selected[r]);
  }

  KahanSum acc_sum, acc_sq, nmi_sum, nmi_sq;
  for (int rep = 0; rep < repeats; ++rep) {
    const ClusterLabels pred =
        kmeans(sub, truth.c, static_cast<std::uint64_t>(rep));
    const ClusterLabels mapped = map_labels(pred, truth);
    const double a = acc(mapped, truth);
    const double m = nmi(pred, truth);
    acc_sum.add(a);
    acc_sq.add(a * a);
    nmi_sum.add(m);
    nmi_sq.add(m * m);
  }

  const double r = static_cast<double>(repeats);
  EvalResult result;
  result.repeats = repeats;
  result.acc_mean = acc_sum.sum / r;
  result.nmi_mean = nmi_sum.sum / r;
  result.acc_std =
      std::sqrt(std::max(0.0, acc_sq.sum / r - result.acc_mean * result.acc_mean));
  result.nmi_std =
      std::sqrt(std::max(0.0, nmi_sq.sum / r - result.nmi_mean * result.nmi_mean));
  return result;
}

std::string eval_to_csv(const EvalResult& result) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%d\n",
                result.acc_mean, result.acc_std, result.nmi_mean,
                result.nmi_std, result.repeats);
  return std::string("acc_mean,acc_std,nmi_mean,nmi_std,repeats\n") + buf;
}

std::string eval_to_json(const EvalResult& result) {
  nlohmann::json j;
  j["acc_mean"] = result.acc_mean;
  j["acc_std"] = result.acc_std;
  j["nmi_mean"] = result.nmi_mean;
  j["nmi_std"] = result.nmi_std;
  j["repeats"] = result.repeats;
  return j.dump(2);
}

}  // namespace sparsefs
