#include "sparsefs/eval_clustering.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace sparsefs;
using testutil::randn;

namespace {

// Partition SSE with per-cluster mean centroids: the quantity Lloyd descends.
double partition_sse(const Matrix& points, const ClusterLabels& L) {
  Matrix centroids = Matrix::Zero(points.rows(), L.c);
  std::vector<int> counts(L.c, 0);
  for (std::size_t i = 0; i < L.n(); ++i) {
    centroids.col(L.labels[i]) += points.col(static_cast<Index>(i));
    ++counts[L.labels[i]];
  }
  for (int k = 0; k < L.c; ++k) {
    if (counts[k] > 0) centroids.col(k) /= counts[k];
  }
  double sse = 0;
  for (std::size_t i = 0; i < L.n(); ++i) {
    sse += (points.col(static_cast<Index>(i)) - centroids.col(L.labels[i]))
               .squaredNorm();
  }
  return sse;
}

// Assumes pred.c == truth.c, which the callers below arrange.
int brute_force_best_match(const ClusterLabels& pred,
                           const ClusterLabels& truth) {
  std::vector<int> perm(pred.c);
  for (int i = 0; i < pred.c; ++i) perm[i] = i;
  int best = 0;
  do {
    int hits = 0;
    for (std::size_t i = 0; i < pred.n(); ++i) {
      if (perm[pred.labels[i]] == truth.labels[i]) ++hits;
    }
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

ClusterLabels random_labels(int c, int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, c - 1);
  ClusterLabels L;
  L.c = c;
  L.labels.resize(n);
  for (int i = 0; i < n; ++i) L.labels[i] = pick(rng);
  return L;
}

Matrix blob_points(int per_blob, double spread, std::uint64_t seed) {
  Matrix pts(2, 2 * per_blob);
  Matrix noise = randn(2, 2 * per_blob, seed) * spread;
  for (int i = 0; i < per_blob; ++i) {
    pts.col(i) = noise.col(i);
    pts.col(per_blob + i) =
        noise.col(per_blob + i) + Vector::Constant(2, 10.0);
  }
  return pts;
}

}  // namespace

TEST_CASE("kmeans separates two far blobs for every seed") {
  Matrix pts(1, 4);
  pts << 0, 0.1, 10, 10.1;
  ClusterLabels truth{{0, 0, 1, 1}, 2};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ClusterLabels pred = kmeans(pts, 2, seed);
    CHECK(acc(map_labels(pred, truth), truth) == doctest::Approx(1.0));
  }
}

TEST_CASE("kmeans with n equal to c isolates every point") {
  Matrix pts(1, 3);
  pts << 0, 5, 11;
  ClusterLabels pred = kmeans(pts, 3, 0);
  std::vector<int> sorted = pred.labels;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2});
}

TEST_CASE("lloyd iterations do not increase the partition SSE") {
  Matrix pts = blob_points(30, 2.0, 7);  // overlapping blobs
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    ClusterLabels first = kmeans(pts, 3, seed, 1);
    ClusterLabels full = kmeans(pts, 3, seed, 100);
    CHECK(partition_sse(pts, full) <= partition_sse(pts, first) + 1e-9);
  }
}

TEST_CASE("kmeans argument validation") {
  Matrix pts = randn(2, 5, 8);
  CHECK_THROWS_AS(kmeans(pts, 1, 0), config_error);
  CHECK_THROWS_AS(kmeans(pts, 6, 0), config_error);
  CHECK_THROWS_AS(kmeans(pts, 2, 0, 0), config_error);
}

TEST_CASE("map_labels recovers a permuted labeling") {
  ClusterLabels truth{{0, 0, 1, 1, 2, 2}, 3};
  ClusterLabels permuted{{2, 2, 0, 0, 1, 1}, 3};
  ClusterLabels mapped = map_labels(permuted, truth);
  CHECK(acc(mapped, truth) == doctest::Approx(1.0));
  ClusterLabels same = map_labels(truth, truth);
  CHECK(acc(same, truth) == doctest::Approx(1.0));
}

TEST_CASE("map_labels matches exhaustive permutation search") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> cs(2, 4), ns(4, 12);
  for (int t = 0; t < 30; ++t) {
    const int c = cs(rng), n = ns(rng);
    ClusterLabels pred = random_labels(c, n, rng);
    ClusterLabels truth = random_labels(c, n, rng);
    ClusterLabels mapped = map_labels(pred, truth);
    int hits = 0;
    for (int i = 0; i < n; ++i) {
      if (mapped.labels[i] == truth.labels[i]) ++hits;
    }
    CHECK(hits == brute_force_best_match(pred, truth));
  }
}

TEST_CASE("acc hand values") {
  ClusterLabels a{{0, 0, 1, 1}, 2};
  CHECK(acc(a, a) == doctest::Approx(1.0));
  ClusterLabels b{{0, 0, 1, 0}, 2};
  CHECK(acc(b, a) == doctest::Approx(0.75));
  // balanced antisymmetric case bottoms out at 0.5 after optimal mapping
  ClusterLabels pred{{0, 1, 0, 1}, 2};
  ClusterLabels truth{{0, 0, 1, 1}, 2};
  CHECK(acc(map_labels(pred, truth), truth) == doctest::Approx(0.5));
  CHECK_THROWS_AS(acc(a, ClusterLabels{{0, 1}, 2}), shape_error);
}

TEST_CASE("nmi hand values and conventions") {
  ClusterLabels a{{0, 0, 1, 1, 2, 2}, 3};
  CHECK(nmi(a, a) == doctest::Approx(1.0));

  // joint counts [[2,1],[1,2]] against the plug-in formula
  ClusterLabels pred{{0, 0, 0, 1, 1, 1}, 2};
  ClusterLabels truth{{0, 0, 1, 0, 1, 1}, 2};
  const double mi = (2.0 / 3.0) * std::log(4.0 / 3.0) +
                    (1.0 / 3.0) * std::log(2.0 / 3.0);
  CHECK(nmi(pred, truth) == doctest::Approx(mi / std::log(2.0)).epsilon(1e-12));

  ClusterLabels flat{{0, 0, 0, 0}, 1};
  ClusterLabels split{{0, 0, 1, 1}, 2};
  CHECK(nmi(flat, split) == 0.0);
  CHECK(nmi(flat, flat) == 1.0);
}

TEST_CASE("nmi is exactly invariant under label permutations") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    ClusterLabels pred = random_labels(4, 30, rng);
    ClusterLabels truth = random_labels(3, 30, rng);
    std::vector<int> perm{2, 0, 3, 1};
    ClusterLabels renamed = pred;
    for (auto& l : renamed.labels) l = perm[l];
    CHECK(nmi(pred, truth) == nmi(renamed, truth));  // bitwise
  }
}

TEST_CASE("cluster count above the cap is rejected") {
  ClusterLabels big{{0, 1}, 65};
  CHECK_THROWS_AS(nmi(big, big), config_error);
}

TEST_CASE("evaluate_selection on separable blobs is perfect") {
  Matrix pts = blob_points(20, 0.1, 12);
  DataMatrix X{pts, true, {}};
  ClusterLabels truth;
  truth.c = 2;
  truth.labels.assign(40, 0);
  for (int i = 20; i < 40; ++i) truth.labels[i] = 1;
  EvalResult r = evaluate_selection(X, {0, 1}, truth, 10);
  CHECK(r.acc_mean == doctest::Approx(1.0));
  CHECK(r.nmi_mean == doctest::Approx(1.0));
  CHECK(r.acc_std == doctest::Approx(0.0));
  CHECK(r.repeats == 10);
}

TEST_CASE("evaluate_selection with one repeat has zero spread") {
  Matrix pts = blob_points(10, 1.0, 13);
  DataMatrix X{pts, true, {}};
  ClusterLabels truth;
  truth.c = 2;
  truth.labels.assign(20, 0);
  for (int i = 10; i < 20; ++i) truth.labels[i] = 1;
  EvalResult r = evaluate_selection(X, {0}, truth, 1);
  CHECK(r.acc_std == 0.0);
  CHECK(r.nmi_std == 0.0);
  CHECK(r.repeats == 1);
}

TEST_CASE("evaluate_selection argument validation") {
  DataMatrix X{randn(3, 8, 14), true, {}};
  ClusterLabels truth{{0, 0, 0, 0, 1, 1, 1, 1}, 2};
  CHECK_THROWS_AS(evaluate_selection(X, {}, truth, 5), config_error);
  CHECK_THROWS_AS(evaluate_selection(X, {3}, truth, 5), config_error);
  CHECK_THROWS_AS(evaluate_selection(X, {0}, truth, 0), config_error);
  ClusterLabels short_truth{{0, 1}, 2};
  CHECK_THROWS_AS(evaluate_selection(X, {0}, short_truth, 5), shape_error);
}

TEST_CASE("eval serialization") {
  EvalResult r;
  r.acc_mean = 0.5;
  r.acc_std = 0.25;
  r.nmi_mean = 0.75;
  r.nmi_std = 0.125;
  r.repeats = 30;
  // values exactly representable in binary, so the round-trip %.17g
  // serialization prints them in shortest form
  CHECK(eval_to_csv(r) ==
        "acc_mean,acc_std,nmi_mean,nmi_std,repeats\n0.5,0.25,0.75,0.125,30\n");
  nlohmann::json j = nlohmann::json::parse(eval_to_json(r));
  CHECK(j.at("acc_mean").get<double>() == 0.5);
  CHECK(j.at("repeats").get<int>() == 30);
}
