#include "sparsefs/feature_scoring.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <string>

namespace sparsefs {

Vector score_features(const Matrix& omega) {
  if (omega.rows() != omega.cols()) {
    throw shape_error("score_features: omega must be square, got " +
                      std::to_string(omega.rows()) + "x" +
                      std::to_string(omega.cols()));
  }
  return omega.colwise().norm().transpose();
}

FeatureRanking rank_and_select(const Vector& scores, int h) {
  const int d = static_cast<int>(scores.size());
  if (h < 1 || h > d) {
    throw config_error("rank_and_select: h must be in 1.." + std::to_string(d) +
                       ", got " + std::to_string(h));
  }
  FeatureRanking ranking;
  ranking.scores = scores;
  ranking.h = h;
  ranking.order.resize(d);
  std::iota(ranking.order.begin(), ranking.order.end(), 0);
  std::sort(ranking.order.begin(), ranking.order.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  ranking.selected.assign(ranking.order.begin(), ranking.order.begin() + h);
  return ranking;
}

std::string ranking_to_csv(const FeatureRanking& ranking) {
  std::string csv = "feature_id,score,rank\n";
  char buf[64];
  for (std::size_t rank = 0; rank < ranking.order.size(); ++rank) {
    const int feature = ranking.order[rank];
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%zu\n", feature,
                  ranking.scores[feature], rank);
    csv += buf;
  }
  return csv;
}

}  // namespace sparsefs
