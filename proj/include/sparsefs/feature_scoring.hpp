#pragma once

#include "sparsefs/types.hpp"

#include <string>
#include <vector>

namespace sparsefs {

// Deterministic ranking of d features: order sorts scores descending with
// ties broken by ascending feature index; selected is the first h of order.
struct FeatureRanking {
  Vector scores;
  std::vector<int> order;
  std::vector<int> selected;
  int h = 0;
};

// score_j = ||omega_j||_2 over columns j. For the (symmetric) projected
// solutions column and row norms coincide.
Vector score_features(const Matrix& omega);

// Rank all features and keep the top h. Throws config_error for h outside
// 1..d.
FeatureRanking rank_and_select(const Vector& scores, int h);

// CSV serialization with header feature_id,score,rank; one row per feature in
// rank order (rank is 0-based).
std::string ranking_to_csv(const FeatureRanking& ranking);

}  // namespace sparsefs
