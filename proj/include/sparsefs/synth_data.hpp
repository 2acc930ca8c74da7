#pragma once

#include "sparsefs/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sparsefs {

enum class SynthShape { two_moon, three_ring, three_curve };

std::string to_string(SynthShape shape);
SynthShape synth_shape_from_string(const std::string& s);

// Two structured features carrying a 2-D manifold, followed by noise_dims
// independent zero-mean Gaussian features with the given scales.
//   n_per_class = 0 picks the shape default (400 for two_moon, 300 otherwise,
//   i.e. 800/900 samples total).
//   noise_scales empty picks the ladder 0.05 * (k + 1), k = 0..noise_dims-1,
//   i.e. (0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35) at the default 7 dims.
struct SyntheticSpec {
  SynthShape shape = SynthShape::two_moon;
  int n_per_class = 0;
  int noise_dims = 7;
  std::vector<double> noise_scales{};
  double structure_jitter = 0.05;
  std::uint64_t seed = 0;
};

struct SynthResult {
  DataMatrix X;
  ClusterLabels labels;
};

// Deterministic per seed. Manifolds (before jitter):
//   two_moon    class 0: (cos t, sin t); class 1: (1 - cos t, 0.5 - sin t),
//               t in [0, pi) — two interleaved half-circle arcs of radius 1.
//   three_ring  class k: circle of radius k+1 centered at (2.5 k, 0),
//               t in [0, 2 pi).
//   three_curve class k: (t, sin t + 2 k), t in [0, 2 pi).
SynthResult generate(const SyntheticSpec& spec);

}  // namespace sparsefs
