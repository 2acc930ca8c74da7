#include "sparsefs/synth_data.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace sparsefs {

std::string to_string(SynthShape shape) {
  switch (shape) {
    case SynthShape::two_moon:
      return "two_moon";
    case SynthShape::three_ring:
      return "three_ring";
    case SynthShape::three_curve:
      return "three_curve";
  }
  throw config_error("to_string: unknown synth shape");
}

SynthShape synth_shape_from_string(const std::string& s) {
  if (s == "two_moon") return SynthShape::two_moon;
  if (s == "three_ring") return SynthShape::three_ring;
  if (s == "three_curve") return SynthShape::three_curve;
  throw config_error("unknown shape '" + s +
                     "' (expected two_moon, three_ring or three_curve)");
}

SynthResult generate(const SyntheticSpec& spec) {
  if (spec.n_per_class < 0) {
    throw config_error("generate: n_per_class must be >= 0 (0 = default)");
  }
  if (spec.noise_dims < 0) {
    throw config_error("generate: noise_dims must be >= 0");
  }
  if (!(spec.structure_jitter >= 0.0)) {
    throw config_error("generate: structure_jitter must be >= 0");
  }
  std::vector<double> scales = spec.noise_scales;
  if (scales.empty()) {
    scales.resize(spec.noise_dims);
    for (int k = 0; k < spec.noise_dims; ++k) {
      scales[k] = 0.05 * (k + 1);
    }
  }
  if (static_cast<int>(scales.size()) != spec.noise_dims) {
    throw config_error("generate: noise_scales has " +
                       std::to_string(scales.size()) + " entries for " +
                       std::to_string(spec.noise_dims) + " noise dims");
  }
  for (double s : scales) {
    if (!(s >= 0.0)) {
      throw config_error("generate: noise scales must be >= 0");
    }
  }

  const bool moons = spec.shape == SynthShape::two_moon;
  const int classes = moons ? 2 : 3;
  const int npc = spec.n_per_class > 0 ? spec.n_per_class : (moons ? 400 : 300);
  const Index n = static_cast<Index>(classes) * npc;
  const Index d = 2 + spec.noise_dims;
  constexpr double pi = std::numbers::pi;

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> arc(0.0, moons ? pi : 2.0 * pi);

  Matrix X(d, n);
  std::vector<int> labels(n);
  for (int ci = 0; ci < classes; ++ci) {
    for (int i = 0; i < npc; ++i) {
      const double t = arc(rng);
      const Index col = static_cast<Index>(ci) * npc + i;
      double x = 0.0, y = 0.0;
      switch (spec.shape) {
        case SynthShape::two_moon:
          if (ci == 0) {
            x = std::cos(t);
            y = std::sin(t);
          } else {
            x = 1.0 - std::cos(t);
            y = 0.5 - std::sin(t);
          }
          break;
        case SynthShape::three_ring: {
          const double radius = ci + 1.0;
          x = 2.5 * ci + radius * std::cos(t);
          y = radius * std::sin(t);
          break;
        }
        case SynthShape::three_curve:
          x = t;
          y = std::sin(t) + 2.0 * ci;
          break;
      }
      X(0, col) = x;
      X(1, col) = y;
      labels[col] = ci;
    }
  }
  for (Index row = 0; row < 2; ++row) {
    for (Index col = 0; col < n; ++col) {
      X(row, col) += spec.structure_jitter * gauss(rng);
    }
  }
  for (int j = 0; j < spec.noise_dims; ++j) {
    for (Index col = 0; col < n; ++col) {
      X(2 + j, col) = scales[j] * gauss(rng);
    }
  }

  SynthResult out;
  out.X = DataMatrix{std::move(X), false, {}};
  out.labels = ClusterLabels{std::move(labels), classes};
  return out;
}

}  // namespace sparsefs
