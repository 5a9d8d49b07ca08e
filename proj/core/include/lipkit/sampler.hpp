#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lipkit/space.hpp"

namespace lipkit {

enum class SampleScheme { uniform_box, gaussian, grid };

// Every sampling operation in the library is driven by one of these. The
// seed is part of the value: there is no implicit entropy anywhere, and the
// seed is echoed into estimates and reports so runs can be replayed.
struct SamplerConfig {
  int count = 64;
  std::uint64_t seed = 0;
  double box_radius = 1.0;
  SampleScheme scheme = SampleScheme::uniform_box;
  // Cap on evaluated point pairs; all count*(count-1)/2 pairs are used when
  // they fit, otherwise a seeded subsample of exactly pair_budget pairs.
  std::size_t pair_budget = 20000;
};

std::vector<Vector> sample_points(const NormedSpace& space, const SamplerConfig& cfg);

// Index pairs (i, j), i < j, over a point set of size n.
std::vector<std::pair<int, int>> sample_pairs(int n, const SamplerConfig& cfg);

}  // namespace lipkit
