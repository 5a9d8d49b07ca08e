#include "lipkit/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "lipkit/rng.hpp"

namespace lipkit {

std::vector<Vector> sample_points(const NormedSpace& space, const SamplerConfig& cfg) {
  if (cfg.count <= 0) fail(ErrorKind::domain, "sampler count must be positive");
  if (!(cfg.box_radius > 0.0)) fail(ErrorKind::domain, "sampler box radius must be positive");
  const int dim = space.dim;
  std::vector<Vector> points;
  points.reserve(static_cast<std::size_t>(cfg.count));
  Rng rng(cfg.seed);

  switch (cfg.scheme) {
    case SampleScheme::uniform_box: {
      for (int k = 0; k < cfg.count; ++k) {
        std::vector<double> coords(static_cast<std::size_t>(dim));
        for (double& c : coords) c = rng.uniform(-cfg.box_radius, cfg.box_radius);
        points.push_back(Vector{space, std::move(coords)});
      }
      break;
    }
    case SampleScheme::gaussian: {
      for (int k = 0; k < cfg.count; ++k) {
        std::vector<double> coords(static_cast<std::size_t>(dim));
        for (double& c : coords) c = cfg.box_radius * rng.gaussian();
        points.push_back(Vector{space, std::move(coords)});
      }
      break;
    }
    case SampleScheme::grid: {
      // Smallest per-axis resolution whose lattice covers `count` points,
      // then the first `count` lattice points in row-major order.
      int per_axis = 1;
      while (std::pow(static_cast<double>(per_axis), dim) < static_cast<double>(cfg.count)) {
        ++per_axis;
        if (per_axis > cfg.count) break;
      }
      std::vector<int> index(static_cast<std::size_t>(dim), 0);
      for (int k = 0; k < cfg.count; ++k) {
        std::vector<double> coords(static_cast<std::size_t>(dim));
        for (int d = 0; d < dim; ++d) {
          const double t = per_axis == 1
                               ? 0.5
                               : static_cast<double>(index[static_cast<std::size_t>(d)]) /
                                     (per_axis - 1);
          coords[static_cast<std::size_t>(d)] = -cfg.box_radius + 2.0 * cfg.box_radius * t;
        }
        points.push_back(Vector{space, std::move(coords)});
        for (int d = dim - 1; d >= 0; --d) {
          if (++index[static_cast<std::size_t>(d)] < per_axis) break;
          index[static_cast<std::size_t>(d)] = 0;
        }
      }
      break;
    }
  }
  return points;
}

std::vector<std::pair<int, int>> sample_pairs(int n, const SamplerConfig& cfg) {
  std::vector<std::pair<int, int>> pairs;
  if (n < 2) return pairs;
  const std::size_t total =
      static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
  if (total <= cfg.pair_budget) {
    pairs.reserve(total);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    return pairs;
  }
  // Seeded subsample without replacement: Floyd's algorithm over the
  // triangular index space keeps the draw count at exactly pair_budget.
  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<std::uint64_t> chosen;
  chosen.reserve(cfg.pair_budget);
  const std::uint64_t m = total;
  const std::uint64_t k = cfg.pair_budget;
  for (std::uint64_t t = m - k; t < m; ++t) {
    std::uint64_t r = rng.below(t + 1);
    if (std::find(chosen.begin(), chosen.end(), r) != chosen.end()) r = t;
    chosen.push_back(r);
  }
  std::sort(chosen.begin(), chosen.end());
  pairs.reserve(chosen.size());
  for (std::uint64_t flat : chosen) {
    // Invert flat = i*n - i*(i+1)/2 + (j - i - 1) without a search per row.
    std::uint64_t i = 0;
    std::uint64_t remaining = flat;
    std::uint64_t row = static_cast<std::uint64_t>(n) - 1;
    while (remaining >= row) {
      remaining -= row;
      --row;
      ++i;
    }
    const std::uint64_t j = i + 1 + remaining;
    pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
  }
  return pairs;
}

}  // namespace lipkit
