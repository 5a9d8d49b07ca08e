#include "lipkit/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lipkit/error.hpp"
#include "lipkit/linalg.hpp"

namespace lipkit {

ScanReport resolvent_scan(const MapHandle& S, const MapHandle& T,
                          const PerturbationProfile& profile,
                          const std::vector<double>& alpha_grid, const SamplerConfig& sampler) {
  if (alpha_grid.empty()) fail(ErrorKind::domain, "alpha grid must not be empty");
  for (double alpha : alpha_grid) {
    if (!std::isfinite(alpha)) fail(ErrorKind::domain, "alpha grid entries must be finite");
  }
  if (!(S.domain() == T.domain()) || !(S.codomain() == T.codomain())) {
    fail(ErrorKind::structural, "maps being scanned need common domain and codomain");
  }

  ScanReport report;
  report.threshold = (1.0 - profile.lambda1) / (1.0 + profile.lambda2);

  // Pair differences are alpha-independent; collect them once.
  auto points = sample_points(S.domain(), sampler);
  auto pairs = sample_pairs(static_cast<int>(points.size()), sampler);
  if (pairs.empty()) fail(ErrorKind::degenerate_sample, "need at least two sample points");
  const NormedSpace& dom = S.domain();
  const NormedSpace& cod = S.codomain();
  struct PairDiff {
    Vector ds;
    Vector dt;
    double gap;
  };
  std::vector<PairDiff> diffs;
  diffs.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    double gap = distance(dom, points[i], points[j]);
    if (gap == 0.0) continue;
    diffs.push_back({map_difference(S, points[i], points[j]),
                     map_difference(T, points[i], points[j]), gap});
  }
  if (diffs.empty()) fail(ErrorKind::degenerate_sample, "all sampled points coincide");

  const MapData& sd = S.raw();
  const MapData& td = T.raw();
  bool exact_available = sd.affine && td.affine && sd.affine->linear.rows == sd.affine->linear.cols;

  for (double alpha : alpha_grid) {
    ScanEntry entry;
    entry.alpha = alpha;
    entry.within_guarantee = alpha < report.threshold;

    double lower = std::numeric_limits<double>::infinity();
    for (const auto& d : diffs) {
      lower = std::min(lower, norm(cod, sub(scale(alpha, d.ds), d.dt)) / d.gap);
    }
    entry.sample_lower = lower;

    if (exact_available) {
      Matrix m = matadd(matscale(alpha, sd.affine->linear), matscale(-1.0, td.affine->linear));
      entry.has_exact = true;
      entry.sigma_min = sigma_min(m);
      entry.exact_invertible = matrix_rank(m) == m.rows;
      entry.violation = entry.within_guarantee && !entry.exact_invertible;
    }
    report.any_violation = report.any_violation || entry.violation;
    report.entries.push_back(entry);
  }
  return report;
}

}  // namespace lipkit
