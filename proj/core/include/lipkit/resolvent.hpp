#pragma once

#include <vector>

#include "lipkit/map.hpp"
#include "lipkit/profile.hpp"
#include "lipkit/sampler.hpp"

namespace lipkit {

struct ScanEntry {
  double alpha = 0.0;
  double sample_lower = 0.0;    // min pairwise quotient of alpha*S - T on the sample
  bool within_guarantee = false;  // alpha < (1 - lambda1) / (1 + lambda2)
  bool has_exact = false;         // exact linear-part check available (affine pair, square)
  bool exact_invertible = false;
  double sigma_min = 0.0;         // smallest singular value of alpha*A_S - A_T
  // Guaranteed alpha whose exact check failed: never expected; a true entry
  // here is an acceptance failure, not a soft warning.
  bool violation = false;
};

struct ScanReport {
  double threshold = 0.0;
  std::vector<ScanEntry> entries;
  bool any_violation = false;
};

// Probes invertibility of alpha*S - T along the grid: sampled bi-Lipschitz
// floor always, exact rank/singular-value data when both maps are affine.
ScanReport resolvent_scan(const MapHandle& S, const MapHandle& T,
                          const PerturbationProfile& profile,
                          const std::vector<double>& alpha_grid, const SamplerConfig& sampler);

}  // namespace lipkit
