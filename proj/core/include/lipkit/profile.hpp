#pragma once

#include <cstdint>
#include <vector>

#include "lipkit/map.hpp"
#include "lipkit/sampler.hpp"

namespace lipkit {

// One sampled pair turns into the half-plane constraint
//   lambda1 * s + lambda2 * t >= r,   lambda1, lambda2 >= 0,
// with s = ||Sx - Sy||, t = ||Tx - Ty||, r = ||(Tx - Ty) - (Sx - Sy)||.
// The optional c carries the domain distance for the mu-augmented estimate.
struct PairConstraint {
  double s = 0.0;
  double t = 0.0;
  double r = 0.0;
  double c = 0.0;
};

struct FrontierPoint {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

// Pareto boundary of the feasible set: a polyline with lambda1 strictly
// increasing and lambda2 strictly decreasing across vertices. The feasible
// region is everything componentwise above it.
struct Frontier {
  std::vector<FrontierPoint> vertices;
};

// Exact frontier of the intersection of the constraint half-planes with the
// nonnegative quadrant, via a sorted-slope upper-envelope sweep. A constraint
// with s = t = 0 and r > 0 is unsatisfiable and raises inconsistent-pair.
Frontier compute_frontier(const std::vector<PairConstraint>& constraints);

enum class ObjectiveKind {
  inv_factor,       // (1 + lambda2) / (1 - lambda1): tightest inverse Lipschitz factor
  fwd_factor,       // (1 + lambda1) / (1 - lambda2): tightest forward factor
  sum,              // lambda1 + lambda2
  weighted,         // w1 * lambda1 + w2 * lambda2
  stability_ratio,  // frame-bound spread (1+l2)(1+l1+mu*b) / ((1-l2)(1-l1-mu*b))
};

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::inv_factor;
  double w1 = 1.0;
  double w2 = 1.0;
  double frame_bound_b = 0.0;  // used by stability_ratio
};

double objective_value(const ObjectiveSpec& objective, double lambda1, double lambda2,
                       double mu);

// Minimizing vertex subject to lambda1 < 1 and lambda2 < 1 (each objective is
// a Moebius or affine function along any frontier segment, so segment minima
// sit at vertices). Raises not-verifiable when no vertex qualifies.
FrontierPoint select_on_frontier(const Frontier& frontier, const ObjectiveSpec& objective,
                                 double mu);

struct PerturbationProfile {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double mu = 0.0;
  // lambda2 == 1 is admitted only as this flagged unit case; the Guo-type
  // bound is its sole consumer.
  bool lambda2_is_one = false;
  // True when the constants are backed by exact operator norms of an affine
  // difference, not just the sample. Downstream guarantees (sandwich bounds,
  // certificate radii, resolvent thresholds) are unconditional exactly when
  // this is set.
  bool globally_certified = false;
  Frontier frontier;
  std::uint64_t sample_seed = 0;
};

// Validates ranges; lambda2 == 1.0 sets the flagged unit case.
PerturbationProfile profile_from_constants(double lambda1, double lambda2, double mu = 0.0);

struct ProfileConfig {
  ObjectiveSpec objective;
  // For affine/affine pairs with exactly computable operator norms, add the
  // certified anchor constraint lambda1/a1 + lambda2/a2 >= 1 derived from
  // a1 = ||E S^-1||, a2 = ||E T^-1||, E the difference of linear parts. Every
  // point satisfying it fulfils the two-constant inequality for ALL inputs,
  // which upgrades the profile from on-sample to global.
  bool use_affine_certificates = true;
};

PerturbationProfile estimate_profile(const MapHandle& S, const MapHandle& T,
                                     const SamplerConfig& sampler,
                                     const ProfileConfig& cfg = {});

// Sweeps mu over the grid, re-solving the frontier with each residual gap
// max(0, r - mu*c), and keeps the triple minimizing the stability-ratio
// objective (other objectives: their own value at the selected vertex).
PerturbationProfile estimate_profile_mu(const MapHandle& S, const MapHandle& T,
                                        const SamplerConfig& sampler,
                                        const std::vector<double>& mu_grid,
                                        const ProfileConfig& cfg = {});

// Worst signed violation of r <= lambda1*s + lambda2*t + mu*c over the
// sample, relative to max(1, r); nonpositive means the profile holds on it.
double validate_profile(const MapHandle& S, const MapHandle& T,
                        const PerturbationProfile& profile, const SamplerConfig& sampler);

// Sampled constraints for S, T over a common domain sample. Exposed for the
// scan/validation paths; estimate_profile is the usual entry point.
std::vector<PairConstraint> sample_constraints(const MapHandle& S, const MapHandle& T,
                                               const SamplerConfig& sampler);

}  // namespace lipkit
