#pragma once

#include <utility>
#include <vector>

#include "lipkit/atomic.hpp"
#include "lipkit/invert.hpp"
#include "lipkit/map.hpp"
#include "lipkit/profile.hpp"
#include "lipkit/sampler.hpp"
#include "lipkit/space.hpp"

namespace lipkit {

// Finite metric frame: scalar functionals f_n on a base space plus a
// synthesis map S back from the coefficient space, with claimed two-sided
// Lipschitz bounds a d(x,y) <= ||{f_n(x) - f_n(y)}|| <= b d(x,y) and
// reconstruction S({f_n(x)}) = x. The coefficient space may be wider than
// the family; analysis vectors are zero-padded.
struct MetricFrame {
  std::vector<MapHandle> functionals;
  NormedSpace seq_space;
  MapHandle synthesis;  // seq_space -> base space
  std::pair<double, double> claimed_bounds{1.0, 1.0};
};

// Validates shapes: scalar functionals with one common domain, synthesis
// from seq_space onto that domain, seq dim >= family size, 0 < a <= b.
MetricFrame make_frame(std::vector<MapHandle> functionals, NormedSpace seq_space,
                       MapHandle synthesis, std::pair<double, double> claimed_bounds);

const NormedSpace& frame_space(const MetricFrame& frame);

// {f_n(x)}_n zero-padded into seq_space.
Vector analysis(const MetricFrame& frame, const Vector& x);

// The analysis map as a handle (stacked functionals).
MapHandle analysis_map(const MetricFrame& frame);

struct FrameBoundEstimate {
  double a_emp = 0.0;  // min pairwise analysis quotient
  double b_emp = 0.0;  // max pairwise analysis quotient
  double reconstruction_max_error = 0.0;
};

// Pairwise ratios ||theta(x) - theta(y)|| / d(x,y) over the sample plus the
// worst reconstruction error. Coincident pairs are skipped; an all-coincident
// sample is an error.
FrameBoundEstimate frame_bounds_estimate(const MetricFrame& frame, const SamplerConfig& sampler);

// Replaces the synthesis map by T when (lambda1, lambda2, mu) witness the
// three-constant inequality between S and T on coefficient differences and
// max{lambda2, lambda1 + mu*b} < 1. New functionals g_n = f_n o (T theta)^-1
// evaluate through a certified inversion cached by input; claimed bounds
// become (a(1-l2)/(1+l1+mu b), b(1+l2)/(1-(l1+mu b))). Reconstruction
// T({g_n(x)}) = x is re-verified on the sample to the solver target.
MetricFrame perturb_frame(const MetricFrame& frame, const MapHandle& T,
                          const PerturbationProfile& profile, const SamplerConfig& sampler,
                          const SolverConfig& solver = {});

// The frame whose synthesis sends e_n to atom n (linear). The caller affirms
// the unit vectors form a basis of the coefficient space; bounds carry over.
MetricFrame frame_from_atomic(const AtomicDecomposition& dec, bool unit_vector_basis);

// Atoms tau_n = S(e_n) for linear S (affine with zero offset required),
// functionals and bounds kept.
AtomicDecomposition atomic_from_frame(const MetricFrame& frame);

}  // namespace lipkit
