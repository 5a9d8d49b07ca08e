#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lipkit/invert.hpp"
#include "lipkit/map.hpp"
#include "lipkit/profile.hpp"
#include "lipkit/sampler.hpp"

namespace lipkit {

// Functionals f_n and atoms tau_n with x = sum_n f_n(x) tau_n and two-sided
// bounds a, b on the coefficient map x -> {f_n(x)}. Everything is a finite
// family, so series questions never arise.
struct AtomicDecomposition {
  std::vector<MapHandle> functionals;
  std::vector<Vector> atoms;
  NormedSpace seq_space;
  std::pair<double, double> claimed_bounds{1.0, 1.0};
};

// Validates shapes: equal-length nonempty families, scalar functionals over
// the atoms' space, seq dimension at least the family size, 0 < a <= b.
AtomicDecomposition make_decomposition(std::vector<MapHandle> functionals,
                                       std::vector<Vector> atoms, NormedSpace seq_space,
                                       std::pair<double, double> claimed_bounds);

const NormedSpace& decomposition_space(const AtomicDecomposition& dec);

// x -> {f_n(x)}_n zero-padded into seq_space.
MapHandle coefficient_map(const AtomicDecomposition& dec);

// The linear synthesis {a_n} -> sum a_n tau_n determined by an atom list.
MapHandle synthesis_from_atoms(const NormedSpace& seq_space, const std::vector<Vector>& atoms);

Vector reconstruct(const AtomicDecomposition& dec, const Vector& x);

struct ValidationReport {
  double a_emp = 0.0;  // min pairwise coefficient-map quotient
  double b_emp = 0.0;  // max pairwise quotient
  double max_coeff_norm = 0.0;
  double max_reconstruction_error = 0.0;
  bool bounds_ok = false;          // a_emp >= a - tol and b_emp <= b + tol
  bool reconstruction_ok = false;  // max error <= tol
  bool pass = false;
};

ValidationReport check_decomposition(const AtomicDecomposition& dec,
                                     const SamplerConfig& sampler, double tolerance);

// Pulls a decomposition on the codomain of A back to its domain: functionals
// g_n o A, atoms B(omega_n), for bi-Lipschitz A and linear B with BA = id
// (identity verified on a sample to 1e-10). New claimed bounds scale the old
// ones by A's bi-Lipschitz constants: given explicitly, taken exactly for
// affine A, or estimated on the sample otherwise.
AtomicDecomposition lift_decomposition(
    const AtomicDecomposition& dec, const MapHandle& A, const MapHandle& B,
    const SamplerConfig& sampler = {},
    std::optional<std::pair<double, double>> a_bilip = std::nullopt);

struct SchauderReport {
  bool pass = false;
  // max over sampled coefficient vectors and n < m of the partial-sum norm
  // ratio: a certified-on-sample lower bound of the true basis constant.
  double basis_constant_estimate = 0.0;
  bool all_nonzero = false;
  bool spans = false;
  int rank = 0;
  std::string reason;
};

// Checks the finite Schauder-basis characterization: nonzero atoms, full
// span (rank with pivots below pivot_rel_tol * largest entry treated as
// zero), and the sampled basis-constant estimate. Coefficient probes always
// include the unit vectors, so orthogonal families report exactly 1.
SchauderReport schauder_check(const std::vector<Vector>& atoms, double pivot_rel_tol = 1e-10,
                              int sample_count = 200, std::uint64_t seed = 0);

// Dilation of a decomposition into a space with a canonical basis: theta
// embeds points as coefficient sequences, gamma synthesizes back, and
// P = theta o gamma is idempotent with P(basis[n]) = theta(atom n) for
// nonzero atoms. Zero atoms split into a Euclidean factor outside the
// range of gamma; their functionals are forced to zero first (reported).
struct DilationResult {
  NormedSpace Z;
  MapHandle theta;  // base -> Z
  MapHandle gamma;  // Z -> base, linear
  MapHandle P;      // Z -> Z
  std::vector<Vector> basis;            // one Z-vector per atom
  std::vector<int> zero_atom_indices;   // ascending positions of zero atoms
  std::vector<int> normalized_indices;  // zero-atom slots whose functional was nonzero
  AtomicDecomposition normalized;       // the decomposition actually dilated
};

DilationResult dilate(const AtomicDecomposition& dec, int verify_samples = 128,
                      std::uint64_t seed = 0, double verify_tol = 1e-10);

// Swaps the atom family tau -> omega while keeping reconstruction: builds
// T(x) = sum f_n(x) omega_n, inverts it through the certified solver with
// constants (lambda1 + mu*b, lambda2), and returns (f_n o T^-1, omega) with
// the inherited bound pair (a(1-l2)/(1+l1+mu b), b(1+l2)/(1-(l1+mu b))).
// The three-constant inequality behind those constants is validated on
// sampled coefficient pairs first.
AtomicDecomposition perturb_decomposition(const AtomicDecomposition& dec,
                                          const std::vector<Vector>& new_atoms,
                                          const PerturbationProfile& profile,
                                          const SamplerConfig& sampler,
                                          const SolverConfig& solver);

}  // namespace lipkit
