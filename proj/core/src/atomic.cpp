#include "lipkit/atomic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lipkit/error.hpp"
#include "lipkit/linalg.hpp"
#include "lipkit/rng.hpp"

namespace lipkit {

AtomicDecomposition make_decomposition(std::vector<MapHandle> functionals,
                                       std::vector<Vector> atoms, NormedSpace seq_space,
                                       std::pair<double, double> claimed_bounds) {
  if (functionals.empty() || functionals.size() != atoms.size()) {
    fail(ErrorKind::structural, "need equally many functionals and atoms, at least one each");
  }
  const NormedSpace& base = atoms.front().space;
  for (std::size_t n = 0; n < atoms.size(); ++n) {
    if (!(atoms[n].space == base)) {
      fail(ErrorKind::structural, "atoms must all live in one space");
    }
    if (!functionals[n].valid() || !(functionals[n].domain() == base) ||
        functionals[n].codomain().dim != 1) {
      fail(ErrorKind::structural, "functionals must be scalar-valued on the atoms' space");
    }
  }
  if (seq_space.dim < static_cast<int>(functionals.size())) {
    fail(ErrorKind::structural, "sequence space too small for the family");
  }
  auto [a, b] = claimed_bounds;
  if (!std::isfinite(a) || !std::isfinite(b) || a <= 0.0 || b < a) {
    fail(ErrorKind::domain, "claimed bounds need 0 < a <= b");
  }
  AtomicDecomposition dec;
  dec.functionals = std::move(functionals);
  dec.atoms = std::move(atoms);
  dec.seq_space = std::move(seq_space);
  dec.claimed_bounds = claimed_bounds;
  return dec;
}

const NormedSpace& decomposition_space(const AtomicDecomposition& dec) {
  return dec.atoms.front().space;
}

MapHandle coefficient_map(const AtomicDecomposition& dec) {
  return analysis_stack(dec.functionals, dec.seq_space);
}

MapHandle synthesis_from_atoms(const NormedSpace& seq_space, const std::vector<Vector>& atoms) {
  if (atoms.empty()) fail(ErrorKind::structural, "need at least one atom");
  const NormedSpace& base = atoms.front().space;
  int n = static_cast<int>(atoms.size());
  if (seq_space.dim < n) fail(ErrorKind::structural, "sequence space too small for the atoms");
  Matrix g = Matrix::zero(base.dim, seq_space.dim);
  for (int j = 0; j < n; ++j) {
    if (!(atoms[j].space == base)) fail(ErrorKind::structural, "atoms must share one space");
    for (int i = 0; i < base.dim; ++i) g.at(i, j) = atoms[j].coords[i];
  }
  return linear_map(seq_space, base, std::move(g));
}

Vector reconstruct(const AtomicDecomposition& dec, const Vector& x) {
  const NormedSpace& base = decomposition_space(dec);
  Vector out = zero_vector(base);
  for (std::size_t n = 0; n < dec.functionals.size(); ++n) {
    double c = evaluate(dec.functionals[n], x).coords[0];
    out = add(out, scale(c, dec.atoms[n]));
  }
  return out;
}

ValidationReport check_decomposition(const AtomicDecomposition& dec,
                                     const SamplerConfig& sampler, double tolerance) {
  if (!(tolerance >= 0.0) || !std::isfinite(tolerance)) {
    fail(ErrorKind::domain, "tolerance must be finite and nonnegative");
  }
  const NormedSpace& base = decomposition_space(dec);
  MapHandle theta = coefficient_map(dec);
  auto points = sample_points(base, sampler);
  auto pairs = sample_pairs(static_cast<int>(points.size()), sampler);
  if (pairs.empty()) fail(ErrorKind::degenerate_sample, "need at least two sample points");

  ValidationReport report;
  std::vector<Vector> coeffs;
  coeffs.reserve(points.size());
  for (const auto& x : points) {
    Vector c = evaluate(theta, x);
    report.max_coeff_norm = std::max(report.max_coeff_norm, norm(dec.seq_space, c));
    report.max_reconstruction_error =
        std::max(report.max_reconstruction_error, norm(base, sub(reconstruct(dec, x), x)));
    coeffs.push_back(std::move(c));
  }

  double a_emp = std::numeric_limits<double>::infinity();
  double b_emp = 0.0;
  bool usable = false;
  for (const auto& [i, j] : pairs) {
    double gap = distance(base, points[i], points[j]);
    if (gap == 0.0) continue;
    double ratio = norm(dec.seq_space, sub(coeffs[i], coeffs[j])) / gap;
    a_emp = std::min(a_emp, ratio);
    b_emp = std::max(b_emp, ratio);
    usable = true;
  }
  if (!usable) fail(ErrorKind::degenerate_sample, "all sampled points coincide");
  report.a_emp = a_emp;
  report.b_emp = b_emp;
  report.bounds_ok = a_emp >= dec.claimed_bounds.first - tolerance &&
                     b_emp <= dec.claimed_bounds.second + tolerance;
  report.reconstruction_ok = report.max_reconstruction_error <= tolerance;
  report.pass = report.bounds_ok && report.reconstruction_ok;
  return report;
}

AtomicDecomposition lift_decomposition(const AtomicDecomposition& dec, const MapHandle& A,
                                       const MapHandle& B, const SamplerConfig& sampler,
                                       std::optional<std::pair<double, double>> a_bilip) {
  const NormedSpace& upper = decomposition_space(dec);
  if (!(A.codomain() == upper) || !(B.domain() == upper) || !(A.domain() == B.codomain())) {
    fail(ErrorKind::structural, "lift needs A: X -> Y and B: Y -> X around the family's Y");
  }
  const MapData& bd = B.raw();
  bool b_linear = bd.affine.has_value();
  if (b_linear) {
    for (double c : bd.affine->offset) b_linear = b_linear && c == 0.0;
  }
  if (!b_linear) {
    fail(ErrorKind::unsupported, "left inverse must be linear (affine with zero offset)");
  }

  const NormedSpace& lower = A.domain();
  auto points = sample_points(lower, sampler);
  for (const auto& x : points) {
    double gap = norm(lower, sub(evaluate(B, evaluate(A, x)), x));
    if (gap > 1e-10) {
      std::ostringstream msg;
      msg << "B fails as a left inverse of A on the sample: ||BAx - x|| = " << gap;
      fail(ErrorKind::domain, msg.str());
    }
  }

  auto euclidean = [](const NormedSpace& sp) {
    return sp.norm.kind() == NormDescriptor::Kind::lp && !sp.norm.weights() &&
           !sp.norm.exponent().is_infinite() && sp.norm.exponent().value() == 2.0;
  };
  double alpha, beta;
  if (a_bilip) {
    alpha = a_bilip->first;
    beta = a_bilip->second;
    if (!std::isfinite(alpha) || !std::isfinite(beta) || alpha <= 0.0 || beta < alpha) {
      fail(ErrorKind::domain, "bi-Lipschitz constants need 0 < alpha <= beta");
    }
  } else if (A.raw().affine && A.raw().affine->linear.rows == A.raw().affine->linear.cols &&
             euclidean(A.domain()) && euclidean(A.codomain())) {
    const Matrix& m = A.raw().affine->linear;
    alpha = sigma_min(m);
    beta = power_sigma_max(m);
    if (alpha <= 0.0) fail(ErrorKind::domain, "A is not bi-Lipschitz (singular linear part)");
  } else {
    LipEstimate est = lip_estimate(A, sampler);
    alpha = est.bilip_lower;
    beta = est.lower;
    if (alpha <= 0.0) fail(ErrorKind::domain, "A shows no bi-Lipschitz floor on the sample");
  }

  std::vector<MapHandle> lifted;
  lifted.reserve(dec.functionals.size());
  for (const auto& g : dec.functionals) lifted.push_back(compose({A, g}));
  std::vector<Vector> atoms;
  atoms.reserve(dec.atoms.size());
  for (const auto& w : dec.atoms) atoms.push_back(evaluate(B, w));
  return make_decomposition(std::move(lifted), std::move(atoms), dec.seq_space,
                            {dec.claimed_bounds.first * alpha, dec.claimed_bounds.second * beta});
}

SchauderReport schauder_check(const std::vector<Vector>& atoms, double pivot_rel_tol,
                              int sample_count, std::uint64_t seed) {
  if (atoms.empty()) fail(ErrorKind::structural, "need at least one atom");
  if (sample_count < 0) fail(ErrorKind::domain, "sample count must be nonnegative");
  const NormedSpace& base = atoms.front().space;
  const int n_atoms = static_cast<int>(atoms.size());

  SchauderReport report;
  report.all_nonzero = true;
  for (int n = 0; n < n_atoms; ++n) {
    if (!(atoms[n].space == base)) fail(ErrorKind::structural, "atoms must share one space");
    if (norm(base, atoms[n]) == 0.0 && report.all_nonzero) {
      report.all_nonzero = false;
      std::ostringstream msg;
      msg << "atom " << n << " is zero";
      report.reason = msg.str();
    }
  }

  Matrix cols = Matrix::zero(base.dim, n_atoms);
  for (int j = 0; j < n_atoms; ++j) {
    for (int i = 0; i < base.dim; ++i) cols.at(i, j) = atoms[j].coords[i];
  }
  report.rank = matrix_rank(cols, pivot_rel_tol);
  report.spans = report.rank == base.dim;
  if (!report.spans && report.reason.empty()) {
    std::ostringstream msg;
    msg << "atoms span a subspace of rank " << report.rank << " in dimension " << base.dim;
    report.reason = msg.str();
  }

  // Coefficient probes: each unit vector (so tail-aligned partial sums give
  // the ratio 1 exactly), then random gaussian draws.
  std::vector<std::vector<double>> probes;
  for (int k = 0; k < n_atoms; ++k) {
    std::vector<double> unit(n_atoms, 0.0);
    unit[k] = 1.0;
    probes.push_back(std::move(unit));
  }
  Rng rng(seed);
  for (int s = 0; s < sample_count; ++s) {
    std::vector<double> a(n_atoms);
    for (auto& entry : a) entry = rng.gaussian();
    probes.push_back(std::move(a));
  }

  bool vanishing_tail = false;
  double estimate = 0.0;
  bool any_ratio = false;
  for (const auto& a : probes) {
    Vector sum = zero_vector(base);
    std::vector<double> norms(n_atoms);
    for (int k = 0; k < n_atoms; ++k) {
      sum = add(sum, scale(a[k], atoms[k]));
      norms[k] = norm(base, sum);
    }
    double prefix_max = 0.0;
    for (int m = 1; m < n_atoms; ++m) {
      prefix_max = std::max(prefix_max, norms[m - 1]);
      if (norms[m] > 0.0) {
        estimate = std::max(estimate, prefix_max / norms[m]);
        any_ratio = true;
      } else if (prefix_max > 0.0) {
        vanishing_tail = true;
      }
    }
  }
  if (!any_ratio) estimate = 1.0;  // single atom: the constant is trivially 1
  report.basis_constant_estimate = estimate;
  if (vanishing_tail && report.reason.empty()) {
    report.reason = "a later partial sum vanishes under a nonzero earlier one";
  }
  report.pass = report.all_nonzero && report.spans && !vanishing_tail;
  return report;
}

AtomicDecomposition perturb_decomposition(const AtomicDecomposition& dec,
                                          const std::vector<Vector>& new_atoms,
                                          const PerturbationProfile& profile,
                                          const SamplerConfig& sampler,
                                          const SolverConfig& solver) {
  const NormedSpace& base = decomposition_space(dec);
  if (new_atoms.size() != dec.atoms.size()) {
    fail(ErrorKind::structural, "replacement atom family must match the original size");
  }
  for (const auto& w : new_atoms) {
    if (!(w.space == base)) fail(ErrorKind::structural, "replacement atoms must live in the base space");
  }
  double b = dec.claimed_bounds.second;
  double effective1 = profile.lambda1 + profile.mu * b;
  if (!(profile.lambda2 < 1.0) || !(effective1 < 1.0)) {
    std::ostringstream msg;
    msg << "need max{lambda2, lambda1 + mu*b} < 1; got lambda2 = " << profile.lambda2
        << ", lambda1 + mu*b = " << effective1;
    fail(ErrorKind::domain, msg.str());
  }

  // The three-constant inequality is a statement about coefficient
  // differences through the two synthesis maps; both are linear here.
  MapHandle synth_old = synthesis_from_atoms(dec.seq_space, dec.atoms);
  MapHandle synth_new = synthesis_from_atoms(dec.seq_space, new_atoms);
  double violation = validate_profile(synth_old, synth_new, profile, sampler);
  if (violation > 1e-12) {
    std::ostringstream msg;
    msg << "constants fail the sampled coefficient inequality (violation " << violation << ")";
    fail(ErrorKind::domain, msg.str());
  }

  MapHandle T = compose({coefficient_map(dec), synth_new});
  PerturbationProfile reduced = profile_from_constants(effective1, profile.lambda2, 0.0);
  MapHandle T_inv = certified_inverse_map(T, identity_map(base), reduced, solver);

  std::vector<MapHandle> perturbed;
  perturbed.reserve(dec.functionals.size());
  for (const auto& f : dec.functionals) perturbed.push_back(compose({T_inv, f}));

  double lower = dec.claimed_bounds.first * (1.0 - profile.lambda2) / (1.0 + effective1);
  double upper = b * (1.0 + profile.lambda2) / (1.0 - effective1);
  return make_decomposition(std::move(perturbed), new_atoms, dec.seq_space, {lower, upper});
}

}  // namespace lipkit
