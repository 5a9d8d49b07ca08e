#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "lipkit/atomic.hpp"
#include "lipkit/error.hpp"
#include "lipkit/linalg.hpp"

namespace lipkit {

namespace {

MapHandle zero_functional(const NormedSpace& domain, const NormedSpace& codomain) {
  return affine_map(domain, codomain, Matrix::zero(1, domain.dim), {0.0});
}

Vector unit_vector(const NormedSpace& space, int index) {
  Vector e = zero_vector(space);
  e.coords[index] = 1.0;
  return e;
}

}  // namespace

DilationResult dilate(const AtomicDecomposition& dec, int verify_samples, std::uint64_t seed,
                      double verify_tol) {
  if (verify_samples < 1) fail(ErrorKind::domain, "verification needs at least one sample");
  if (!(verify_tol > 0.0) || !std::isfinite(verify_tol)) {
    fail(ErrorKind::domain, "verification tolerance must be finite and positive");
  }
  const NormedSpace& base = decomposition_space(dec);
  const int n_atoms = static_cast<int>(dec.atoms.size());

  DilationResult result;
  std::vector<int> live;
  for (int n = 0; n < n_atoms; ++n) {
    if (norm(base, dec.atoms[n]) == 0.0) {
      result.zero_atom_indices.push_back(n);
    } else {
      live.push_back(n);
    }
  }
  if (live.empty()) fail(ErrorKind::domain, "every atom is zero; nothing spans the space");
  const int n_live = static_cast<int>(live.size());
  const int n_zero = n_atoms - n_live;

  // The partial-sum expression is a genuine norm, and gamma o theta = id is
  // attainable, only when the participating atoms are nonzero and span.
  std::vector<Vector> live_atoms;
  live_atoms.reserve(live.size());
  for (int n : live) live_atoms.push_back(dec.atoms[n]);
  SchauderReport span_report = schauder_check(live_atoms, 1e-10, 0, seed);
  if (!span_report.all_nonzero || !span_report.spans) {
    fail(ErrorKind::domain, "atom family unfit for dilation: " + span_report.reason);
  }

  // Functionals paired with zero atoms are replaced by the zero functional;
  // slots where that changed anything on the verification sample get reported.
  SamplerConfig base_cfg;
  base_cfg.count = verify_samples;
  base_cfg.seed = seed;
  auto base_points = sample_points(base, base_cfg);

  result.normalized = dec;
  for (int n : result.zero_atom_indices) {
    const MapHandle& original = dec.functionals[n];
    bool acted = false;
    for (const auto& x : base_points) {
      if (evaluate(original, x).coords[0] != 0.0) {
        acted = true;
        break;
      }
    }
    if (acted) result.normalized_indices.push_back(n);
    result.normalized.functionals[n] = zero_functional(base, original.codomain());
  }

  std::vector<std::vector<double>> live_coords;
  live_coords.reserve(live.size());
  for (int n : live) live_coords.push_back(dec.atoms[n].coords);

  Matrix synth = Matrix::zero(base.dim, n_atoms);
  std::vector<MapHandle> stacked;
  stacked.reserve(dec.functionals.size());
  result.basis.resize(n_atoms, zero_vector(base));  // placeholder, refilled below

  if (n_zero == 0) {
    result.Z = NormedSpace{n_atoms, NormDescriptor::max_partial_sum(base, live_coords)};
    stacked = result.normalized.functionals;
    for (int j = 0; j < n_atoms; ++j) {
      for (int i = 0; i < base.dim; ++i) synth.at(i, j) = dec.atoms[j].coords[i];
    }
    for (int n = 0; n < n_atoms; ++n) result.basis[n] = unit_vector(result.Z, n);
  } else {
    // Nonzero atoms carry the partial-sum norm; zero atoms are parked in a
    // Euclidean factor, with the maximum of the two component norms on top.
    NormedSpace span_part{n_live, NormDescriptor::max_partial_sum(base, live_coords)};
    NormedSpace rest = lp_space(n_zero, PExponent::finite(2.0));
    result.Z =
        NormedSpace{n_atoms, NormDescriptor::direct_sum_max({std::move(span_part), rest})};
    for (int j = 0; j < n_live; ++j) {
      stacked.push_back(result.normalized.functionals[live[j]]);
      for (int i = 0; i < base.dim; ++i) synth.at(i, j) = dec.atoms[live[j]].coords[i];
      result.basis[live[j]] = unit_vector(result.Z, j);
    }
    for (int j = 0; j < n_zero; ++j) {
      int n = result.zero_atom_indices[j];
      stacked.push_back(result.normalized.functionals[n]);
      result.basis[n] = unit_vector(result.Z, n_live + j);
    }
  }

  result.theta = analysis_stack(stacked, result.Z);
  result.gamma = linear_map(result.Z, base, std::move(synth));
  result.P = compose({result.gamma, result.theta});

  for (const auto& x : base_points) {
    double gap = norm(base, sub(evaluate(result.gamma, evaluate(result.theta, x)), x));
    if (gap > verify_tol) {
      std::ostringstream msg;
      msg << "family does not reconstruct on the sample: ||gamma(theta(x)) - x|| = " << gap;
      fail(ErrorKind::domain, msg.str());
    }
  }

  SamplerConfig z_cfg;
  z_cfg.count = verify_samples;
  z_cfg.seed = seed + 1;
  for (const auto& z : sample_points(result.Z, z_cfg)) {
    Vector pz = evaluate(result.P, z);
    double gap = norm(result.Z, sub(evaluate(result.P, pz), pz));
    if (gap > verify_tol) {
      std::ostringstream msg;
      msg << "projection is not idempotent on the sample: gap " << gap;
      fail(ErrorKind::internal, msg.str());
    }
  }
  for (int n : live) {
    Vector expect = evaluate(result.theta, dec.atoms[n]);
    double gap = norm(result.Z, sub(evaluate(result.P, result.basis[n]), expect));
    if (gap > verify_tol) {
      std::ostringstream msg;
      msg << "projection misses theta(atom " << n << ") by " << gap;
      fail(ErrorKind::internal, msg.str());
    }
  }
  return result;
}

}  // namespace lipkit
