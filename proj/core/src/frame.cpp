#include "lipkit/frame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lipkit/error.hpp"
#include "lipkit/linalg.hpp"

namespace lipkit {

MetricFrame make_frame(std::vector<MapHandle> functionals, NormedSpace seq_space,
                       MapHandle synthesis, std::pair<double, double> claimed_bounds) {
  if (functionals.empty()) fail(ErrorKind::structural, "a frame needs at least one functional");
  const NormedSpace& base = functionals.front().domain();
  for (const auto& f : functionals) {
    if (!f.valid() || !(f.domain() == base) || f.codomain().dim != 1) {
      fail(ErrorKind::structural, "functionals must be scalar-valued on one common space");
    }
  }
  if (seq_space.dim < static_cast<int>(functionals.size())) {
    fail(ErrorKind::structural, "coefficient space too small for the family");
  }
  if (!synthesis.valid() || !(synthesis.domain() == seq_space) ||
      !(synthesis.codomain() == base)) {
    fail(ErrorKind::structural, "synthesis must map the coefficient space onto the base space");
  }
  auto [a, b] = claimed_bounds;
  if (!std::isfinite(a) || !std::isfinite(b) || a <= 0.0 || b < a) {
    fail(ErrorKind::domain, "claimed bounds need 0 < a <= b");
  }
  MetricFrame frame;
  frame.functionals = std::move(functionals);
  frame.seq_space = std::move(seq_space);
  frame.synthesis = std::move(synthesis);
  frame.claimed_bounds = claimed_bounds;
  return frame;
}

const NormedSpace& frame_space(const MetricFrame& frame) {
  return frame.functionals.front().domain();
}

Vector analysis(const MetricFrame& frame, const Vector& x) {
  if (!(x.space == frame_space(frame))) {
    fail(ErrorKind::structural, "point does not live in the frame's space");
  }
  Vector out = zero_vector(frame.seq_space);
  for (std::size_t n = 0; n < frame.functionals.size(); ++n) {
    out.coords[n] = evaluate(frame.functionals[n], x).coords[0];
  }
  return out;
}

MapHandle analysis_map(const MetricFrame& frame) {
  return analysis_stack(frame.functionals, frame.seq_space);
}

FrameBoundEstimate frame_bounds_estimate(const MetricFrame& frame, const SamplerConfig& sampler) {
  const NormedSpace& base = frame_space(frame);
  auto points = sample_points(base, sampler);
  auto pairs = sample_pairs(static_cast<int>(points.size()), sampler);
  if (pairs.empty()) fail(ErrorKind::degenerate_sample, "need at least two sample points");

  FrameBoundEstimate est;
  std::vector<Vector> coeffs;
  coeffs.reserve(points.size());
  for (const auto& x : points) {
    Vector c = analysis(frame, x);
    est.reconstruction_max_error = std::max(
        est.reconstruction_max_error, norm(base, sub(evaluate(frame.synthesis, c), x)));
    coeffs.push_back(std::move(c));
  }

  double a_emp = std::numeric_limits<double>::infinity();
  double b_emp = 0.0;
  bool usable = false;
  for (const auto& [i, j] : pairs) {
    double gap = distance(base, points[i], points[j]);
    if (gap == 0.0) continue;
    double ratio = norm(frame.seq_space, sub(coeffs[i], coeffs[j])) / gap;
    a_emp = std::min(a_emp, ratio);
    b_emp = std::max(b_emp, ratio);
    usable = true;
  }
  if (!usable) fail(ErrorKind::degenerate_sample, "all sampled points coincide");
  est.a_emp = a_emp;
  est.b_emp = b_emp;
  return est;
}

MetricFrame perturb_frame(const MetricFrame& frame, const MapHandle& T,
                          const PerturbationProfile& profile, const SamplerConfig& sampler,
                          const SolverConfig& solver) {
  const NormedSpace& base = frame_space(frame);
  if (!T.valid() || !(T.domain() == frame.seq_space) || !(T.codomain() == base)) {
    fail(ErrorKind::structural, "replacement synthesis must share the frame's spaces");
  }
  double b = frame.claimed_bounds.second;
  double effective1 = profile.lambda1 + profile.mu * b;
  if (!(profile.lambda2 < 1.0) || !(effective1 < 1.0)) {
    std::ostringstream msg;
    msg << "need max{lambda2, lambda1 + mu*b} < 1; got lambda2 = " << profile.lambda2
        << ", lambda1 + mu*b = " << effective1;
    fail(ErrorKind::domain, msg.str());
  }
  double violation = validate_profile(frame.synthesis, T, profile, sampler);
  if (violation > 1e-12) {
    std::ostringstream msg;
    msg << "constants fail the sampled coefficient inequality (violation " << violation << ")";
    fail(ErrorKind::domain, msg.str());
  }

  MapHandle composite = compose({analysis_map(frame), T});
  PerturbationProfile reduced = profile_from_constants(effective1, profile.lambda2, 0.0);
  MapHandle inv = certified_inverse_map(composite, identity_map(base), reduced, solver);

  std::vector<MapHandle> perturbed;
  perturbed.reserve(frame.functionals.size());
  for (const auto& f : frame.functionals) perturbed.push_back(compose({inv, f}));

  double lower = frame.claimed_bounds.first * (1.0 - profile.lambda2) / (1.0 + effective1);
  double upper = b * (1.0 + profile.lambda2) / (1.0 - effective1);
  MetricFrame out = make_frame(std::move(perturbed), frame.seq_space, T, {lower, upper});

  for (const auto& x : sample_points(base, sampler)) {
    double err = norm(base, sub(evaluate(T, analysis(out, x)), x));
    if (err > solver.target) {
      std::ostringstream msg;
      msg << "perturbed frame fails reconstruction on the sample: error " << err;
      fail(ErrorKind::internal, msg.str());
    }
  }
  return out;
}

MetricFrame frame_from_atomic(const AtomicDecomposition& dec, bool unit_vector_basis) {
  if (!unit_vector_basis) {
    fail(ErrorKind::unsupported,
         "conversion needs the unit vectors as a basis of the coefficient space");
  }
  MapHandle synthesis = synthesis_from_atoms(dec.seq_space, dec.atoms);
  return make_frame(dec.functionals, dec.seq_space, std::move(synthesis), dec.claimed_bounds);
}

AtomicDecomposition atomic_from_frame(const MetricFrame& frame) {
  const MapData& sd = frame.synthesis.raw();
  bool linear = sd.affine.has_value();
  if (linear) {
    for (double c : sd.affine->offset) linear = linear && c == 0.0;
  }
  if (!linear) {
    fail(ErrorKind::unsupported, "conversion needs a linear synthesis (affine with zero offset)");
  }
  std::vector<Vector> atoms;
  atoms.reserve(frame.functionals.size());
  for (std::size_t n = 0; n < frame.functionals.size(); ++n) {
    Vector e = zero_vector(frame.seq_space);
    e.coords[n] = 1.0;
    atoms.push_back(evaluate(frame.synthesis, e));
  }
  return make_decomposition(frame.functionals, std::move(atoms), frame.seq_space,
                            frame.claimed_bounds);
}

}  // namespace lipkit
