#include "lipkit/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "lipkit/error.hpp"
#include "lipkit/linalg.hpp"

namespace lipkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Boundary line lambda2 = b - m * lambda1 of a constraint with t > 0.
struct Line {
  double m = 0.0;  // s / t, >= 0
  double b = 0.0;  // r / t, > 0
};

double intersect_x(const Line& p, const Line& q) { return (q.b - p.b) / (q.m - p.m); }

void check_constraint(const PairConstraint& c) {
  if (!(c.s >= 0.0) || !(c.t >= 0.0) || !(c.r >= 0.0) || !(c.c >= 0.0) ||
      !std::isfinite(c.s) || !std::isfinite(c.t) || !std::isfinite(c.r)) {
    fail(ErrorKind::domain, "pair constraint needs finite nonnegative s, t, r");
  }
}

}  // namespace

Frontier compute_frontier(const std::vector<PairConstraint>& constraints) {
  double x_min = 0.0;
  std::vector<Line> lines;
  lines.reserve(constraints.size());
  for (const auto& c : constraints) {
    check_constraint(c);
    if (c.r == 0.0) continue;  // satisfied everywhere in the quadrant
    if (c.t == 0.0) {
      if (c.s == 0.0) {
        std::ostringstream msg;
        msg << "pair with equal map values but difference gap " << c.r
            << "; no constants can satisfy it";
        fail(ErrorKind::inconsistent_pair, msg.str());
      }
      x_min = std::max(x_min, c.r / c.s);
    } else {
      lines.push_back({c.s / c.t, c.r / c.t});
    }
  }

  Frontier out;
  if (lines.empty()) {
    out.vertices.push_back({x_min, 0.0});
    return out;
  }

  // Upper envelope of lambda2 = b - m * lambda1. Sorted by slope (-m)
  // ascending, equal slopes keep the dominating intercept, then the usual
  // hull sweep: the middle line drops when the outer pair meets at or before
  // its entry point.
  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    if (a.m != b.m) return a.m > b.m;
    return a.b > b.b;
  });
  std::vector<Line> hull;
  for (const auto& ln : lines) {
    if (!hull.empty() && hull.back().m == ln.m) continue;
    while (hull.size() >= 2 &&
           intersect_x(hull[hull.size() - 2], ln) <=
               intersect_x(hull[hull.size() - 2], hull.back())) {
      hull.pop_back();
    }
    hull.push_back(ln);
  }

  // Pieces run left to right; piece i hands over to i+1 at breaks[i].
  std::vector<double> breaks(hull.size() > 1 ? hull.size() - 1 : 0);
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    breaks[i] = intersect_x(hull[i], hull[i + 1]);
  }

  std::size_t piece = hull.size() - 1;
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    if (breaks[i] > x_min) {
      piece = i;
      break;
    }
  }

  double y0 = hull[piece].b - hull[piece].m * x_min;
  if (y0 <= 0.0) {
    out.vertices.push_back({x_min, 0.0});
    return out;
  }
  out.vertices.push_back({x_min, y0});

  while (true) {
    const Line& ln = hull[piece];
    if (ln.m == 0.0) break;  // flat tail: everything right of the entry vertex is dominated
    double right = piece + 1 < hull.size() ? breaks[piece] : kInf;
    double x_zero = ln.b / ln.m;
    if (x_zero <= right) {
      if (x_zero > out.vertices.back().lambda1) out.vertices.push_back({x_zero, 0.0});
      break;
    }
    double yb = ln.b - ln.m * right;
    if (yb <= 0.0) {  // rounding pushed the crossing past the breakpoint
      out.vertices.push_back({right, 0.0});
      break;
    }
    if (right > out.vertices.back().lambda1 && yb < out.vertices.back().lambda2) {
      out.vertices.push_back({right, yb});
    }
    ++piece;
  }
  return out;
}

double objective_value(const ObjectiveSpec& objective, double lambda1, double lambda2,
                       double mu) {
  switch (objective.kind) {
    case ObjectiveKind::inv_factor:
      return lambda1 < 1.0 ? (1.0 + lambda2) / (1.0 - lambda1) : kInf;
    case ObjectiveKind::fwd_factor:
      return lambda2 < 1.0 ? (1.0 + lambda1) / (1.0 - lambda2) : kInf;
    case ObjectiveKind::sum:
      return lambda1 + lambda2;
    case ObjectiveKind::weighted:
      return objective.w1 * lambda1 + objective.w2 * lambda2;
    case ObjectiveKind::stability_ratio: {
      double le = lambda1 + mu * objective.frame_bound_b;
      if (le >= 1.0 || lambda2 >= 1.0) return kInf;
      return (1.0 + lambda2) * (1.0 + le) / ((1.0 - lambda2) * (1.0 - le));
    }
  }
  fail(ErrorKind::internal, "unhandled objective kind");
}

FrontierPoint select_on_frontier(const Frontier& frontier, const ObjectiveSpec& objective,
                                 double mu) {
  std::optional<FrontierPoint> best;
  double best_value = kInf;
  for (const auto& v : frontier.vertices) {
    if (!(v.lambda1 < 1.0) || !(v.lambda2 < 1.0)) continue;
    double value = objective_value(objective, v.lambda1, v.lambda2, mu);
    if (!std::isfinite(value)) continue;
    if (value < best_value) {
      best_value = value;
      best = v;
    }
  }
  if (!best) {
    fail(ErrorKind::not_verifiable,
         "no frontier point has both constants below one with a finite objective");
  }
  return *best;
}

PerturbationProfile profile_from_constants(double lambda1, double lambda2, double mu) {
  if (!std::isfinite(lambda1) || lambda1 < 0.0 || lambda1 >= 1.0) {
    fail(ErrorKind::domain, "lambda1 must lie in [0, 1)");
  }
  if (!std::isfinite(lambda2) || lambda2 < 0.0 || lambda2 > 1.0) {
    fail(ErrorKind::domain, "lambda2 must lie in [0, 1]");
  }
  if (!std::isfinite(mu) || mu < 0.0) {
    fail(ErrorKind::domain, "mu must be a finite nonnegative value");
  }
  PerturbationProfile p;
  p.lambda1 = lambda1;
  p.lambda2 = lambda2;
  p.mu = mu;
  p.lambda2_is_one = lambda2 == 1.0;
  p.frontier.vertices.push_back({lambda1, lambda2});
  return p;
}

std::vector<PairConstraint> sample_constraints(const MapHandle& S, const MapHandle& T,
                                               const SamplerConfig& sampler) {
  if (!(S.domain() == T.domain())) {
    fail(ErrorKind::structural, "maps being compared need a common domain");
  }
  if (!(S.codomain() == T.codomain())) {
    fail(ErrorKind::structural, "maps being compared need a common codomain");
  }
  auto points = sample_points(S.domain(), sampler);
  auto pairs = sample_pairs(static_cast<int>(points.size()), sampler);
  if (pairs.empty()) {
    fail(ErrorKind::degenerate_sample, "need at least two sample points to form pairs");
  }
  const NormedSpace& dom = S.domain();
  const NormedSpace& cod = S.codomain();
  std::vector<PairConstraint> out;
  out.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    Vector ds = map_difference(S, points[i], points[j]);
    Vector dt = map_difference(T, points[i], points[j]);
    PairConstraint c;
    c.s = norm(cod, ds);
    c.t = norm(cod, dt);
    c.r = norm(cod, sub(dt, ds));
    c.c = distance(dom, points[i], points[j]);
    out.push_back(c);
  }
  return out;
}

namespace {

struct AnchorInfo {
  std::vector<PairConstraint> anchors;
  bool certified = false;
  double diff_norm = -1.0;  // exact ||A_T - A_S|| when computable
};

std::optional<double> exact_factor(const Matrix& product, const NormedSpace& domain,
                                   const NormedSpace& codomain) {
  MapHandle probe = affine_map(domain, codomain, product,
                               std::vector<double>(codomain.dim, 0.0));
  if (!lip_exact_supported(probe)) return std::nullopt;
  return lip_exact_affine(probe);
}

// For a pair of affine maps the difference is linear: ||E z|| is bounded by
// ||E S^-1|| ||S z|| and ||E T^-1|| ||T z||, so any constants on or above the
// line lambda1 / a1 + lambda2 / a2 = 1 satisfy the two-constant inequality
// for every input, not just the sample. One invertible side still yields the
// single-axis cut lambda1 >= a1 (or lambda2 >= a2).
AnchorInfo affine_anchors(const MapHandle& S, const MapHandle& T) {
  AnchorInfo info;
  const MapData& sd = S.raw();
  const MapData& td = T.raw();
  if (!sd.affine || !td.affine) return info;

  Matrix diff = matadd(td.affine->linear, matscale(-1.0, sd.affine->linear));
  if (max_abs_entry(diff) == 0.0) {
    info.certified = true;  // the difference is a constant shift
    info.diff_norm = 0.0;
    return info;
  }

  if (auto a0 = exact_factor(diff, S.domain(), S.codomain())) info.diff_norm = *a0;

  std::optional<double> a1, a2;
  if (sd.inverse_affine) {
    a1 = exact_factor(matmul(diff, sd.inverse_affine->linear), S.codomain(), S.codomain());
  }
  if (td.inverse_affine) {
    a2 = exact_factor(matmul(diff, td.inverse_affine->linear), T.codomain(), T.codomain());
  }
  if (a1 && *a1 > 0.0 && a2 && *a2 > 0.0) {
    info.anchors.push_back({1.0 / *a1, 1.0 / *a2, 1.0, 0.0});
    info.certified = true;
  } else if (a1 && *a1 > 0.0) {
    info.anchors.push_back({1.0 / *a1, 0.0, 1.0, 0.0});
    info.certified = true;
  } else if (a2 && *a2 > 0.0) {
    info.anchors.push_back({0.0, 1.0 / *a2, 1.0, 0.0});
    info.certified = true;
  }
  return info;
}

}  // namespace

PerturbationProfile estimate_profile(const MapHandle& S, const MapHandle& T,
                                     const SamplerConfig& sampler, const ProfileConfig& cfg) {
  auto constraints = sample_constraints(S, T, sampler);
  bool certified = false;
  if (cfg.use_affine_certificates) {
    AnchorInfo info = affine_anchors(S, T);
    constraints.insert(constraints.end(), info.anchors.begin(), info.anchors.end());
    certified = info.certified;
  }
  Frontier frontier = compute_frontier(constraints);
  FrontierPoint pick = select_on_frontier(frontier, cfg.objective, 0.0);

  PerturbationProfile p;
  p.lambda1 = pick.lambda1;
  p.lambda2 = pick.lambda2;
  p.globally_certified = certified;
  p.frontier = std::move(frontier);
  p.sample_seed = sampler.seed;
  return p;
}

PerturbationProfile estimate_profile_mu(const MapHandle& S, const MapHandle& T,
                                        const SamplerConfig& sampler,
                                        const std::vector<double>& mu_grid,
                                        const ProfileConfig& cfg) {
  if (mu_grid.empty()) fail(ErrorKind::domain, "mu grid must not be empty");
  for (double mu : mu_grid) {
    if (!std::isfinite(mu) || mu < 0.0) {
      fail(ErrorKind::domain, "mu grid entries must be finite and nonnegative");
    }
  }

  auto base = sample_constraints(S, T, sampler);
  AnchorInfo info;
  if (cfg.use_affine_certificates) info = affine_anchors(S, T);

  std::optional<PerturbationProfile> best;
  double best_value = kInf;
  for (double mu : mu_grid) {
    std::vector<PairConstraint> constraints;
    constraints.reserve(base.size() + info.anchors.size());
    for (const auto& c : base) {
      constraints.push_back({c.s, c.t, std::max(0.0, c.r - mu * c.c), c.c});
    }
    for (const auto& a : info.anchors) {
      // With ||E|| known the additive term certifies part of the gap; without
      // it the undiscounted cut is kept, which is sufficient, only stronger.
      double r = info.diff_norm > 0.0 ? std::max(0.0, 1.0 - mu / info.diff_norm) : a.r;
      if (r > 0.0) constraints.push_back({a.s, a.t, r, 0.0});
    }
    Frontier frontier = compute_frontier(constraints);
    FrontierPoint pick;
    try {
      pick = select_on_frontier(frontier, cfg.objective, mu);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::not_verifiable) continue;
      throw;
    }
    double value = objective_value(cfg.objective, pick.lambda1, pick.lambda2, mu);
    if (value < best_value) {
      best_value = value;
      PerturbationProfile p;
      p.lambda1 = pick.lambda1;
      p.lambda2 = pick.lambda2;
      p.mu = mu;
      p.globally_certified = info.certified;
      p.frontier = std::move(frontier);
      p.sample_seed = sampler.seed;
      best = std::move(p);
    }
  }
  if (!best) {
    fail(ErrorKind::not_verifiable, "no mu in the grid yields verifiable constants");
  }
  return *best;
}

double validate_profile(const MapHandle& S, const MapHandle& T,
                        const PerturbationProfile& profile, const SamplerConfig& sampler) {
  auto constraints = sample_constraints(S, T, sampler);
  double worst = -kInf;
  for (const auto& c : constraints) {
    double slack = c.r - profile.lambda1 * c.s - profile.lambda2 * c.t - profile.mu * c.c;
    worst = std::max(worst, slack / std::max(1.0, c.r));
  }
  return worst;
}

}  // namespace lipkit
