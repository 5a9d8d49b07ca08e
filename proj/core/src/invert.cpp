#include "lipkit/invert.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "lipkit/bounds.hpp"
#include "lipkit/linalg.hpp"
#include "lipkit/rng.hpp"

namespace lipkit {

const char* contraction_mode_name(ContractionMode mode) {
  switch (mode) {
    case ContractionMode::picard_contractive: return "picard-contractive";
    case ContractionMode::best_effort_certified: return "best-effort-certified";
  }
  return "unknown";
}

namespace {

struct Reduction {
  MapHandle S_inv;
  double lip_S_inv = 1.0;
  bool lip_exact = false;
};

Reduction prepare_reduction(const MapHandle& T, const MapHandle& S, const Vector& y,
                            const PerturbationProfile& profile, const SolverConfig& cfg) {
  if (profile.lambda2_is_one || !(profile.lambda1 < 1.0) || !(profile.lambda2 < 1.0)) {
    fail(ErrorKind::domain, "certified inversion needs lambda1 and lambda2 strictly below 1");
  }
  if (!(cfg.target > 0.0) || cfg.max_iters < 1) {
    fail(ErrorKind::domain, "solver config needs positive target and at least one iteration");
  }
  if (!(T.domain() == S.domain()) || !(T.codomain() == S.codomain())) {
    fail(ErrorKind::structural, "target and reference maps must share domain and codomain");
  }
  if (!(y.space == T.codomain())) {
    fail(ErrorKind::structural, "right-hand side does not live in the codomain");
  }
  Reduction red;
  auto inv = inverse_of(S);
  if (!inv) {
    fail(ErrorKind::structural, "reference map carries no usable inverse handle");
  }
  red.S_inv = *inv;
  if (lip_exact_supported(red.S_inv)) {
    red.lip_S_inv = lip_exact_affine(red.S_inv);
    red.lip_exact = true;
  } else {
    SamplerConfig probe;
    probe.count = 48;
    probe.seed = cfg.seed;
    red.lip_S_inv = lip_estimate(red.S_inv, probe).lower;
    red.lip_exact = false;
  }
  return red;
}

InversionCertificate seal(const MapHandle& T, const Vector& y, const Reduction& red,
                          const PerturbationProfile& profile, const Vector& u, int iterations,
                          ContractionMode mode, double q, std::vector<double> history) {
  Vector x = evaluate(red.S_inv, u);
  Vector image = evaluate(T, x);
  InversionCertificate cert;
  cert.solution = x;
  cert.residual = norm(y.space, sub(image, y));
  cert.error_radius =
      (1.0 + profile.lambda2) / (1.0 - profile.lambda1) * red.lip_S_inv * cert.residual;
  cert.iterations = iterations;
  cert.contraction_mode = mode;
  cert.q = q;
  cert.lip_S_inv = red.lip_S_inv;
  cert.lip_S_inv_exact = red.lip_exact;
  cert.residual_history = std::move(history);
  return cert;
}

}  // namespace

InversionCertificate invert_certified(const MapHandle& T, const Vector& y, const MapHandle& S,
                                      const PerturbationProfile& profile,
                                      const SolverConfig& cfg) {
  Reduction red = prepare_reduction(T, S, y, profile, cfg);
  const NormedSpace& image_space = T.codomain();
  auto R = [&](const Vector& u) { return evaluate(T, evaluate(red.S_inv, u)); };
  double q = q_contraction_rate(profile.lambda1, profile.lambda2);

  if (q < 1.0) {
    Vector u = y;
    Vector Ru = R(u);
    double r = norm(image_space, sub(Ru, y));
    std::vector<double> history{r};
    int iters = 0;
    while (r > cfg.target && iters < cfg.max_iters) {
      u = sub(u, sub(Ru, y));
      ++iters;
      Ru = R(u);
      r = norm(image_space, sub(Ru, y));
      history.push_back(r);
    }
    InversionCertificate cert = seal(T, y, red, profile, u, iters,
                                     ContractionMode::picard_contractive, q, std::move(history));
    if (cert.residual > cfg.target) {
      std::ostringstream msg;
      msg << "picard iteration stalled at residual " << cert.residual << " after "
          << cert.iterations << " steps (target " << cfg.target << ")";
      throw SolverFailure(msg.str(), cert);
    }
    return cert;
  }

  // Rate >= 1: no contraction guarantee. Damped finite-difference
  // quasi-Newton on R(u) - y with deterministic restarts; the certificate's
  // radius stays valid no matter which start produced the point.
  const int n = image_space.dim;
  int restarts = std::max(cfg.restarts, 1);
  int per_start = std::max(cfg.max_iters / restarts, 1);
  Vector best_u = y;
  double best_r = norm(image_space, sub(R(y), y));
  std::vector<double> history{best_r};
  int iters = 0;
  bool reached = best_r <= cfg.target;

  for (int start = 0; start < restarts && !reached; ++start) {
    Vector u = y;
    if (start > 0) {
      Rng rng(cfg.seed ^ (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(start)));
      double spread = 0.25 * start * (1.0 + norm(image_space, y));
      for (int i = 0; i < n; ++i) u.coords[i] += spread * rng.gaussian();
    }
    Vector g = sub(R(u), y);
    double r = norm(image_space, g);
    if (r < best_r) {
      best_r = r;
      best_u = u;
      history.push_back(r);
    }
    for (int step = 0; step < per_start && r > cfg.target; ++step) {
      Matrix J = Matrix::zero(n, n);
      for (int j = 0; j < n; ++j) {
        double h = cfg.fd_step * std::max(1.0, std::fabs(u.coords[j]));
        Vector shifted = u;
        shifted.coords[j] += h;
        Vector gs = sub(R(shifted), y);
        for (int i = 0; i < n; ++i) J.at(i, j) = (gs.coords[i] - g.coords[i]) / h;
      }
      std::vector<double> delta(n, 0.0);
      LuFactors lu = lu_factor(J);
      if (!lu.singular) {
        std::vector<double> rhs(n);
        for (int i = 0; i < n; ++i) rhs[i] = -g.coords[i];
        delta = lu_solve(lu, rhs);
      } else {
        for (int i = 0; i < n; ++i) delta[i] = -g.coords[i];  // fall back to a picard step
      }
      bool accepted = false;
      double t = 1.0;
      for (int halving = 0; halving < 25; ++halving, t *= 0.5) {
        Vector trial = u;
        for (int i = 0; i < n; ++i) trial.coords[i] += t * delta[i];
        Vector gt = sub(R(trial), y);
        double rt = norm(image_space, gt);
        if (rt < r) {
          u = trial;
          g = gt;
          r = rt;
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
      ++iters;
      if (r < best_r) {
        best_r = r;
        best_u = u;
        history.push_back(r);
      }
    }
    reached = best_r <= cfg.target;
  }

  InversionCertificate cert = seal(T, y, red, profile, best_u, iters,
                                   ContractionMode::best_effort_certified, q,
                                   std::move(history));
  if (cert.residual > cfg.target) {
    std::ostringstream msg;
    msg << "best-effort solver reached residual " << cert.residual << " after " << restarts
        << " starts (target " << cfg.target << ")";
    throw SolverFailure(msg.str(), cert);
  }
  return cert;
}

MapHandle certified_inverse_map(const MapHandle& T, const MapHandle& S,
                                const PerturbationProfile& profile, const SolverConfig& cfg) {
  if (profile.lambda2_is_one || !(profile.lambda1 < 1.0) || !(profile.lambda2 < 1.0)) {
    fail(ErrorKind::domain, "certified inversion needs lambda1 and lambda2 strictly below 1");
  }
  if (!(T.domain() == S.domain()) || !(T.codomain() == S.codomain())) {
    fail(ErrorKind::structural, "target and reference maps must share domain and codomain");
  }
  auto data = std::make_shared<MapData>();
  data->domain = T.codomain();
  data->codomain = T.domain();
  data->kind = MapKind::inverse_of;
  InverseOfData meta;
  meta.lambda1 = profile.lambda1;
  meta.lambda2 = profile.lambda2;
  meta.target_residual = cfg.target;
  meta.max_iterations = cfg.max_iters;
  meta.restarts = cfg.restarts;
  meta.fd_step = cfg.fd_step;
  meta.seed = cfg.seed;
  data->inverse_of = meta;
  data->children = {T, S};
  data->serializable = T.raw().serializable && S.raw().serializable;
  data->cache = std::make_shared<EvalCache>();
  data->label = "certified-inverse";

  NormedSpace y_space = T.codomain();
  auto cache = data->cache;
  data->eval = [T, S, profile, cfg, y_space, cache](const std::vector<double>& in) {
    {
      std::lock_guard<std::mutex> hold(cache->mutex);
      auto found = cache->values.find(in);
      if (found != cache->values.end()) return found->second;
    }
    Vector y = make_vector(y_space, in);
    InversionCertificate cert = invert_certified(T, y, S, profile, cfg);
    std::lock_guard<std::mutex> hold(cache->mutex);
    auto [slot, inserted] = cache->values.emplace(in, cert.solution.coords);
    (void)inserted;
    return slot->second;
  };
  return make_map(std::move(data));
}

}  // namespace lipkit
