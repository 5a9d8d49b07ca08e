#pragma once

#include <cstdint>
#include <vector>

#include "lipkit/error.hpp"
#include "lipkit/map.hpp"
#include "lipkit/profile.hpp"

namespace lipkit {

struct SolverConfig {
  double target = 1e-10;  // residual ||T(solution) - y|| to reach
  int max_iters = 10000;
  int restarts = 8;       // best-effort mode only
  double fd_step = 1e-6;  // finite-difference step of the quasi-Newton fallback
  std::uint64_t seed = 0;
};

enum class ContractionMode { picard_contractive, best_effort_certified };

const char* contraction_mode_name(ContractionMode mode);

// However the approximate solution was produced, the radius
//   error_radius = (1+lambda2)/(1-lambda1) * lip(S^-1) * residual
// bounds the distance to the true preimage, because it is the inverse bound
// applied to u = T(solution), v = y. The mode only says how the solve ran.
struct InversionCertificate {
  Vector solution;
  double residual = 0.0;      // ||T(solution) - y||
  double error_radius = 0.0;  // lip_Tinv_upper * residual
  int iterations = 0;
  ContractionMode contraction_mode = ContractionMode::picard_contractive;
  double q = 0.0;             // (l1+l2)/(1-l2) at configuration time
  double lip_S_inv = 1.0;     // value used in the radius
  bool lip_S_inv_exact = false;  // exact operator norm vs on-sample estimate
  std::vector<double> residual_history;  // per recorded iteration, monotone in picard mode
};

// Nonconvergence carries the best certificate reached so callers can still
// use its (valid) error radius.
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& message, InversionCertificate best)
      : Error(ErrorKind::solver_failure, message), best_(std::move(best)) {}
  const InversionCertificate& best() const { return best_; }

 private:
  InversionCertificate best_;
};

// Solves T(x) = y through the reduction R := T o S^-1: Picard iteration
// u_{k+1} = u_k - (R(u_k) - y) from u_0 = y when q < 1, a damped
// finite-difference quasi-Newton with seeded restarts otherwise.
InversionCertificate invert_certified(const MapHandle& T, const Vector& y, const MapHandle& S,
                                      const PerturbationProfile& profile,
                                      const SolverConfig& cfg = {});

// Handle whose evaluation runs invert_certified per input, memoized. The
// returned map is the lazily-realized T^-1 used by frame and decomposition
// perturbation.
MapHandle certified_inverse_map(const MapHandle& T, const MapHandle& S,
                                const PerturbationProfile& profile,
                                const SolverConfig& cfg = {});

}  // namespace lipkit
