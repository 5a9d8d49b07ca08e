#include "lipkit/bounds.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "lipkit/error.hpp"

namespace lipkit {

namespace {

void check_unit_interval(double value, const char* name, bool allow_one = false) {
  bool ok = std::isfinite(value) && value >= 0.0 && (allow_one ? value <= 1.0 : value < 1.0);
  if (!ok) {
    std::ostringstream msg;
    msg << name << " = " << value << " must lie in [0, 1" << (allow_one ? "]" : ")");
    fail(ErrorKind::domain, msg.str());
  }
}

void check_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    std::ostringstream msg;
    msg << name << " = " << value << " must be positive and finite";
    fail(ErrorKind::domain, msg.str());
  }
}

void check_finite_report(const BoundReport& r) {
  bool ok = std::isfinite(r.lip_T_lower) && std::isfinite(r.lip_T_upper) &&
            std::isfinite(r.lip_Tinv_lower) && std::isfinite(r.lip_Tinv_upper) &&
            std::isfinite(r.invertibility_threshold) && r.lip_T_lower > 0.0 &&
            r.lip_Tinv_lower > 0.0;
  if (!ok) fail(ErrorKind::domain, "bound formula overflowed or degenerated for these inputs");
}

}  // namespace

BoundReport bounds_main(double lambda1, double lambda2, double lip_S, double lip_S_inv) {
  check_unit_interval(lambda1, "lambda1");
  check_unit_interval(lambda2, "lambda2");
  check_positive(lip_S, "lipS");
  check_positive(lip_S_inv, "lipSinv");

  BoundReport r;
  r.lip_T_lower = (1.0 - lambda1) / (1.0 + lambda2) * lip_S;
  r.lip_T_upper = (1.0 + lambda1) / (1.0 - lambda2) * lip_S;
  r.lip_Tinv_lower = (1.0 - lambda2) / (1.0 + lambda1) / lip_S;
  r.lip_Tinv_upper = (1.0 + lambda2) / (1.0 - lambda1) * lip_S_inv;
  r.invertibility_threshold = (1.0 - lambda1) / (1.0 + lambda2);
  r.formula_id = "main";
  r.lambda1 = lambda1;
  r.lambda2 = lambda2;
  r.lip_S = lip_S;
  r.lip_S_inv = lip_S_inv;
  check_finite_report(r);
  return r;
}

BoundReport bounds_hilding(double lambda) {
  check_unit_interval(lambda, "lambda");
  BoundReport r;
  double shrink = (1.0 - lambda) / (1.0 + lambda);
  double grow = (1.0 + lambda) / (1.0 - lambda);
  r.lip_T_lower = shrink;
  r.lip_T_upper = grow;
  r.lip_Tinv_lower = shrink;
  r.lip_Tinv_upper = grow;
  r.invertibility_threshold = shrink;
  r.formula_id = "hilding";
  r.lambda1 = lambda;
  r.lambda2 = lambda;
  check_finite_report(r);
  return r;
}

BoundReport bounds_guo(double lambda1, double lambda2, double epsilon, double lip_TS_inv,
                       double lip_S, double lip_S_inv) {
  check_unit_interval(lambda1, "lambda1");
  check_unit_interval(lambda2, "lambda2", /*allow_one=*/true);
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    fail(ErrorKind::domain, "epsilon must be positive");
  }
  if (!std::isfinite(lip_TS_inv) || lip_TS_inv < 0.0) {
    fail(ErrorKind::domain, "lip(TS^-1) must be finite and nonnegative");
  }
  double eff2 = lambda2 - epsilon;
  if (!(eff2 > 0.0)) {
    std::ostringstream msg;
    msg << "condition lambda2 - eps > 0 violated: " << lambda2 << " - " << epsilon;
    fail(ErrorKind::domain, msg.str());
  }
  if (!(eff2 < 1.0)) {
    std::ostringstream msg;
    msg << "condition lambda2 - eps < 1 violated: " << lambda2 << " - " << epsilon;
    fail(ErrorKind::domain, msg.str());
  }
  double eff1 = lambda1 + epsilon * lip_TS_inv;
  if (!(eff1 < 1.0)) {
    std::ostringstream msg;
    msg << "condition lambda1 + eps*lip(TS^-1) < 1 violated: " << lambda1 << " + " << epsilon
        << " * " << lip_TS_inv;
    fail(ErrorKind::domain, msg.str());
  }
  BoundReport r = bounds_main(eff1, eff2, lip_S, lip_S_inv);
  r.formula_id = "guo";
  r.lambda1 = lambda1;
  r.lambda2 = lambda2;
  r.epsilon = epsilon;
  r.lip_TS_inv = lip_TS_inv;
  return r;
}

GuoSweepResult guo_sweep(double lambda1, double lambda2, double lip_TS_inv,
                         const std::vector<double>& eps_grid, double lip_S,
                         double lip_S_inv) {
  if (eps_grid.empty()) fail(ErrorKind::domain, "epsilon grid must not be empty");
  GuoSweepResult best;
  double best_upper = std::numeric_limits<double>::infinity();
  for (double eps : eps_grid) {
    BoundReport r;
    try {
      r = bounds_guo(lambda1, lambda2, eps, lip_TS_inv, lip_S, lip_S_inv);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::domain) continue;  // inadmissible eps, keep sweeping
      throw;
    }
    if (r.lip_Tinv_upper < best_upper) {
      best_upper = r.lip_Tinv_upper;
      best.epsilon = eps;
      best.report = r;
    }
  }
  if (!std::isfinite(best_upper)) {
    fail(ErrorKind::not_verifiable, "no epsilon in the grid satisfies the strict conditions");
  }
  return best;
}

std::pair<double, double> reduce_p_combined(double lambda1, double lambda2, double p) {
  if (!std::isfinite(p) || p <= 0.0) fail(ErrorKind::domain, "p must be positive");
  if (p >= 1.0) {
    check_unit_interval(lambda1, "lambda1");
    check_unit_interval(lambda2, "lambda2");
    return {lambda1, lambda2};
  }
  double cap = std::pow(2.0, 1.0 - 1.0 / p);
  auto check_cap = [&](double value, const char* name) {
    if (!std::isfinite(value) || value < 0.0 || value >= cap) {
      std::ostringstream msg;
      msg << name << " = " << value << " must lie in [0, " << cap << ") for p = " << p;
      fail(ErrorKind::domain, msg.str());
    }
  };
  check_cap(lambda1, "lambda1");
  check_cap(lambda2, "lambda2");
  double factor = std::pow(2.0, 1.0 / p - 1.0);
  return {factor * lambda1, factor * lambda2};
}

double bounds_lambda2_one(double lambda, double lip_S_inv) {
  check_unit_interval(lambda, "lambda");
  check_positive(lip_S_inv, "lipSinv");
  double bound = 2.0 * lip_S_inv / (1.0 - lambda);
  if (!std::isfinite(bound)) fail(ErrorKind::domain, "bound overflowed for these inputs");
  return bound;
}

double bounds_soderlind(double alpha, double beta) {
  check_positive(alpha, "alpha");
  check_unit_interval(beta, "beta");
  double bound = alpha / (1.0 - beta);
  if (!std::isfinite(bound)) fail(ErrorKind::domain, "bound overflowed for these inputs");
  return bound;
}

double bounds_barbagallo(double alpha, double beta, bool hilbert) {
  check_positive(alpha, "alpha");
  check_unit_interval(beta, "beta");
  if (hilbert) return (1.0 + beta) / alpha;
  if (beta >= 0.5) {
    fail(ErrorKind::domain,
         "case (i) needs beta < 1/2; only the Hilbert refinement admits larger beta");
  }
  return (1.0 - beta) / (alpha * (1.0 - 2.0 * beta));
}

double q_contraction_rate(double lambda1, double lambda2) {
  if (!std::isfinite(lambda1) || lambda1 < 0.0) {
    fail(ErrorKind::domain, "lambda1 must be finite and nonnegative");
  }
  check_unit_interval(lambda2, "lambda2");
  return (lambda1 + lambda2) / (1.0 - lambda2);
}

}  // namespace lipkit
