#pragma once

#include <string>
#include <utility>
#include <vector>

namespace lipkit {

// Two-sided bounds inherited by a perturbed map T from a bi-Lipschitz
// reference S, plus the open alpha-interval endpoint below which alpha*S - T
// stays invertible. All entries are finite and positive; formulas reject
// boundary inputs instead of emitting infinities.
struct BoundReport {
  double lip_T_lower = 0.0;
  double lip_T_upper = 0.0;
  double lip_Tinv_lower = 0.0;
  double lip_Tinv_upper = 0.0;
  double invertibility_threshold = 0.0;
  std::string formula_id;

  // inputs echoed
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lip_S = 1.0;
  double lip_S_inv = 1.0;
  double epsilon = 0.0;      // guo only
  double lip_TS_inv = 0.0;   // guo only
};

// lip_T in [(1-l1)/(1+l2), (1+l1)/(1-l2)] * lipS,
// lip_Tinv in [(1-l2)/((1+l1) lipS), (1+l2)/(1-l1) * lipSinv],
// threshold (1-l1)/(1+l2). Needs l1, l2 in [0,1), lipS, lipSinv > 0.
BoundReport bounds_main(double lambda1, double lambda2, double lip_S, double lip_S_inv);

// Single-constant case: both maps sandwiched by (1-l)/(1+l) and (1+l)/(1-l).
BoundReport bounds_hilding(double lambda);

// Epsilon refinement: admits lambda2 up to 1 and trades it down to
// lambda2 - eps at the cost of lambda1 + eps * lip(T S^-1), then defers to
// bounds_main at the effective constants. Both trades must stay strict.
BoundReport bounds_guo(double lambda1, double lambda2, double epsilon, double lip_TS_inv,
                       double lip_S = 1.0, double lip_S_inv = 1.0);

struct GuoSweepResult {
  double epsilon = 0.0;
  BoundReport report;
};

// Feasibility is not monotone in eps, so the grid is tried exhaustively and
// the admissible eps with the smallest lip_Tinv_upper wins.
GuoSweepResult guo_sweep(double lambda1, double lambda2, double lip_TS_inv,
                         const std::vector<double>& eps_grid, double lip_S = 1.0,
                         double lip_S_inv = 1.0);

// Constants valid for the p-combined inequality reduce to plain two-constant
// form: unchanged for p >= 1, scaled by 2^{1/p-1} for 0 < p < 1 (inputs must
// then lie below the cap 2^{1-1/p} so the outputs stay below 1).
std::pair<double, double> reduce_p_combined(double lambda1, double lambda2, double p);

// Unit second constant: only the inverse keeps a bound, 2 * lipSinv / (1 - lambda).
double bounds_lambda2_one(double lambda, double lip_S_inv);

// Soderlind-Campanato: Lip(A^-1) <= alpha / (1 - beta).
double bounds_soderlind(double alpha, double beta);

// Barbagallo-Ernst-Thera: (1-beta)/(alpha(1-2beta)) in general (needs
// beta < 1/2), (1+beta)/alpha with Hilbert geometry.
double bounds_barbagallo(double alpha, double beta, bool hilbert);

// Geometric rate of the Picard iteration for R = T S^-1: (l1+l2)/(1-l2).
// Contractive solving applies iff this is < 1; returned as-is otherwise.
double q_contraction_rate(double lambda1, double lambda2);

}  // namespace lipkit
