#pragma once

#include <vector>

namespace lipkit {

// Dense row-major matrix sized for desk-scale problems (dimensions in the
// single digits). No expression templates, no views; every operation copies.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;  // rows * cols entries

  static Matrix zero(int rows, int cols);
  static Matrix identity(int n);

  double& at(int i, int j) { return data[static_cast<std::size_t>(i * cols + j)]; }
  double at(int i, int j) const { return data[static_cast<std::size_t>(i * cols + j)]; }
};

Matrix transpose(const Matrix& m);
Matrix matmul(const Matrix& a, const Matrix& b);
std::vector<double> matvec(const Matrix& m, const std::vector<double>& x);
Matrix matadd(const Matrix& a, const Matrix& b);
Matrix matscale(double factor, const Matrix& m);

// LU factorization with partial pivoting. `singular` is set instead of
// throwing so callers can treat near-singularity as data, not failure.
struct LuFactors {
  Matrix lu;
  std::vector<int> perm;
  bool singular = false;
};

LuFactors lu_factor(const Matrix& m);
std::vector<double> lu_solve(const LuFactors& f, const std::vector<double>& b);
// Throws unsupported for non-square input, solver_failure for singular input.
Matrix invert(const Matrix& m);
bool is_invertible(const Matrix& m);

// Row-echelon rank with pivots compared against rel_tol * max|entry| of the
// input matrix; rel_tol defaults to the project-wide pivot threshold.
int matrix_rank(const Matrix& m, double rel_tol = 1e-10);

// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps, ascending.
std::vector<double> sym_eigenvalues(Matrix s);

// All singular values, descending (square roots of eigenvalues of A^T A or
// A A^T, whichever is smaller).
std::vector<double> singular_values(const Matrix& m);
double sigma_min(const Matrix& m);

// Largest singular value by power iteration on A^T A, run to `rel_tol`
// relative residual. Deterministic start vectors; restarts guard against a
// start that is orthogonal to the leading eigenspace.
double power_sigma_max(const Matrix& m, double rel_tol = 1e-10);

double induced_norm_l1(const Matrix& m);    // max absolute column sum
double induced_norm_linf(const Matrix& m);  // max absolute row sum
double max_abs_entry(const Matrix& m);

}  // namespace lipkit
