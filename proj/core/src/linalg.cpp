#include "lipkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lipkit/error.hpp"

namespace lipkit {

namespace {

void require_shape(bool ok, const char* what) {
  if (!ok) fail(ErrorKind::structural, what);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

Matrix Matrix::zero(int rows, int cols) {
  require_shape(rows >= 0 && cols >= 0, "matrix dimensions must be nonnegative");
  Matrix m;
  m.rows = rows;
  m.cols = cols;
  m.data.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0);
  return m;
}

Matrix Matrix::identity(int n) {
  Matrix m = zero(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

Matrix transpose(const Matrix& m) {
  Matrix t = Matrix::zero(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
  return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  require_shape(a.cols == b.rows, "matmul: inner dimensions disagree");
  Matrix c = Matrix::zero(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = 0; k < a.cols; ++k) {
      const double aik = a.at(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols; ++j) c.at(i, j) += aik * b.at(k, j);
    }
  }
  return c;
}

std::vector<double> matvec(const Matrix& m, const std::vector<double>& x) {
  require_shape(static_cast<int>(x.size()) == m.cols, "matvec: vector length disagrees");
  std::vector<double> y(static_cast<std::size_t>(m.rows), 0.0);
  for (int i = 0; i < m.rows; ++i) {
    double sum = 0.0;
    for (int j = 0; j < m.cols; ++j) sum += m.at(i, j) * x[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = sum;
  }
  return y;
}

Matrix matadd(const Matrix& a, const Matrix& b) {
  require_shape(a.rows == b.rows && a.cols == b.cols, "matadd: shapes disagree");
  Matrix c = a;
  for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] += b.data[i];
  return c;
}

Matrix matscale(double factor, const Matrix& m) {
  Matrix c = m;
  for (double& v : c.data) v *= factor;
  return c;
}

LuFactors lu_factor(const Matrix& m) {
  require_shape(m.rows == m.cols, "lu_factor: matrix must be square");
  const int n = m.rows;
  LuFactors f;
  f.lu = m;
  f.perm.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) f.perm[static_cast<std::size_t>(i)] = i;

  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(f.lu.at(k, k));
    for (int i = k + 1; i < n; ++i) {
      double v = std::abs(f.lu.at(i, k));
      if (v > best) { best = v; piv = i; }
    }
    if (best == 0.0) {
      f.singular = true;
      return f;
    }
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(f.lu.at(k, j), f.lu.at(piv, j));
      std::swap(f.perm[static_cast<std::size_t>(k)], f.perm[static_cast<std::size_t>(piv)]);
    }
    const double pivot = f.lu.at(k, k);
    for (int i = k + 1; i < n; ++i) {
      const double factor = f.lu.at(i, k) / pivot;
      f.lu.at(i, k) = factor;
      for (int j = k + 1; j < n; ++j) f.lu.at(i, j) -= factor * f.lu.at(k, j);
    }
  }
  return f;
}

std::vector<double> lu_solve(const LuFactors& f, const std::vector<double>& b) {
  if (f.singular) fail(ErrorKind::solver_failure, "lu_solve: matrix is singular");
  const int n = f.lu.rows;
  require_shape(static_cast<int>(b.size()) == n, "lu_solve: vector length disagrees");
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(f.perm[static_cast<std::size_t>(i)])];
  for (int i = 1; i < n; ++i) {
    double sum = x[static_cast<std::size_t>(i)];
    for (int j = 0; j < i; ++j) sum -= f.lu.at(i, j) * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(i)] = sum;
  }
  for (int i = n - 1; i >= 0; --i) {
    double sum = x[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) sum -= f.lu.at(i, j) * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(i)] = sum / f.lu.at(i, i);
  }
  return x;
}

Matrix invert(const Matrix& m) {
  if (m.rows != m.cols) fail(ErrorKind::unsupported, "invert: matrix must be square");
  LuFactors f = lu_factor(m);
  if (f.singular) fail(ErrorKind::solver_failure, "invert: matrix is singular");
  const int n = m.rows;
  Matrix inv = Matrix::zero(n, n);
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    e[static_cast<std::size_t>(j)] = 1.0;
    std::vector<double> col = lu_solve(f, e);
    e[static_cast<std::size_t>(j)] = 0.0;
    for (int i = 0; i < n; ++i) inv.at(i, j) = col[static_cast<std::size_t>(i)];
  }
  return inv;
}

bool is_invertible(const Matrix& m) {
  if (m.rows != m.cols) return false;
  return !lu_factor(m).singular;
}

int matrix_rank(const Matrix& m, double rel_tol) {
  const double scale = max_abs_entry(m);
  if (scale == 0.0) return 0;
  const double tol = rel_tol * scale;
  Matrix a = m;
  int rank = 0;
  int row = 0;
  for (int col = 0; col < a.cols && row < a.rows; ++col) {
    int piv = row;
    double best = std::abs(a.at(row, col));
    for (int i = row + 1; i < a.rows; ++i) {
      double v = std::abs(a.at(i, col));
      if (v > best) { best = v; piv = i; }
    }
    if (best <= tol) continue;
    if (piv != row) {
      for (int j = 0; j < a.cols; ++j) std::swap(a.at(row, j), a.at(piv, j));
    }
    for (int i = row + 1; i < a.rows; ++i) {
      const double factor = a.at(i, col) / a.at(row, col);
      for (int j = col; j < a.cols; ++j) a.at(i, j) -= factor * a.at(row, j);
    }
    ++row;
    ++rank;
  }
  return rank;
}

std::vector<double> sym_eigenvalues(Matrix s) {
  require_shape(s.rows == s.cols, "sym_eigenvalues: matrix must be square");
  const int n = s.rows;
  std::vector<double> eig;
  if (n == 0) return eig;
  double frob = 0.0;
  for (double v : s.data) frob += v * v;
  frob = std::sqrt(frob);
  if (frob == 0.0) return std::vector<double>(static_cast<std::size_t>(n), 0.0);

  // Cyclic Jacobi with Rutishauser updates; converges quadratically once the
  // off-diagonal mass is small, so the sweep cap is generous headroom.
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += 2.0 * s.at(p, q) * s.at(p, q);
    if (std::sqrt(off) <= 1e-14 * frob) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = s.at(p, q);
        if (apq == 0.0) continue;
        const double app = s.at(p, p);
        const double aqq = s.at(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        double t;
        if (theta >= 0.0) {
          t = 1.0 / (theta + std::sqrt(1.0 + theta * theta));
        } else {
          t = -1.0 / (-theta + std::sqrt(1.0 + theta * theta));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        const double tau = sn / (1.0 + c);

        s.at(p, p) = app - t * apq;
        s.at(q, q) = aqq + t * apq;
        s.at(p, q) = 0.0;
        s.at(q, p) = 0.0;
        for (int i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const double aip = s.at(i, p);
          const double aiq = s.at(i, q);
          s.at(i, p) = aip - sn * (aiq + tau * aip);
          s.at(p, i) = s.at(i, p);
          s.at(i, q) = aiq + sn * (aip - tau * aiq);
          s.at(q, i) = s.at(i, q);
        }
      }
    }
  }
  eig.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) eig.push_back(s.at(i, i));
  std::sort(eig.begin(), eig.end());
  return eig;
}

std::vector<double> singular_values(const Matrix& m) {
  if (m.rows == 0 || m.cols == 0) return {};
  Matrix b = (m.cols <= m.rows) ? matmul(transpose(m), m) : matmul(m, transpose(m));
  std::vector<double> eig = sym_eigenvalues(b);
  std::vector<double> sv;
  sv.reserve(eig.size());
  for (auto it = eig.rbegin(); it != eig.rend(); ++it) sv.push_back(std::sqrt(std::max(*it, 0.0)));
  return sv;
}

double sigma_min(const Matrix& m) {
  std::vector<double> sv = singular_values(m);
  if (sv.empty()) fail(ErrorKind::structural, "sigma_min of an empty matrix");
  return sv.back();
}

double power_sigma_max(const Matrix& m, double rel_tol) {
  if (m.rows == 0 || m.cols == 0) return 0.0;
  const Matrix b = (m.cols <= m.rows) ? matmul(transpose(m), m) : matmul(m, transpose(m));
  const int k = b.rows;
  if (max_abs_entry(b) == 0.0) return 0.0;

  double best = 0.0;
  bool converged = false;
  const int max_iter = 200000;

  auto run = [&](std::vector<double> v) {
    double nv = norm2(v);
    if (nv == 0.0) return;
    for (double& c : v) c /= nv;
    double lambda = 0.0;
    for (int iter = 0; iter < max_iter; ++iter) {
      std::vector<double> w = matvec(b, v);
      lambda = dot(v, w);
      double res = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        const double d = w[i] - lambda * v[i];
        res += d * d;
      }
      if (std::sqrt(res) <= rel_tol * std::max(lambda, 1e-300)) {
        best = std::max(best, lambda);
        converged = true;
        return;
      }
      const double nw = norm2(w);
      if (nw == 0.0) return;  // start vector fell into the kernel
      for (std::size_t i = 0; i < w.size(); ++i) v[i] = w[i] / nw;
    }
    best = std::max(best, lambda);
  };

  // A ramp start has a component on every coordinate direction; the basis
  // starts cover the measure-zero case where it is orthogonal to the leading
  // eigenspace. The Rayleigh quotient never exceeds the top eigenvalue, so
  // taking the max over runs cannot overshoot.
  std::vector<double> ramp(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) ramp[static_cast<std::size_t>(i)] = 1.0 + static_cast<double>(i) / (k + 3.0);
  run(ramp);
  for (int j = 0; j < k; ++j) {
    std::vector<double> e(static_cast<std::size_t>(k), 0.0);
    e[static_cast<std::size_t>(j)] = 1.0;
    run(e);
  }
  (void)converged;
  return std::sqrt(std::max(best, 0.0));
}

double induced_norm_l1(const Matrix& m) {
  double best = 0.0;
  for (int j = 0; j < m.cols; ++j) {
    double sum = 0.0;
    for (int i = 0; i < m.rows; ++i) sum += std::abs(m.at(i, j));
    best = std::max(best, sum);
  }
  return best;
}

double induced_norm_linf(const Matrix& m) {
  double best = 0.0;
  for (int i = 0; i < m.rows; ++i) {
    double sum = 0.0;
    for (int j = 0; j < m.cols; ++j) sum += std::abs(m.at(i, j));
    best = std::max(best, sum);
  }
  return best;
}

double max_abs_entry(const Matrix& m) {
  double best = 0.0;
  for (double v : m.data) best = std::max(best, std::abs(v));
  return best;
}

}  // namespace lipkit
