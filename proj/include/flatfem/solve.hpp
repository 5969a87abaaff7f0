#pragma once

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "flatfem/assembly.hpp"
#include "flatfem/sparse.hpp"

namespace flatfem {

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;  // ||b - A x|| / ||b||, recomputed
  std::string method;
  double seconds = 0.0;
};

struct SolveError : Error {
  SolveReport report;
  SolveError(const std::string& msg, SolveReport r)
      : Error(msg), report(std::move(r)) {}
};

enum class Preconditioner { None, Jacobi };

namespace detail {

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double true_residual(const SparseMatrix& a, const std::vector<double>& b,
                            const std::vector<double>& x) {
  std::vector<double> r(a.n);
  a.matvec(x, r);
  for (int i = 0; i < a.n; ++i) r[i] = b[i] - r[i];
  return norm2(r);
}

}  // namespace detail

/// Preconditioned conjugate gradients. Success is declared only after the
/// residual is recomputed from scratch; the recurrence residual alone is
/// not trusted.
inline std::pair<std::vector<double>, SolveReport> cg_solve(
    const SparseMatrix& a, const std::vector<double>& b, double tol = 1e-10,
    int max_iter = -1, Preconditioner pc = Preconditioner::Jacobi) {
  if (!(tol > 0.0 && tol < 1.0)) throw Error("cg_solve: tol must be in (0,1)");
  const auto t0 = std::chrono::steady_clock::now();
  const int n = a.n;
  if (max_iter < 0) max_iter = 20 * n;
  SolveReport rep;
  rep.method = pc == Preconditioner::Jacobi ? "cg+jacobi" : "cg";

  std::vector<double> inv_diag(n, 1.0);
  if (pc == Preconditioner::Jacobi) {
    const std::vector<double> d = a.diagonal();
    for (int i = 0; i < n; ++i) {
      if (d[i] == 0.0)
        throw SolveError("cg_solve: zero diagonal entry at row " +
                             std::to_string(i) + " with Jacobi preconditioner",
                         rep);
      inv_diag[i] = 1.0 / d[i];
    }
  }

  std::vector<double> x(n, 0.0);
  const double bnorm = detail::norm2(b);
  if (bnorm == 0.0) {
    rep.method += " (trivial)";
    return {x, rep};
  }

  std::vector<double> r = b;  // residual for x = 0
  std::vector<double> z(n), p(n), ap(n);
  for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = 0.0;
  for (int i = 0; i < n; ++i) rz += r[i] * z[i];

  for (int it = 1; it <= max_iter; ++it) {
    a.matvec(p, ap);
    double pap = 0.0;
    for (int i = 0; i < n; ++i) pap += p[i] * ap[i];
    if (!(pap > 0.0)) {
      rep.iterations = it;
      rep.relative_residual = detail::true_residual(a, b, x) / bnorm;
      throw SolveError("cg_solve: matrix is not positive definite (p'Ap <= 0)",
                       rep);
    }
    const double alpha = rz / pap;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    rep.iterations = it;
    bool restarted = false;
    if (detail::norm2(r) <= tol * bnorm) {
      const double true_rel = detail::true_residual(a, b, x) / bnorm;
      if (true_rel <= tol) {
        rep.relative_residual = true_rel;
        rep.seconds = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        return {x, rep};
      }
      // recurrence drifted; restart from the true residual
      a.matvec(x, r);
      for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
      restarted = true;
    }
    double rz_next = 0.0;
    for (int i = 0; i < n; ++i) {
      z[i] = inv_diag[i] * r[i];
      rz_next += r[i] * z[i];
    }
    const double beta = restarted ? 0.0 : rz_next / rz;
    rz = rz_next;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  rep.relative_residual = detail::true_residual(a, b, x) / bnorm;
  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  throw SolveError("cg_solve: no convergence within " +
                       std::to_string(max_iter) + " iterations (residual " +
                       std::to_string(rep.relative_residual) + ")",
                   rep);
}

/// Dense Cholesky factorization for small systems (N <= 2000). Serves as
/// the cross-check oracle for the iterative path.
inline std::vector<double> dense_cholesky(const SparseMatrix& a,
                                          const std::vector<double>& b) {
  const int n = a.n;
  if (n > 2000) throw Error("dense_cholesky: system too large (N > 2000)");
  std::vector<double> m = a.to_dense();
  std::vector<double> l(static_cast<size_t>(n) * n, 0.0);
  for (int j = 0; j < n; ++j) {
    double d = m[static_cast<size_t>(j) * n + j];
    for (int k = 0; k < j; ++k) d -= l[static_cast<size_t>(j) * n + k] *
                                     l[static_cast<size_t>(j) * n + k];
    if (!(d > 0.0))
      throw SolveError("dense_cholesky: non-positive pivot at column " +
                           std::to_string(j) + ": matrix is not SPD",
                       SolveReport{0, 0.0, "cholesky", 0.0});
    const double lj = std::sqrt(d);
    l[static_cast<size_t>(j) * n + j] = lj;
    for (int i = j + 1; i < n; ++i) {
      double s = m[static_cast<size_t>(i) * n + j];
      for (int k = 0; k < j; ++k)
        s -= l[static_cast<size_t>(i) * n + k] * l[static_cast<size_t>(j) * n + k];
      l[static_cast<size_t>(i) * n + j] = s / lj;
    }
  }
  std::vector<double> y(n), x(n);
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= l[static_cast<size_t>(i) * n + k] * y[k];
    y[i] = s / l[static_cast<size_t>(i) * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = y[i];
    for (int k = i + 1; k < n; ++k)
      s -= l[static_cast<size_t>(k) * n + i] * x[k];
    x[i] = s / l[static_cast<size_t>(i) * n + i];
  }
  return x;
}

enum class SolverKind { Auto, Cg, Cholesky };

struct SolverOptions {
  SolverKind kind = SolverKind::Auto;
  double tol = 1e-10;
  int max_iter = -1;  // -1: 20 N
};

/// Auto picks the dense factorization for N <= 2000 and CG above.
inline std::pair<std::vector<double>, SolveReport> solve_system(
    const LinearSystem& sys, const SolverOptions& opts = {}) {
  SolverKind kind = opts.kind;
  if (kind == SolverKind::Auto)
    kind = sys.n <= 2000 ? SolverKind::Cholesky : SolverKind::Cg;
  if (kind == SolverKind::Cholesky) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> x = dense_cholesky(sys.a, sys.rhs);
    SolveReport rep;
    rep.method = "cholesky";
    const double bnorm = detail::norm2(sys.rhs);
    rep.relative_residual =
        bnorm > 0.0 ? detail::true_residual(sys.a, sys.rhs, x) / bnorm : 0.0;
    rep.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return {std::move(x), rep};
  }
  return cg_solve(sys.a, sys.rhs, opts.tol, opts.max_iter,
                  Preconditioner::Jacobi);
}

}  // namespace flatfem
