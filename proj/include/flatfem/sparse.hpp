#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "flatfem/geometry.hpp"

namespace flatfem {

/// Symmetric-pattern CSR matrix. The sparsity pattern is built up front from
/// sorted adjacency, so the entry layout is deterministic regardless of
/// assembly order; entries eliminated later keep their slot with value zero.
struct SparseMatrix {
  int n = 0;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<double> val;

  /// Build the pattern from index tuples (one per element); every pair of
  /// indices within a tuple becomes a structural entry.
  template <typename Tuples>
  static SparseMatrix from_tuples(int n, const Tuples& tuples) {
    std::vector<std::vector<int>> adj(n);
    for (const auto& t : tuples)
      for (int i : t)
        for (int j : t) adj[i].push_back(j);
    SparseMatrix m;
    m.n = n;
    m.row_ptr.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) {
      auto& row = adj[i];
      std::sort(row.begin(), row.end());
      row.erase(std::unique(row.begin(), row.end()), row.end());
      m.row_ptr[i + 1] = m.row_ptr[i] + static_cast<int>(row.size());
    }
    m.col.reserve(m.row_ptr[n]);
    for (int i = 0; i < n; ++i)
      m.col.insert(m.col.end(), adj[i].begin(), adj[i].end());
    m.val.assign(m.col.size(), 0.0);
    return m;
  }

  int nnz() const { return static_cast<int>(col.size()); }

  /// Index of entry (i,j) in val, or -1 if not in the pattern.
  int find(int i, int j) const {
    const int lo = row_ptr[i], hi = row_ptr[i + 1];
    auto it = std::lower_bound(col.begin() + lo, col.begin() + hi, j);
    if (it == col.begin() + hi || *it != j) return -1;
    return static_cast<int>(it - col.begin());
  }

  void add(int i, int j, double v) {
    const int k = find(i, j);
    if (k < 0)
      throw Error("SparseMatrix: entry (" + std::to_string(i) + "," +
                  std::to_string(j) + ") not in pattern");
    val[k] += v;
  }

  double get(int i, int j) const {
    const int k = find(i, j);
    return k < 0 ? 0.0 : val[k];
  }

  void matvec(const std::vector<double>& x, std::vector<double>& y) const {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * x[col[k]];
      y[i] = s;
    }
  }

  std::vector<double> diagonal() const {
    std::vector<double> d(n, 0.0);
    for (int i = 0; i < n; ++i) d[i] = get(i, i);
    return d;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : val) m = std::max(m, std::abs(v));
    return m;
  }

  std::vector<double> to_dense() const {
    std::vector<double> d(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
        d[static_cast<size_t>(i) * n + col[k]] = val[k];
    return d;
  }
};

/// max_ij |A_ij - A_ji| / max_ij |A_ij| (0 for the zero matrix).
inline double symmetry_error(const SparseMatrix& a) {
  double worst = 0.0;
  for (int i = 0; i < a.n; ++i)
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      worst = std::max(worst, std::abs(a.val[k] - a.get(a.col[k], i)));
  const double scale = a.max_abs();
  return scale > 0.0 ? worst / scale : 0.0;
}

/// ||A * ones||_inf: zero before boundary elimination since every element
/// matrix has zero row sums.
inline double row_sum_linf(const SparseMatrix& a) {
  double worst = 0.0;
  for (int i = 0; i < a.n; ++i) {
    double s = 0.0;
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) s += a.val[k];
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

/// Largest per-entry relative difference over the union pattern:
/// |a-b| / max(|a|,|b|), entries missing on one side count as zero, and a
/// pair of zeros contributes nothing.
inline double max_entry_rel_diff(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.n != b.n) throw Error("max_entry_rel_diff: size mismatch");
  double worst = 0.0;
  auto scan = [&](const SparseMatrix& x, const SparseMatrix& y) {
    for (int i = 0; i < x.n; ++i)
      for (int k = x.row_ptr[i]; k < x.row_ptr[i + 1]; ++k) {
        const double u = x.val[k];
        const double v = y.get(i, x.col[k]);
        const double scale = std::max(std::abs(u), std::abs(v));
        if (scale > 0.0) worst = std::max(worst, std::abs(u - v) / scale);
      }
  };
  scan(a, b);
  scan(b, a);
  return worst;
}

}  // namespace flatfem
