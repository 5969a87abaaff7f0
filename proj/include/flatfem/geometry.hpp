#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace flatfem {

/// Error type thrown by every component of the toolkit.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <int Dim>
using Point = std::array<double, Dim>;

template <int Dim>
using Vec = std::array<double, Dim>;

template <int Dim>
inline Vec<Dim> sub(const Point<Dim>& a, const Point<Dim>& b) {
  Vec<Dim> r{};
  for (int i = 0; i < Dim; ++i) r[i] = a[i] - b[i];
  return r;
}

template <int Dim>
inline double dot(const Vec<Dim>& a, const Vec<Dim>& b) {
  double s = 0.0;
  for (int i = 0; i < Dim; ++i) s += a[i] * b[i];
  return s;
}

template <int Dim>
inline double norm(const Vec<Dim>& a) {
  return std::sqrt(dot<Dim>(a, a));
}

template <int Dim>
inline double distance(const Point<Dim>& a, const Point<Dim>& b) {
  return norm<Dim>(sub<Dim>(a, b));
}

inline Vec<3> cross(const Vec<3>& a, const Vec<3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

constexpr double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

/// Gradients of the barycentric P1 basis on the reference simplex:
/// phi_0 = 1 - sum_i x_i has gradient (-1,...,-1), phi_i = x_i has e_i.
/// They sum to the zero vector.
template <int Dim>
inline std::array<Vec<Dim>, Dim + 1> reference_gradients() {
  std::array<Vec<Dim>, Dim + 1> g{};
  for (int i = 0; i < Dim; ++i) {
    g[0][i] = -1.0;
    g[i + 1][i] = 1.0;
  }
  return g;
}

/// Affine map x = B*xhat + p0 from the reference simplex onto a physical
/// simplex with vertices p0..pDim (column c of B is p_{c+1} - p_0).
///
/// The adjugate satisfies adj(B)*B = det(B)*I. Its entries are polynomial in
/// B, so it stays finite when det(B) = 0; physical P1 gradients are
/// adj(B)^T * ghat / det(B), which is the factorization the thresholded
/// assembler exploits on zero-measure elements.
template <int Dim>
struct AffineMap {
  std::array<std::array<double, Dim>, Dim> b{};
  std::array<std::array<double, Dim>, Dim> adj{};
  Point<Dim> origin{};
  double det = 0.0;

  static AffineMap from_simplex(const std::array<Point<Dim>, Dim + 1>& p) {
    AffineMap m;
    m.origin = p[0];
    for (int c = 0; c < Dim; ++c)
      for (int r = 0; r < Dim; ++r) m.b[r][c] = p[c + 1][r] - p[0][r];
    if constexpr (Dim == 1) {
      m.det = m.b[0][0];
      m.adj[0][0] = 1.0;
    } else if constexpr (Dim == 2) {
      m.det = m.b[0][0] * m.b[1][1] - m.b[0][1] * m.b[1][0];
      m.adj[0][0] = m.b[1][1];
      m.adj[0][1] = -m.b[0][1];
      m.adj[1][0] = -m.b[1][0];
      m.adj[1][1] = m.b[0][0];
    } else {
      static_assert(Dim == 3, "supported dimensions are 1, 2, 3");
      const Vec<3> c0{m.b[0][0], m.b[1][0], m.b[2][0]};
      const Vec<3> c1{m.b[0][1], m.b[1][1], m.b[2][1]};
      const Vec<3> c2{m.b[0][2], m.b[1][2], m.b[2][2]};
      const Vec<3> r0 = cross(c1, c2);
      const Vec<3> r1 = cross(c2, c0);
      const Vec<3> r2 = cross(c0, c1);
      for (int j = 0; j < 3; ++j) {
        m.adj[0][j] = r0[j];
        m.adj[1][j] = r1[j];
        m.adj[2][j] = r2[j];
      }
      // det = (c0 x c1) . c2 is exactly zero when the last column vanishes
      // bitwise, as it does for inserted interface elements.
      m.det = dot<3>(r2, c2);
    }
    return m;
  }

  /// adj(B)^T * v; divide by det to get a physical gradient.
  Vec<Dim> adjt_times(const Vec<Dim>& v) const {
    Vec<Dim> r{};
    for (int i = 0; i < Dim; ++i)
      for (int c = 0; c < Dim; ++c) r[i] += adj[c][i] * v[c];
    return r;
  }
};

template <int Dim>
inline double simplex_volume(const std::array<Point<Dim>, Dim + 1>& p) {
  return std::abs(AffineMap<Dim>::from_simplex(p).det) / factorial(Dim);
}

template <int Dim>
inline Point<Dim> barycentric_point(const std::array<Point<Dim>, Dim + 1>& p,
                                    const std::array<double, Dim + 1>& lambda) {
  Point<Dim> x{};
  for (int v = 0; v <= Dim; ++v)
    for (int i = 0; i < Dim; ++i) x[i] += lambda[v] * p[v][i];
  return x;
}

}  // namespace flatfem
