#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "flatfem/geometry.hpp"

namespace flatfem {

/// Quadrature rule on the reference simplex. Points are stored as full
/// barycentric tuples (Dim+1 coordinates); weights sum to one, so an
/// integral over a physical simplex K is vol(K) * sum_q w_q f(x_q).
template <int Dim>
struct QuadratureRule {
  std::vector<std::array<double, Dim + 1>> points;
  std::vector<double> weights;
  int degree = 0;
};

namespace detail {

inline void orbit3(QuadratureRule<2>& r, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  r.points.push_back({b, a, a});
  r.points.push_back({a, b, a});
  r.points.push_back({a, a, b});
  for (int i = 0; i < 3; ++i) r.weights.push_back(w);
}

// Permutations of (a,a,a,b) with b = 1-3a.
inline void orbit4(QuadratureRule<3>& r, double a, double w) {
  const double b = 1.0 - 3.0 * a;
  r.points.push_back({b, a, a, a});
  r.points.push_back({a, b, a, a});
  r.points.push_back({a, a, b, a});
  r.points.push_back({a, a, a, b});
  for (int i = 0; i < 4; ++i) r.weights.push_back(w);
}

// Permutations of (a,a,b,b) with b = 1/2-a.
inline void orbit6(QuadratureRule<3>& r, double a, double w) {
  const double b = 0.5 - a;
  r.points.push_back({a, a, b, b});
  r.points.push_back({a, b, a, b});
  r.points.push_back({a, b, b, a});
  r.points.push_back({b, a, a, b});
  r.points.push_back({b, a, b, a});
  r.points.push_back({b, b, a, a});
  for (int i = 0; i < 6; ++i) r.weights.push_back(w);
}

}  // namespace detail

/// 3-point Gauss-Legendre on the unit interval, degree 5.
inline QuadratureRule<1> interval_gauss3() {
  QuadratureRule<1> r;
  r.degree = 5;
  const double s = std::sqrt(3.0 / 5.0) / 2.0;
  const double t[3] = {0.5 - s, 0.5, 0.5 + s};
  const double w[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  for (int q = 0; q < 3; ++q) {
    r.points.push_back({1.0 - t[q], t[q]});
    r.weights.push_back(w[q]);
  }
  return r;
}

/// 6-point degree-4 rule on the triangle (Dunavant).
inline QuadratureRule<2> triangle_degree4() {
  QuadratureRule<2> r;
  r.degree = 4;
  detail::orbit3(r, 0.445948490915965, 0.223381589678011);
  detail::orbit3(r, 0.091576213509771, 0.109951743655322);
  return r;
}

/// 7-point degree-5 rule on the triangle.
inline QuadratureRule<2> triangle_degree5() {
  QuadratureRule<2> r;
  r.degree = 5;
  const double s15 = std::sqrt(15.0);
  r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  r.weights.push_back(9.0 / 40.0);
  detail::orbit3(r, (6.0 - s15) / 21.0, (155.0 - s15) / 1200.0);
  detail::orbit3(r, (6.0 + s15) / 21.0, (155.0 + s15) / 1200.0);
  return r;
}

/// 11-point degree-4 rule on the tetrahedron (Keast; one negative weight).
inline QuadratureRule<3> tet_degree4() {
  QuadratureRule<3> r;
  r.degree = 4;
  detail::orbit4(r, 1.0 / 14.0, 6.0 * 343.0 / 45000.0);
  r.points.push_back({0.25, 0.25, 0.25, 0.25});
  r.weights.push_back(-6.0 * 74.0 / 5625.0);
  detail::orbit6(r, 0.100596423833200795, 6.0 * 28.0 / 1125.0);
  return r;
}

/// 14-point degree-5 rule on the tetrahedron (all weights positive).
inline QuadratureRule<3> tet_degree5() {
  QuadratureRule<3> r;
  r.degree = 5;
  detail::orbit6(r, 0.045503704125649649492, 6.0 * 7.0910034628469110730e-03);
  detail::orbit4(r, 0.092735250310891226402, 6.0 * 0.012248840519393658257);
  detail::orbit4(r, (1.0 - 0.067342242210098170608) / 3.0,
                 6.0 * 0.018781320953002641800);
  return r;
}

/// Rule used for right-hand-side assembly.
template <int Dim>
inline const QuadratureRule<Dim>& load_rule() {
  if constexpr (Dim == 1) {
    static const QuadratureRule<1> r = interval_gauss3();
    return r;
  } else if constexpr (Dim == 2) {
    static const QuadratureRule<2> r = triangle_degree4();
    return r;
  } else {
    static const QuadratureRule<3> r = tet_degree4();
    return r;
  }
}

/// Degree-5 rule used for error norms.
template <int Dim>
inline const QuadratureRule<Dim>& error_rule() {
  if constexpr (Dim == 1) {
    static const QuadratureRule<1> r = interval_gauss3();
    return r;
  } else if constexpr (Dim == 2) {
    static const QuadratureRule<2> r = triangle_degree5();
    return r;
  } else {
    static const QuadratureRule<3> r = tet_degree5();
    return r;
  }
}

}  // namespace flatfem
