#pragma once

#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include "flatfem/dg.hpp"
#include "flatfem/generate.hpp"
#include "flatfem/solve.hpp"

namespace flatfem {

/// A manufactured Poisson case: exact solution u, its gradient, and the
/// right-hand side f = -div(u). Dirichlet data is the trace of u.
template <int Dim>
struct ManufacturedCase {
  std::string name;
  ScalarField<Dim> u;
  std::function<Vec<Dim>(const Point<Dim>&)> grad_u;
  ScalarField<Dim> f;
};

/// Known cases:
///   interval_parabola (1D)  u = 2x(1-x),                 f = 4
///   square_trig       (2D)  u = cos(2 pi x) sin(2 pi y), f = 8 pi^2 u
///   square_trig_x     (2D)  u = cos(2 pi x) sin(2 pi x), f = 16 pi^2 u
///   cube_trig         (3D)  u = cos sin cos,             f = 12 pi^2 u
template <int Dim>
inline ManufacturedCase<Dim> manufactured(const std::string& id) {
  constexpr double tp = 2.0 * std::numbers::pi;
  if constexpr (Dim == 1) {
    if (id == "interval_parabola")
      return {id, [](const Point<1>& x) { return 2.0 * x[0] * (1.0 - x[0]); },
              [](const Point<1>& x) { return Vec<1>{2.0 - 4.0 * x[0]}; },
              [](const Point<1>&) { return 4.0; }};
  } else if constexpr (Dim == 2) {
    if (id == "square_trig")
      return {id,
              [=](const Point<2>& x) {
                return std::cos(tp * x[0]) * std::sin(tp * x[1]);
              },
              [=](const Point<2>& x) {
                return Vec<2>{-tp * std::sin(tp * x[0]) * std::sin(tp * x[1]),
                              tp * std::cos(tp * x[0]) * std::cos(tp * x[1])};
              },
              [=](const Point<2>& x) {
                return 2.0 * tp * tp * std::cos(tp * x[0]) *
                       std::sin(tp * x[1]);
              }};
    if (id == "square_trig_x")
      return {id,
              [=](const Point<2>& x) {
                return std::cos(tp * x[0]) * std::sin(tp * x[0]);
              },
              [=](const Point<2>& x) {
                return Vec<2>{tp * std::cos(2.0 * tp * x[0]), 0.0};
              },
              [=](const Point<2>& x) {
                return 4.0 * tp * tp * std::cos(tp * x[0]) *
                       std::sin(tp * x[0]);
              }};
  } else {
    if (id == "cube_trig")
      return {id,
              [=](const Point<3>& x) {
                return std::cos(tp * x[0]) * std::sin(tp * x[1]) *
                       std::cos(tp * x[2]);
              },
              [=](const Point<3>& x) {
                const double cx = std::cos(tp * x[0]), sx = std::sin(tp * x[0]);
                const double cy = std::cos(tp * x[1]), sy = std::sin(tp * x[1]);
                const double cz = std::cos(tp * x[2]), sz = std::sin(tp * x[2]);
                return Vec<3>{-tp * sx * sy * cz, tp * cx * cy * cz,
                              -tp * cx * sy * sz};
              },
              [=](const Point<3>& x) {
                return 3.0 * tp * tp * std::cos(tp * x[0]) *
                       std::sin(tp * x[1]) * std::cos(tp * x[2]);
              }};
  }
  throw Error("manufactured: unknown case '" + id + "' for dim " +
              std::to_string(Dim));
}

/// || u - u_h ||_L2 over Thick elements by degree-5 quadrature.
template <int Dim>
inline double error_l2(const Mesh<Dim>& mesh, const std::vector<double>& uh,
                       const ScalarField<Dim>& u) {
  const QuadratureRule<Dim>& rule = error_rule<Dim>();
  double acc = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    if (mesh.classes[e] != ElementClass::Thick) continue;
    const auto pts = mesh.element_points(e);
    const double vol = simplex_volume<Dim>(pts);
    const auto& ids = mesh.elements[e];
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const auto& lambda = rule.points[q];
      double val = 0.0;
      for (int v = 0; v <= Dim; ++v) val += lambda[v] * uh[ids[v]];
      const double diff = u(barycentric_point<Dim>(pts, lambda)) - val;
      acc += rule.weights[q] * vol * diff * diff;
    }
  }
  return std::sqrt(std::max(acc, 0.0));
}

/// Broken H1 seminorm | u - u_h |: elementwise gradient error over Thick
/// elements; grad u_h is constant per element.
template <int Dim>
inline double error_h1_broken(
    const Mesh<Dim>& mesh, const std::vector<double>& uh,
    const std::function<Vec<Dim>(const Point<Dim>&)>& grad_u) {
  const QuadratureRule<Dim>& rule = error_rule<Dim>();
  const auto ghat = reference_gradients<Dim>();
  double acc = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    if (mesh.classes[e] != ElementClass::Thick) continue;
    const auto pts = mesh.element_points(e);
    const auto map = AffineMap<Dim>::from_simplex(pts);
    const double vol = std::abs(map.det) / factorial(Dim);
    const auto& ids = mesh.elements[e];
    Vec<Dim> grad_h{};
    for (int v = 0; v <= Dim; ++v) {
      const Vec<Dim> gv = map.adjt_times(ghat[v]);
      for (int i = 0; i < Dim; ++i) grad_h[i] += uh[ids[v]] * gv[i] / map.det;
    }
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const Vec<Dim> gu =
          grad_u(barycentric_point<Dim>(pts, rule.points[q]));
      double d2 = 0.0;
      for (int i = 0; i < Dim; ++i)
        d2 += (gu[i] - grad_h[i]) * (gu[i] - grad_h[i]);
      acc += rule.weights[q] * vol * d2;
    }
  }
  return std::sqrt(std::max(acc, 0.0));
}

/// sqrt( sum over recorded interfaces of the exact integral of [u_h]^2 ),
/// optionally weighted per interface by the penalty D_Gamma realized by
/// j_min. Jumps are linear along a facet, so the integrals are closed form.
template <int Dim>
inline double jump_norm(const std::vector<double>& uh,
                        const DgifyResult<Dim>& dg, bool weighted_by_d = false,
                        double j_min = 0.0) {
  double acc = 0.0;
  for (const auto& itf : dg.interfaces) {
    if (!itf.selected) continue;
    std::array<double, Dim> j{};
    for (int k = 0; k < Dim; ++k) j[k] = jump_at_vertex<Dim>(uh, itf, k);
    double integral = 0.0;
    if constexpr (Dim == 1) {
      integral = j[0] * j[0];
    } else if constexpr (Dim == 2) {
      integral = itf.measure * (j[0] * j[0] + j[0] * j[1] + j[1] * j[1]) / 3.0;
    } else {
      const double s = j[0] + j[1] + j[2];
      integral = itf.measure *
                 (s * s + j[0] * j[0] + j[1] * j[1] + j[2] * j[2]) / 12.0;
    }
    if (weighted_by_d)
      integral *= penalty_from_jmin(Dim, itf.measure, j_min);
    acc += integral;
  }
  return std::sqrt(std::max(acc, 0.0));
}

/// One row of a convergence study.
struct StudyRecord {
  std::string case_name;
  int dim = 0;
  double exponent_p = 0.0;
  int n = 0;
  double h = 0.0;
  double j_min = 0.0;
  int dofs = 0;
  double err_l2 = 0.0;
  double err_h1 = 0.0;
  double jump = 0.0;
  int iterations = 0;
  double seconds = 0.0;
  bool failed = false;
  std::string message;
};

enum class ErrorKind { L2, H1Broken, Jump };

inline double record_error(const StudyRecord& r, ErrorKind which) {
  switch (which) {
    case ErrorKind::L2: return r.err_l2;
    case ErrorKind::H1Broken: return r.err_h1;
    case ErrorKind::Jump: return r.jump;
  }
  return 0.0;
}

/// Least-squares slope of log(err) against log(h). Zero errors are excluded
/// (they carry no rate information); at least two usable points with
/// distinct h are required.
inline double fit_rate(const std::vector<std::pair<double, double>>& points) {
  std::vector<std::pair<double, double>> logs;
  for (const auto& [h, err] : points) {
    if (!(h > 0.0)) throw Error("fit_rate: nonpositive h");
    if (err <= 0.0) continue;  // exact hit; skip with a note upstream
    logs.emplace_back(std::log(h), std::log(err));
  }
  if (logs.size() < 2) throw Error("fit_rate: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : logs) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(logs.size());
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) throw Error("fit_rate: all h identical");
  return (m * sxy - sx * sy) / denom;
}

inline double fit_rate(const std::vector<StudyRecord>& records,
                       ErrorKind which) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : records)
    if (!r.failed) pts.emplace_back(r.h, record_error(r, which));
  return fit_rate(pts);
}

template <int Dim>
inline Mesh<Dim> unit_domain_mesh(int n) {
  if constexpr (Dim == 1) return generate_interval_mesh(n);
  if constexpr (Dim == 2) return generate_crisscross_square(n);
  if constexpr (Dim == 3) return generate_cube_tets(n);
}

struct SweepOptions {
  std::vector<double> exponents;
  std::vector<int> ns;
  SolverOptions solver;
  bool boundary_layer = true;
};

/// Run one (p, n) cell of a study on the unit-domain mesh family: edit the
/// mesh everywhere, assemble with j_min = pitch^p (pitch = 1/n, the
/// generators' characteristic cell size), solve, and measure errors.
template <int Dim>
inline StudyRecord run_study_cell(const ManufacturedCase<Dim>& mc, double p,
                                  int n, const SolverOptions& solver_opts,
                                  bool boundary_layer = true) {
  StudyRecord rec;
  rec.case_name = mc.name;
  rec.dim = Dim;
  rec.exponent_p = p;
  rec.n = n;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Mesh<Dim> mesh = unit_domain_mesh<Dim>(n);
    rec.h = mesh_size(mesh);
    rec.j_min = jmin_from_exponent(1.0 / n, p);
    DgifyOptions<Dim> opts;
    opts.dirichlet_boundary_layer = boundary_layer;
    const DgifyResult<Dim> dg = dgify(mesh, opts);
    rec.dofs = dg.n_interior_dofs();
    const PenaltyConfig pen = PenaltyConfig::global(rec.j_min);
    const DirichletMode bc =
        boundary_layer ? DirichletMode::OuterLayer : DirichletMode::Strong;
    LinearSystem sys = assemble<Dim>(dg, pen, mc.f, bc, mc.u);
    auto [x, report] = solve_system(sys, solver_opts);
    rec.iterations = report.iterations;
    rec.err_l2 = error_l2<Dim>(dg.mesh, x, mc.u);
    rec.err_h1 = error_h1_broken<Dim>(dg.mesh, x, mc.grad_u);
    rec.jump = jump_norm<Dim>(x, dg);
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.message = e.what();
  }
  rec.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rec;
}

/// Full (p, n) cross product, row order fixed by the input ordering.
/// Failures are recorded per row and do not stop the sweep.
template <int Dim>
inline std::vector<StudyRecord> exponent_sweep(const ManufacturedCase<Dim>& mc,
                                               const SweepOptions& opts) {
  std::vector<StudyRecord> records;
  for (double p : opts.exponents)
    for (int n : opts.ns)
      records.push_back(
          run_study_cell<Dim>(mc, p, n, opts.solver, opts.boundary_layer));
  return records;
}

}  // namespace flatfem
