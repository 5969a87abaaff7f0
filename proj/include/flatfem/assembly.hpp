#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include "flatfem/dgify.hpp"
#include "flatfem/quadrature.hpp"
#include "flatfem/sparse.hpp"

namespace flatfem {

template <int Dim>
using ScalarField = std::function<double(const Point<Dim>&)>;

template <int Dim>
using ElemMatrix = std::array<std::array<double, Dim + 1>, Dim + 1>;

enum class ThresholdMode { GlobalJmin, LocalFacetSize };

/// Jacobian threshold configuration. GlobalJmin floors every Jacobian
/// denominator by j_min; LocalFacetSize floors the dummies of each interface
/// by (facet diameter)^p, the local analogue of j_min = h^p.
struct PenaltyConfig {
  double j_min = std::numeric_limits<double>::min();
  double exponent = 0.0;
  ThresholdMode mode = ThresholdMode::GlobalJmin;

  static PenaltyConfig global(double j_min) {
    if (!(j_min > 0.0)) throw Error("PenaltyConfig: j_min must be positive");
    PenaltyConfig c;
    c.j_min = j_min;
    return c;
  }
  static PenaltyConfig from_exponent(double h, double p);
  static PenaltyConfig local(double p) {
    PenaltyConfig c;
    c.mode = ThresholdMode::LocalFacetSize;
    c.exponent = p;
    return c;
  }
  /// No-threshold configuration for plain FEM paths.
  static PenaltyConfig fem() { return PenaltyConfig{}; }
};

/// j_min = h^p.
inline double jmin_from_exponent(double h, double p) {
  if (!(h > 0.0)) throw Error("jmin_from_exponent: h must be positive");
  return std::pow(h, p);
}

inline PenaltyConfig PenaltyConfig::from_exponent(double h, double p) {
  PenaltyConfig c = global(jmin_from_exponent(h, p));
  c.exponent = p;
  return c;
}

/// Penalty coefficient realized by a thresholded dummy on a facet of the
/// given measure: D = 1/j_min (1D), |Gamma|/j_min (2D), 2*area/j_min (3D;
/// the factor 2 belongs to the locked prism split).
inline double penalty_from_jmin(int dim, double measure, double j_min) {
  if (!(j_min > 0.0)) throw Error("penalty_from_jmin: j_min must be positive");
  switch (dim) {
    case 1: return 1.0 / j_min;
    case 2: return measure / j_min;
    case 3: return 2.0 * measure / j_min;
    default: throw Error("penalty_from_jmin: dim must be 1, 2 or 3");
  }
}

/// Inverse of penalty_from_jmin: the threshold that realizes penalty D.
inline double jmin_from_penalty(int dim, double measure, double d) {
  if (!(d > 0.0)) throw Error("jmin_from_penalty: D must be positive");
  switch (dim) {
    case 1: return 1.0 / d;
    case 2: return measure / d;
    case 3: return 2.0 * measure / d;
    default: throw Error("jmin_from_penalty: dim must be 1, 2 or 3");
  }
}

/// P1 stiffness with the Jacobian threshold:
///   K_ij = coeff * (adj(B)^T g_i).(adj(B)^T g_j) / (Dim! * max(|det B|, j_min))
/// For |det B| >= j_min this is the exact stiffness; for degenerate
/// elements the denominator is floored, which is the single modification
/// that turns the assembler into a jump-penalized DG method.
template <int Dim>
inline ElemMatrix<Dim> element_stiffness(
    const std::array<Point<Dim>, Dim + 1>& pts, double j_min, double coeff) {
  if (!(j_min > 0.0)) throw Error("element_stiffness: j_min must be positive");
  const auto map = AffineMap<Dim>::from_simplex(pts);
  const auto ghat = reference_gradients<Dim>();
  std::array<Vec<Dim>, Dim + 1> g;
  for (int i = 0; i <= Dim; ++i) g[i] = map.adjt_times(ghat[i]);
  const double denom =
      factorial(Dim) * std::max(std::abs(map.det), j_min);
  ElemMatrix<Dim> k{};
  for (int i = 0; i <= Dim; ++i)
    for (int j = 0; j <= Dim; ++j)
      k[i][j] = coeff * dot<Dim>(g[i], g[j]) / denom;
  return k;
}

/// Load vector b_i = integral of f * phi_i over the element, using the true
/// Jacobian (never thresholded): zero-measure elements contribute nothing.
template <int Dim>
inline std::array<double, Dim + 1> element_load(
    const std::array<Point<Dim>, Dim + 1>& pts, const ScalarField<Dim>& f,
    const QuadratureRule<Dim>& rule) {
  const double vol = simplex_volume<Dim>(pts);
  std::array<double, Dim + 1> b{};
  if (vol == 0.0) return b;
  for (size_t q = 0; q < rule.points.size(); ++q) {
    const auto& lambda = rule.points[q];
    const double fw = rule.weights[q] * f(barycentric_point<Dim>(pts, lambda));
    for (int i = 0; i <= Dim; ++i) b[i] += fw * lambda[i] * vol;
  }
  return b;
}

struct LinearSystem {
  SparseMatrix a;
  std::vector<double> rhs;
  std::vector<int> dirichlet_dofs;      // sorted
  std::vector<double> dirichlet_values;  // aligned with dirichlet_dofs
  int n = 0;
};

enum class DirichletMode {
  None,        // no elimination (raw system, all-Neumann analogue)
  Strong,      // pin every vertex copy lying on the outer boundary
  OuterLayer,  // pin the mirror vertices of the Dirichlet boundary layer
};

/// Symmetric elimination: rows and columns of pinned DOFs are zeroed, the
/// diagonal set to one, and the right-hand side adjusted so the eliminated
/// system stays SPD and solves to x_j = g_j on pinned DOFs.
inline void eliminate_dirichlet(LinearSystem& sys) {
  std::vector<char> pinned(sys.n, 0);
  std::vector<double> value(sys.n, 0.0);
  for (size_t k = 0; k < sys.dirichlet_dofs.size(); ++k) {
    pinned[sys.dirichlet_dofs[k]] = 1;
    value[sys.dirichlet_dofs[k]] = sys.dirichlet_values[k];
  }
  SparseMatrix& a = sys.a;
  for (int i = 0; i < a.n; ++i) {
    if (pinned[i]) {
      for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
        a.val[k] = (a.col[k] == i) ? 1.0 : 0.0;
      sys.rhs[i] = value[i];
    } else {
      for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
        if (pinned[a.col[k]]) {
          sys.rhs[i] -= a.val[k] * value[a.col[k]];
          a.val[k] = 0.0;
        }
      }
    }
  }
}

namespace detail {

template <int Dim>
inline double longest_edge(const std::array<Point<Dim>, Dim + 1>& pts) {
  double h = 0.0;
  for (int a = 0; a <= Dim; ++a)
    for (int b = a + 1; b <= Dim; ++b)
      h = std::max(h, distance<Dim>(pts[a], pts[b]));
  return h;
}

// Per-element thresholds. Thick elements are checked, never thresholded.
template <int Dim>
inline std::vector<double> element_thresholds(
    const Mesh<Dim>& mesh, const PenaltyConfig& pen,
    const std::vector<int>* dummy_interface,
    const std::vector<Interface<Dim>>* interfaces) {
  std::vector<double> t(mesh.n_elements(), pen.j_min);
  if (pen.mode == ThresholdMode::LocalFacetSize) {
    for (int e = 0; e < mesh.n_elements(); ++e) {
      const auto pts = mesh.element_points(e);
      if (mesh.classes[e] == ElementClass::Thick) {
        t[e] = std::pow(longest_edge<Dim>(pts), pen.exponent);
      } else {
        if (!dummy_interface || !interfaces)
          throw Error("assemble: local thresholds need interface records");
        const int rec = (*dummy_interface)[e];
        const Interface<Dim>& itf = (*interfaces)[rec];
        double diam = 0.0;
        if constexpr (Dim == 1) {
          diam = mesh_size(mesh);  // a point has no size; fall back to h
        } else {
          for (int a = 0; a < Dim; ++a)
            for (int b = a + 1; b < Dim; ++b)
              diam = std::max(
                  diam, distance<Dim>(mesh.vertices[itf.left_copies[a]],
                                      mesh.vertices[itf.left_copies[b]]));
        }
        t[e] = std::pow(diam, pen.exponent);
      }
    }
  }
  return t;
}

template <int Dim>
inline LinearSystem assemble_core(const Mesh<Dim>& mesh,
                                  const PenaltyConfig& pen,
                                  const ScalarField<Dim>& f,
                                  const std::vector<int>* dummy_interface,
                                  const std::vector<Interface<Dim>>* interfaces) {
  validate(mesh);
  LinearSystem sys;
  sys.n = mesh.n_vertices();
  sys.a = SparseMatrix::from_tuples(sys.n, mesh.elements);
  sys.rhs.assign(sys.n, 0.0);

  const std::vector<double> thresholds =
      element_thresholds<Dim>(mesh, pen, dummy_interface, interfaces);
  const QuadratureRule<Dim>& rule = load_rule<Dim>();

  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto pts = mesh.element_points(e);
    const double t = thresholds[e];
    if (mesh.classes[e] == ElementClass::Thick) {
      const double det = std::abs(AffineMap<Dim>::from_simplex(pts).det);
      if (det < t)
        throw Error("assemble: Thick element " + std::to_string(e) +
                    " has |det| = " + std::to_string(det) +
                    " below the threshold " + std::to_string(t) +
                    "; real cells must not be penalized");
    }
    const ElemMatrix<Dim> k =
        element_stiffness<Dim>(pts, t, mesh.coefficients[e]);
    const auto& ids = mesh.elements[e];
    for (int i = 0; i <= Dim; ++i)
      for (int j = 0; j <= Dim; ++j) sys.a.add(ids[i], ids[j], k[i][j]);
    if (mesh.classes[e] == ElementClass::Thick) {
      const auto b = element_load<Dim>(pts, f, rule);
      for (int i = 0; i <= Dim; ++i) sys.rhs[ids[i]] += b[i];
    }
  }
  return sys;
}

inline void set_dirichlet(LinearSystem& sys, std::vector<int> dofs,
                          std::vector<double> values) {
  std::vector<size_t> order(dofs.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return dofs[a] < dofs[b]; });
  for (size_t k : order) {
    if (!sys.dirichlet_dofs.empty() && sys.dirichlet_dofs.back() == dofs[k])
      continue;  // corner vertices appear once per adjacent facet
    sys.dirichlet_dofs.push_back(dofs[k]);
    sys.dirichlet_values.push_back(values[k]);
  }
}

}  // namespace detail

/// Assemble on a plain all-Thick mesh: textbook continuous P1 FEM.
template <int Dim>
inline LinearSystem assemble(const Mesh<Dim>& mesh, const PenaltyConfig& pen,
                             const ScalarField<Dim>& f, DirichletMode bc,
                             const ScalarField<Dim>& g = {}) {
  LinearSystem sys = detail::assemble_core<Dim>(mesh, pen, f, nullptr, nullptr);
  if (bc == DirichletMode::OuterLayer)
    throw Error("assemble: OuterLayer needs a dgified mesh");
  if (bc == DirichletMode::Strong) {
    const FacetTopology<Dim> topo = extract_interfaces(mesh);
    std::vector<char> on_boundary(mesh.n_vertices(), 0);
    for (const auto& fct : topo.boundary)
      for (int v : fct.vertices) on_boundary[v] = 1;
    std::vector<int> dofs;
    std::vector<double> values;
    for (int v = 0; v < mesh.n_vertices(); ++v)
      if (on_boundary[v]) {
        dofs.push_back(v);
        values.push_back(g ? g(mesh.vertices[v]) : 0.0);
      }
    detail::set_dirichlet(sys, std::move(dofs), std::move(values));
    eliminate_dirichlet(sys);
  }
  return sys;
}

/// Assemble on an edited mesh. All elements contribute stiffness (dummies
/// through the thresholded denominator); only Thick elements contribute
/// load. Dirichlet data is imposed either through the pinned mirror
/// vertices of the boundary layer or strongly on boundary vertex copies.
template <int Dim>
inline LinearSystem assemble(const DgifyResult<Dim>& dg,
                             const PenaltyConfig& pen, const ScalarField<Dim>& f,
                             DirichletMode bc, const ScalarField<Dim>& g = {}) {
  LinearSystem sys = detail::assemble_core<Dim>(dg.mesh, pen, f,
                                                &dg.dummy_interface,
                                                &dg.interfaces);
  if (bc == DirichletMode::None) return sys;
  std::vector<int> dofs;
  std::vector<double> values;
  if (bc == DirichletMode::OuterLayer) {
    if (dg.outer_boundary_vertices.empty())
      throw Error("assemble: OuterLayer requested but the mesh edit was made "
                  "without a Dirichlet boundary layer");
    for (int v : dg.outer_boundary_vertices) {
      dofs.push_back(v);
      values.push_back(g ? g(dg.mesh.vertices[v]) : 0.0);
    }
  } else {  // Strong: every copy of an original boundary vertex
    const auto& bnd = dg.boundary_original_vertices;
    for (int v = 0; v < dg.mesh.n_vertices(); ++v) {
      const int orig = dg.vertex_provenance[v].original;
      if (std::binary_search(bnd.begin(), bnd.end(), orig)) {
        dofs.push_back(v);
        values.push_back(g ? g(dg.mesh.vertices[v]) : 0.0);
      }
    }
  }
  detail::set_dirichlet(sys, std::move(dofs), std::move(values));
  eliminate_dirichlet(sys);
  return sys;
}

}  // namespace flatfem
