#pragma once

#include <optional>

#include "flatfem/assembly.hpp"

namespace flatfem {

/// Quadrature used for the penalty integrals over interfaces.
///  - Vertex: endpoint (trapezoid) rule; the limiting form of the
///    thresholded assembler and the equivalence oracle against it.
///  - Midpoint: facet-midpoint rule (WOPSIP-style penalty).
///  - Exact: analytic integral of the products of linear jumps.
enum class DgQuadrature { Vertex, Midpoint, Exact };

/// Direct Babuska-Zlamal assembler configuration. The penalty on each
/// interface is either D_Gamma derived from a Jacobian threshold (matching
/// what the thresholded assembler realizes) or an explicit global D.
struct DgScheme {
  DgQuadrature quadrature = DgQuadrature::Vertex;
  double j_min = 0.0;
  double local_exponent = 0.0;  // > 0: j_min per interface = diameter^p
  std::optional<double> global_d;

  static DgScheme vertex_from_jmin(double j_min) {
    DgScheme s;
    s.j_min = j_min;
    return s;
  }
  static DgScheme with_global_d(double d, DgQuadrature q = DgQuadrature::Vertex) {
    DgScheme s;
    s.quadrature = q;
    s.global_d = d;
    return s;
  }
};

namespace detail {

template <int Dim>
inline double interface_diameter(const Mesh<Dim>& mesh,
                                 const Interface<Dim>& itf) {
  if constexpr (Dim == 1) {
    return mesh_size(mesh);
  } else {
    double diam = 0.0;
    for (int a = 0; a < Dim; ++a)
      for (int b = a + 1; b < Dim; ++b)
        diam = std::max(diam,
                        distance<Dim>(mesh.vertices[itf.left_copies[a]],
                                      mesh.vertices[itf.left_copies[b]]));
    return diam;
  }
}

// Penalty coefficient for one interface. Written out here on purpose: the
// oracle must not share penalty code with the thresholded assembler.
template <int Dim>
inline double interface_penalty(const Mesh<Dim>& mesh, const DgScheme& scheme,
                                const Interface<Dim>& itf) {
  if (scheme.global_d) return *scheme.global_d;
  double j = scheme.j_min;
  if (scheme.local_exponent > 0.0)
    j = std::pow(interface_diameter<Dim>(mesh, itf), scheme.local_exponent);
  if (!(j > 0.0)) throw Error("assemble_dg: penalty not configured");
  if constexpr (Dim == 1) return 1.0 / j;
  if constexpr (Dim == 2) return itf.measure / j;
  if constexpr (Dim == 3) return 2.0 * itf.measure / j;
}

// Jump-form coefficient matrix W (Dim x Dim over the facet vertices):
// penalty term = sum_{ab} W[a][b] [u]_a [v]_b.
template <int Dim>
inline std::array<std::array<double, Dim>, Dim> jump_weights(
    const DgScheme& scheme, double d_gamma, double measure) {
  std::array<std::array<double, Dim>, Dim> w{};
  if constexpr (Dim == 1) {
    w[0][0] = d_gamma;  // every rule is exact for the point jump
    return w;
  } else {
    switch (scheme.quadrature) {
      case DgQuadrature::Vertex:
        // trapezoid in 2D: (D/2)|Gamma| per endpoint; vertex-lumped face
        // rule in 3D: D * area/3 per corner.
        for (int a = 0; a < Dim; ++a) w[a][a] = d_gamma * measure / Dim;
        break;
      case DgQuadrature::Midpoint:
        // D * measure * [u]_mid [v]_mid with [.]_mid the vertex average.
        for (int a = 0; a < Dim; ++a)
          for (int b = 0; b < Dim; ++b)
            w[a][b] = d_gamma * measure / (Dim * Dim);
        break;
      case DgQuadrature::Exact:
        // edge: |Gamma|/6 * [[2,1],[1,2]]; face: area/12 * (ones + I).
        if constexpr (Dim == 2) {
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
              w[a][b] = d_gamma * measure * (a == b ? 2.0 : 1.0) / 6.0;
        } else {
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
              w[a][b] = d_gamma * measure * (a == b ? 2.0 : 1.0) / 12.0;
        }
        break;
    }
    return w;
  }
}

}  // namespace detail

/// Direct assembler for the limiting DG scheme: exact P1 volume terms over
/// Thick elements plus explicit jump penalties over the recorded interfaces.
/// It shares the volume kernel with the FEM assembler (the schemes have
/// identical volume terms by definition) but assembles every penalty entry
/// through an independent path, which is what makes the entrywise
/// equivalence against the thresholded assembler a meaningful check.
template <int Dim>
inline LinearSystem assemble_dg(const DgifyResult<Dim>& dg,
                                const DgScheme& scheme,
                                const ScalarField<Dim>& f, DirichletMode bc,
                                const ScalarField<Dim>& g = {}) {
  const Mesh<Dim>& mesh = dg.mesh;
  validate(mesh);

  LinearSystem sys;
  sys.n = mesh.n_vertices();
  // Pattern: Thick volume blocks plus the penalty pairs of every selected
  // interface (all four copy-pair combinations; unused slots stay zero).
  {
    std::vector<std::array<int, Dim + 1>> tuples;
    for (int e = 0; e < mesh.n_elements(); ++e)
      if (mesh.classes[e] == ElementClass::Thick)
        tuples.push_back(mesh.elements[e]);
    std::vector<std::array<int, 2 * Dim>> jump_tuples;
    for (const auto& itf : dg.interfaces) {
      if (!itf.selected) continue;
      std::array<int, 2 * Dim> t;
      for (int k = 0; k < Dim; ++k) {
        t[k] = itf.left_copies[k];
        t[Dim + k] = itf.right_copies[k];
      }
      jump_tuples.push_back(t);
    }
    std::vector<std::vector<int>> all;
    all.reserve(tuples.size() + jump_tuples.size());
    for (const auto& t : tuples) all.emplace_back(t.begin(), t.end());
    for (const auto& t : jump_tuples) all.emplace_back(t.begin(), t.end());
    sys.a = SparseMatrix::from_tuples(sys.n, all);
  }
  sys.rhs.assign(sys.n, 0.0);

  const QuadratureRule<Dim>& rule = load_rule<Dim>();
  for (int e = 0; e < mesh.n_elements(); ++e) {
    if (mesh.classes[e] != ElementClass::Thick) continue;
    const auto pts = mesh.element_points(e);
    const ElemMatrix<Dim> k = element_stiffness<Dim>(
        pts, std::numeric_limits<double>::min(), mesh.coefficients[e]);
    const auto& ids = mesh.elements[e];
    for (int i = 0; i <= Dim; ++i)
      for (int j = 0; j <= Dim; ++j) sys.a.add(ids[i], ids[j], k[i][j]);
    const auto b = element_load<Dim>(pts, f, rule);
    for (int i = 0; i <= Dim; ++i) sys.rhs[ids[i]] += b[i];
  }

  for (const auto& itf : dg.interfaces) {
    if (!itf.selected) continue;
    const double d_gamma = detail::interface_penalty<Dim>(mesh, scheme, itf);
    const auto w = detail::jump_weights<Dim>(scheme, d_gamma, itf.measure);
    for (int a = 0; a < Dim; ++a)
      for (int b = 0; b < Dim; ++b) {
        if (w[a][b] == 0.0) continue;
        const int la = itf.left_copies[a], ra = itf.right_copies[a];
        const int lb = itf.left_copies[b], rb = itf.right_copies[b];
        sys.a.add(la, lb, w[a][b]);
        sys.a.add(ra, rb, w[a][b]);
        sys.a.add(la, rb, -w[a][b]);
        sys.a.add(ra, lb, -w[a][b]);
      }
  }

  if (bc == DirichletMode::None) return sys;
  std::vector<int> dofs;
  std::vector<double> values;
  if (bc == DirichletMode::OuterLayer) {
    if (dg.outer_boundary_vertices.empty())
      throw Error("assemble_dg: no Dirichlet boundary layer present");
    for (int v : dg.outer_boundary_vertices) {
      dofs.push_back(v);
      values.push_back(g ? g(mesh.vertices[v]) : 0.0);
    }
  } else {
    const auto& bnd = dg.boundary_original_vertices;
    for (int v = 0; v < mesh.n_vertices(); ++v)
      if (std::binary_search(bnd.begin(), bnd.end(),
                             dg.vertex_provenance[v].original)) {
        dofs.push_back(v);
        values.push_back(g ? g(mesh.vertices[v]) : 0.0);
      }
  }
  detail::set_dirichlet(sys, std::move(dofs), std::move(values));
  eliminate_dirichlet(sys);
  return sys;
}

/// Jump of a discrete field at vertex k of an interface: left trace minus
/// right trace (the two copies coincide geometrically).
template <int Dim>
inline double jump_at_vertex(const std::vector<double>& field,
                             const Interface<Dim>& itf, int k) {
  return field[itf.left_copies[k]] - field[itf.right_copies[k]];
}

}  // namespace flatfem
