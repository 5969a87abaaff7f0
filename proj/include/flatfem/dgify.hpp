#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "flatfem/topology.hpp"

namespace flatfem {

/// Which interior interfaces receive dummy elements.
template <int Dim>
struct InterfaceSelector {
  enum class Kind { All, None, Circle, Ids };
  Kind kind = Kind::All;
  Point<Dim> center{};
  double radius = 0.0;
  std::vector<int> ids;  // sorted interface indices for Kind::Ids

  static InterfaceSelector all() { return {}; }
  static InterfaceSelector none() {
    InterfaceSelector s;
    s.kind = Kind::None;
    return s;
  }
  static InterfaceSelector circle(const Point<Dim>& center, double radius) {
    if (radius < 0.0) throw Error("selector: radius must be >= 0");
    InterfaceSelector s;
    s.kind = Kind::Circle;
    s.center = center;
    s.radius = radius;
    return s;
  }
  static InterfaceSelector explicit_ids(std::vector<int> ids) {
    InterfaceSelector s;
    s.kind = Kind::Ids;
    std::sort(ids.begin(), ids.end());
    s.ids = std::move(ids);
    return s;
  }

  bool selects(int interface_id, const Point<Dim>& midpoint) const {
    switch (kind) {
      case Kind::All: return true;
      case Kind::None: return false;
      case Kind::Circle: return distance<Dim>(midpoint, center) < radius;
      case Kind::Ids:
        return std::binary_search(ids.begin(), ids.end(), interface_id);
    }
    return false;
  }
};

/// Selects an interface iff its midpoint lies strictly inside the disc;
/// moving the disc switches elements between continuous FEM and DG.
template <int Dim>
inline InterfaceSelector<Dim> circular_front_selector(const Point<Dim>& center,
                                                      double radius) {
  return InterfaceSelector<Dim>::circle(center, radius);
}

template <int Dim>
struct DgifyOptions {
  InterfaceSelector<Dim> selector = InterfaceSelector<Dim>::all();
  bool dirichlet_boundary_layer = true;
};

/// One record per original facet that carries duplicated traces: every
/// interior facet of the input mesh, plus (when the boundary layer is on)
/// every boundary facet. Copy ids are aligned with `original_vertices`;
/// geometric positions of left_copies[k] and right_copies[k] coincide
/// exactly. For boundary records the "right" side is the pinned mirror.
template <int Dim>
struct Interface {
  std::array<int, Dim> original_vertices;  // sorted original ids
  std::array<int, Dim> left_copies{};
  std::array<int, Dim> right_copies{};
  int left_element = -1;
  int right_element = -1;  // -1 on the boundary
  double measure = 0.0;    // |Gamma| in 2D, area in 3D, 1 in 1D
  Point<Dim> midpoint{};
  bool selected = false;
  bool boundary = false;
  std::vector<int> dummy_elements;
};

struct VertexProvenance {
  int original = -1;       // vertex id in the input mesh
  int owner_element = -1;  // Thick element that first claimed this copy
};

template <int Dim>
struct DgifyResult {
  Mesh<Dim> mesh;
  std::vector<Interface<Dim>> interfaces;
  std::vector<VertexProvenance> vertex_provenance;  // per vertex id
  std::vector<int> outer_boundary_vertices;  // pinned mirror copies
  std::vector<int> dummy_interface;  // element id -> interface index, -1 Thick
  std::vector<int> boundary_original_vertices;  // sorted, of the input mesh
  int n_thick = 0;

  int n_interior_dofs() const {
    return mesh.n_vertices() -
           static_cast<int>(outer_boundary_vertices.size());
  }
};

namespace detail {

// Union-find over the elements incident to one vertex.
struct StarUnionFind {
  std::vector<int> items;   // sorted incident element ids
  std::vector<int> parent;  // indices into items

  int index_of(int element) const {
    auto it = std::lower_bound(items.begin(), items.end(), element);
    return static_cast<int>(it - items.begin());
  }
  int find(int i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace detail

/// The mesh edit. Duplicates vertices so that the two sides of every
/// selected interface carry independent traces, and inserts Dim zero-measure
/// simplices per selected interface (the collapsed prism split):
///
///   1D  node with copies x-,x+:        (x-,x+)
///   2D  edge a,b:                      (a+,b-,a-), (a+,b+,b-)
///   3D  face p,q,r:                    (p-,q-,r-,p+), (q-,r-,p+,q+),
///                                      (r-,p+,q+,r+)
///
/// Each inserted simplex collapses onto the facet and penalizes exactly one
/// copy pair once the assembler thresholds its Jacobian. Copies are shared
/// across unselected facets: around a vertex, element copies are the
/// connected components of its element star under "shares an unselected
/// interior facet at this vertex", so unselected regions remain continuous
/// FEM. With everything selected the components are singletons and the mesh
/// has exactly (Dim+1) * n_thick interior vertices. A copy pair that stays
/// identified around a partially selected front would give a dummy with a
/// repeated vertex id and an identically zero contribution; it is omitted.
///
/// With `dirichlet_boundary_layer` every boundary facet additionally gets
/// pinned mirror vertices and Dim BoundaryDummy simplices, which impose
/// Dirichlet data by boundary jump penalization.
///
/// Vertices keep their input ids; copies are appended in element order, then
/// mirror vertices in boundary-facet order. Dummies are appended after the
/// Thick elements in interface order. selector = none with the layer off is
/// a byte-for-byte no-op.
template <int Dim>
inline DgifyResult<Dim> dgify(const Mesh<Dim>& mesh,
                              const DgifyOptions<Dim>& options) {
  validate(mesh);
  for (int e = 0; e < mesh.n_elements(); ++e)
    if (mesh.classes[e] != ElementClass::Thick)
      throw Error("dgify: input mesh already contains dummy elements");

  const FacetTopology<Dim> topo = extract_interfaces(mesh);
  const int n_interfaces = static_cast<int>(topo.interior.size());

  if (options.selector.kind == InterfaceSelector<Dim>::Kind::Ids)
    for (int id : options.selector.ids)
      if (id < 0 || id >= n_interfaces)
        throw Error("dgify: selector references interface " +
                    std::to_string(id) + ", mesh has " +
                    std::to_string(n_interfaces));

  std::vector<char> selected(n_interfaces, 0);
  for (int i = 0; i < n_interfaces; ++i)
    selected[i] = options.selector.selects(
        i, facet_midpoint(mesh, topo.interior[i].vertices));

  // Element stars per vertex.
  std::vector<detail::StarUnionFind> star(mesh.n_vertices());
  for (int e = 0; e < mesh.n_elements(); ++e)
    for (int v : mesh.elements[e]) star[v].items.push_back(e);
  for (auto& s : star) {
    std::sort(s.items.begin(), s.items.end());
    s.parent.resize(s.items.size());
    std::iota(s.parent.begin(), s.parent.end(), 0);
  }

  // Continuity across unselected interior facets.
  for (int i = 0; i < n_interfaces; ++i) {
    if (selected[i]) continue;
    const auto& f = topo.interior[i];
    for (int v : f.vertices)
      star[v].unite(star[v].index_of(f.left), star[v].index_of(f.right));
  }

  DgifyResult<Dim> out;
  out.n_thick = mesh.n_elements();
  out.mesh.vertices = mesh.vertices;
  out.mesh.elements = mesh.elements;
  out.mesh.classes = mesh.classes;
  out.mesh.coefficients = mesh.coefficients;
  out.vertex_provenance.resize(mesh.n_vertices());
  for (int v = 0; v < mesh.n_vertices(); ++v)
    out.vertex_provenance[v] = {v, -1};

  // Assign one vertex id per (vertex, star component). The first component
  // touched keeps the original id, later ones append fresh copies.
  std::vector<std::map<int, int>> component_id(mesh.n_vertices());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    for (int lv = 0; lv <= Dim; ++lv) {
      const int v = mesh.elements[e][lv];
      const int root = star[v].find(star[v].index_of(e));
      auto [it, inserted] = component_id[v].try_emplace(root, -1);
      if (inserted) {
        if (out.vertex_provenance[v].owner_element == -1) {
          it->second = v;
          out.vertex_provenance[v].owner_element = e;
        } else {
          it->second = out.mesh.n_vertices();
          out.mesh.vertices.push_back(mesh.vertices[v]);
          out.vertex_provenance.push_back({v, e});
        }
      }
      out.mesh.elements[e][lv] = it->second;
    }
  }

  const auto copy_of = [&](int v, int element) {
    return component_id[v].at(star[v].find(star[v].index_of(element)));
  };

  const auto add_dummy = [&](const std::array<int, Dim + 1>& verts,
                             ElementClass cls, int interface_index) {
    for (int a = 0; a <= Dim; ++a)
      for (int b = a + 1; b <= Dim; ++b)
        if (verts[a] == verts[b]) return;  // sewn pair, zero contribution
    out.interfaces[interface_index].dummy_elements.push_back(
        out.mesh.n_elements());
    out.mesh.elements.push_back(verts);
    out.mesh.classes.push_back(cls);
    out.mesh.coefficients.push_back(1.0);
    out.dummy_interface.push_back(interface_index);
  };

  const auto emit_dummies = [&](int rec, ElementClass cls) {
    const Interface<Dim>& r = out.interfaces[rec];
    const auto& l = r.left_copies;
    const auto& q = r.right_copies;
    if constexpr (Dim == 1) {
      add_dummy({l[0], q[0]}, cls, rec);
    } else if constexpr (Dim == 2) {
      add_dummy({q[0], l[1], l[0]}, cls, rec);
      add_dummy({q[0], q[1], l[1]}, cls, rec);
    } else {
      add_dummy({l[0], l[1], l[2], q[0]}, cls, rec);
      add_dummy({l[1], l[2], q[0], q[1]}, cls, rec);
      add_dummy({l[2], q[0], q[1], q[2]}, cls, rec);
    }
  };

  out.dummy_interface.assign(mesh.n_elements(), -1);

  // Interior interface records and their dummies.
  for (int i = 0; i < n_interfaces; ++i) {
    const auto& f = topo.interior[i];
    Interface<Dim> rec;
    rec.original_vertices = f.vertices;
    rec.left_element = f.left;
    rec.right_element = f.right;
    rec.measure = facet_measure(mesh, f.vertices);
    rec.midpoint = facet_midpoint(mesh, f.vertices);
    rec.selected = selected[i];
    rec.boundary = false;
    for (int k = 0; k < Dim; ++k) {
      rec.left_copies[k] = copy_of(f.vertices[k], f.left);
      rec.right_copies[k] = copy_of(f.vertices[k], f.right);
    }
    out.interfaces.push_back(rec);
    if (rec.selected)
      emit_dummies(static_cast<int>(out.interfaces.size()) - 1,
                   ElementClass::InterfaceDummy);
  }

  // Boundary vertex bookkeeping (used for strong Dirichlet modes as well).
  {
    std::vector<char> on_boundary(mesh.n_vertices(), 0);
    for (const auto& f : topo.boundary)
      for (int v : f.vertices) on_boundary[v] = 1;
    for (int v = 0; v < mesh.n_vertices(); ++v)
      if (on_boundary[v]) out.boundary_original_vertices.push_back(v);
  }

  // Dirichlet boundary layer: mirror copies pinned to the boundary plus
  // BoundaryDummy simplices; the mirror side plays the "+" role.
  if (options.dirichlet_boundary_layer) {
    for (const auto& f : topo.boundary) {
      Interface<Dim> rec;
      rec.original_vertices = f.vertices;
      rec.left_element = f.owner;
      rec.right_element = -1;
      rec.measure = facet_measure(mesh, f.vertices);
      rec.midpoint = facet_midpoint(mesh, f.vertices);
      rec.selected = true;
      rec.boundary = true;
      for (int k = 0; k < Dim; ++k) {
        rec.left_copies[k] = copy_of(f.vertices[k], f.owner);
        rec.right_copies[k] = out.mesh.n_vertices();
        out.mesh.vertices.push_back(mesh.vertices[f.vertices[k]]);
        out.vertex_provenance.push_back({f.vertices[k], f.owner});
        out.outer_boundary_vertices.push_back(rec.right_copies[k]);
      }
      out.interfaces.push_back(rec);
      emit_dummies(static_cast<int>(out.interfaces.size()) - 1,
                   ElementClass::BoundaryDummy);
    }
  }

  return out;
}

}  // namespace flatfem
