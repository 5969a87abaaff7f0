#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "flatfem/geometry.hpp"

namespace flatfem {

/// Element classes. Thick elements carry the approximation; dummy elements
/// have measure exactly zero and exist only to realize jump penalties.
/// InterfaceDummy sits on an interior facet, BoundaryDummy connects a
/// boundary facet to its pinned mirror vertices.
enum class ElementClass : char {
  Thick = 'T',
  InterfaceDummy = 'I',
  BoundaryDummy = 'B',
};

inline char to_char(ElementClass c) { return static_cast<char>(c); }

inline ElementClass element_class_from_char(char c) {
  switch (c) {
    case 'T': return ElementClass::Thick;
    case 'I': return ElementClass::InterfaceDummy;
    case 'B': return ElementClass::BoundaryDummy;
    default: throw Error(std::string("unknown element class tag '") + c + "'");
  }
}

/// Simplicial mesh. Immutable by convention once built: generators, readers
/// and the mesh edit all return fresh meshes. `coefficients` holds the
/// per-element diffusion factor alpha (1.0 by default; dummies always 1.0).
template <int Dim>
struct Mesh {
  static constexpr int dim = Dim;
  static constexpr int verts_per_elem = Dim + 1;

  std::vector<Point<Dim>> vertices;
  std::vector<std::array<int, Dim + 1>> elements;
  std::vector<ElementClass> classes;
  std::vector<double> coefficients;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_elements() const { return static_cast<int>(elements.size()); }

  int n_thick() const {
    int n = 0;
    for (ElementClass c : classes) n += (c == ElementClass::Thick) ? 1 : 0;
    return n;
  }

  std::array<Point<Dim>, Dim + 1> element_points(int e) const {
    std::array<Point<Dim>, Dim + 1> p;
    for (int v = 0; v <= Dim; ++v) p[v] = vertices[elements[e][v]];
    return p;
  }

  bool operator==(const Mesh& o) const {
    return vertices == o.vertices && elements == o.elements &&
           classes == o.classes && coefficients == o.coefficients;
  }
};

/// Throws if vertex ids are out of range, repeated within an element, or the
/// bookkeeping vectors disagree in size.
template <int Dim>
inline void validate(const Mesh<Dim>& mesh) {
  const int nv = mesh.n_vertices();
  if (mesh.classes.size() != mesh.elements.size() ||
      mesh.coefficients.size() != mesh.elements.size())
    throw Error("mesh: per-element arrays out of sync");
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto& el = mesh.elements[e];
    for (int a = 0; a <= Dim; ++a) {
      if (el[a] < 0 || el[a] >= nv)
        throw Error("mesh: element " + std::to_string(e) +
                    " references vertex " + std::to_string(el[a]) +
                    " out of range");
      for (int b = a + 1; b <= Dim; ++b)
        if (el[a] == el[b])
          throw Error("mesh: element " + std::to_string(e) +
                      " has repeated vertex ids");
    }
  }
}

/// Global mesh size h: maximum edge length over Thick elements. Dummy
/// elements are excluded (their edges duplicate Thick facet edges anyway).
template <int Dim>
inline double mesh_size(const Mesh<Dim>& mesh) {
  double h = 0.0;
  bool any = false;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    if (mesh.classes[e] != ElementClass::Thick) continue;
    any = true;
    const auto p = mesh.element_points(e);
    for (int a = 0; a <= Dim; ++a)
      for (int b = a + 1; b <= Dim; ++b)
        h = std::max(h, distance<Dim>(p[a], p[b]));
  }
  if (!any) throw Error("mesh_size: mesh has no Thick element");
  return h;
}

template <int Dim>
inline double element_volume(const Mesh<Dim>& mesh, int e) {
  return simplex_volume<Dim>(mesh.element_points(e));
}

/// Sum of Thick element volumes (the measure of the covered domain).
template <int Dim>
inline double thick_volume(const Mesh<Dim>& mesh) {
  double v = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e)
    if (mesh.classes[e] == ElementClass::Thick) v += element_volume(mesh, e);
  return v;
}

}  // namespace flatfem
