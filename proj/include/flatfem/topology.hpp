#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "flatfem/mesh.hpp"

namespace flatfem {

template <int Dim>
struct InteriorFacet {
  std::array<int, Dim> vertices;  // sorted vertex ids
  int left = -1;                  // owner with the smaller element id
  int right = -1;
};

template <int Dim>
struct BoundaryFacet {
  std::array<int, Dim> vertices;  // sorted vertex ids
  int owner = -1;
};

template <int Dim>
struct FacetTopology {
  std::vector<InteriorFacet<Dim>> interior;
  std::vector<BoundaryFacet<Dim>> boundary;
};

/// Facet adjacency of a conforming mesh. Each interior facet is reported
/// once, oriented so that the owner with the smaller element id is "left";
/// boundary facets carry their single owner. A facet shared by three or more
/// elements is a malformed-mesh error. Output order is deterministic:
/// sorted by (left/owner element, facet vertex ids).
template <int Dim>
inline FacetTopology<Dim> extract_interfaces(const Mesh<Dim>& mesh) {
  std::map<std::array<int, Dim>, std::pair<int, int>> owners;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    for (int drop = 0; drop <= Dim; ++drop) {
      std::array<int, Dim> key;
      int k = 0;
      for (int v = 0; v <= Dim; ++v)
        if (v != drop) key[k++] = mesh.elements[e][v];
      std::sort(key.begin(), key.end());
      auto [it, inserted] = owners.try_emplace(key, e, -1);
      if (!inserted) {
        if (it->second.second != -1)
          throw Error("extract_interfaces: facet shared by three elements (" +
                      std::to_string(it->second.first) + ", " +
                      std::to_string(it->second.second) + ", " +
                      std::to_string(e) + "): malformed mesh");
        it->second.second = e;
      }
    }
  }
  FacetTopology<Dim> topo;
  for (const auto& [key, own] : owners) {
    if (own.second == -1)
      topo.boundary.push_back({key, own.first});
    else
      topo.interior.push_back({key, std::min(own.first, own.second),
                               std::max(own.first, own.second)});
  }
  std::sort(topo.interior.begin(), topo.interior.end(),
            [](const InteriorFacet<Dim>& a, const InteriorFacet<Dim>& b) {
              return std::tie(a.left, a.vertices) <
                     std::tie(b.left, b.vertices);
            });
  std::sort(topo.boundary.begin(), topo.boundary.end(),
            [](const BoundaryFacet<Dim>& a, const BoundaryFacet<Dim>& b) {
              return std::tie(a.owner, a.vertices) <
                     std::tie(b.owner, b.vertices);
            });
  return topo;
}

/// Measure of a facet given by its vertex ids: 1 in 1D (a point), edge
/// length in 2D, triangle area in 3D.
template <int Dim>
inline double facet_measure(const Mesh<Dim>& mesh,
                            const std::array<int, Dim>& vertices) {
  if constexpr (Dim == 1) {
    return 1.0;
  } else if constexpr (Dim == 2) {
    return distance<2>(mesh.vertices[vertices[0]], mesh.vertices[vertices[1]]);
  } else {
    const Vec<3> e1 =
        sub<3>(mesh.vertices[vertices[1]], mesh.vertices[vertices[0]]);
    const Vec<3> e2 =
        sub<3>(mesh.vertices[vertices[2]], mesh.vertices[vertices[0]]);
    return 0.5 * norm<3>(cross(e1, e2));
  }
}

template <int Dim>
inline Point<Dim> facet_midpoint(const Mesh<Dim>& mesh,
                                 const std::array<int, Dim>& vertices) {
  Point<Dim> m{};
  for (int v = 0; v < Dim; ++v)
    for (int i = 0; i < Dim; ++i) m[i] += mesh.vertices[vertices[v]][i] / Dim;
  return m;
}

}  // namespace flatfem
