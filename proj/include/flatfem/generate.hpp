#pragma once

#include "flatfem/mesh.hpp"

namespace flatfem {

/// Uniform mesh of [0,1] with n intervals.
inline Mesh<1> generate_interval_mesh(int n) {
  if (n < 1) throw Error("generate_interval_mesh: n must be >= 1");
  Mesh<1> mesh;
  mesh.vertices.reserve(n + 1);
  for (int i = 0; i <= n; ++i) mesh.vertices.push_back({double(i) / double(n)});
  for (int i = 0; i < n; ++i) {
    mesh.elements.push_back({i, i + 1});
    mesh.classes.push_back(ElementClass::Thick);
    mesh.coefficients.push_back(1.0);
  }
  return mesh;
}

/// Unit square cut into n x n cells, each cell split into two triangles by
/// the lower-left to upper-right diagonal. 2n^2 triangles, (n+1)^2 vertices.
inline Mesh<2> generate_crisscross_square(int n) {
  if (n < 1) throw Error("generate_crisscross_square: n must be >= 1");
  Mesh<2> mesh;
  const auto vid = [n](int i, int j) { return i + (n + 1) * j; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.vertices.push_back({double(i) / double(n), double(j) / double(n)});
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int ll = vid(i, j), lr = vid(i + 1, j);
      const int ul = vid(i, j + 1), ur = vid(i + 1, j + 1);
      mesh.elements.push_back({ll, lr, ur});
      mesh.elements.push_back({ll, ur, ul});
      for (int k = 0; k < 2; ++k) {
        mesh.classes.push_back(ElementClass::Thick);
        mesh.coefficients.push_back(1.0);
      }
    }
  return mesh;
}

/// Unit cube cut into n^3 cells, each split into six tetrahedra sharing the
/// cell diagonal (Kuhn split). Translated copies of the split match on
/// shared faces, so the mesh is conforming. 6n^3 tets, (n+1)^3 vertices.
inline Mesh<3> generate_cube_tets(int n) {
  if (n < 1) throw Error("generate_cube_tets: n must be >= 1");
  Mesh<3> mesh;
  const auto vid = [n](int i, int j, int k) {
    return i + (n + 1) * (j + (n + 1) * k);
  };
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        mesh.vertices.push_back({double(i) / double(n), double(j) / double(n),
                                 double(k) / double(n)});
  // Axis orders for the six tets of one cell.
  static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                      {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const int base[3] = {i, j, k};
        for (const auto& perm : perms) {
          int c[3] = {base[0], base[1], base[2]};
          std::array<int, 4> tet;
          tet[0] = vid(c[0], c[1], c[2]);
          c[perm[0]] += 1;
          tet[1] = vid(c[0], c[1], c[2]);
          c[perm[1]] += 1;
          tet[2] = vid(c[0], c[1], c[2]);
          c[perm[2]] += 1;
          tet[3] = vid(c[0], c[1], c[2]);
          mesh.elements.push_back(tet);
          mesh.classes.push_back(ElementClass::Thick);
          mesh.coefficients.push_back(1.0);
        }
      }
  return mesh;
}

}  // namespace flatfem
