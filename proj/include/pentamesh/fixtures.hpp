#pragma once

#include <cmath>
#include <string>

#include "pentamesh/tet_mesh.hpp"

namespace pentamesh {

/// Unit corner simplex: (0,0,0),(1,0,0),(0,1,0),(0,0,1); volume 1/6.
inline TetMesh make_single_tet() {
  return TetMesh::create({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{0, 1, 2, 3}});
}

/// An n x n x n grid of unit cubes, each decomposed into the 6 Kuhn
/// tetrahedra sharing the cube's main diagonal. All cubes use the same
/// orientation, so the triangulation is conforming. Vertex ids follow
/// x + (n+1)*y + (n+1)^2*z over lattice coordinates.
inline TetMesh make_kuhn_grid(std::size_t n) {
  if (n == 0) throw Error("kuhn-grid needs n >= 1");
  const std::size_t stride = n + 1;
  std::vector<Point3> vertices;
  vertices.reserve(stride * stride * stride);
  for (std::size_t z = 0; z < stride; ++z) {
    for (std::size_t y = 0; y < stride; ++y) {
      for (std::size_t x = 0; x < stride; ++x) {
        vertices.push_back(
            {static_cast<double>(x), static_cast<double>(y), static_cast<double>(z)});
      }
    }
  }
  auto vid = [stride](std::size_t x, std::size_t y, std::size_t z) {
    return static_cast<VertexId>(x + stride * (y + stride * z));
  };

  // The 6 permutations of the axis order define the 6 chains
  // corner -> corner+e_p0 -> +e_p1 -> +e_p2 through each cube.
  static constexpr int kAxisOrders[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                            {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<std::array<VertexId, 4>> cells;
  cells.reserve(6 * n * n * n);
  for (std::size_t z = 0; z < n; ++z) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t x = 0; x < n; ++x) {
        for (const auto& order : kAxisOrders) {
          std::size_t p[3] = {x, y, z};
          std::array<VertexId, 4> cell{};
          cell[0] = vid(p[0], p[1], p[2]);
          for (int step = 0; step < 3; ++step) {
            ++p[order[step]];
            cell[step + 1] = vid(p[0], p[1], p[2]);
          }
          cells.push_back(cell);
        }
      }
    }
  }
  return TetMesh::create(std::move(vertices), std::move(cells));
}

/// Kuhn decomposition of the unit cube: 6 tetrahedra of volume 1/6 sharing
/// the main diagonal.
inline TetMesh make_kuhn_cube() { return make_kuhn_grid(1); }

/// Three tetrahedra arranged around one shared interior edge, with dihedral
/// angles of 120 degrees. The shared edge has odd cell incidence, so the
/// mesh fails the edge-parity diagnostic and is not 4-colorable (its vertex
/// graph is the complete graph on 5 vertices).
inline TetMesh make_odd_fan() {
  const double s = std::sqrt(3.0) / 2.0;
  return TetMesh::create(
      {{0, 0, 0}, {0, 0, 1}, {1, 0, 0}, {-0.5, s, 0}, {-0.5, -s, 0}},
      {{0, 1, 2, 3}, {0, 1, 3, 4}, {0, 1, 4, 2}});
}

/// Fixture by name: "single-tet", "kuhn-cube", "kuhn-grid(n)", "odd-fan".
inline TetMesh generate_fixture(const std::string& name) {
  if (name == "single-tet") return make_single_tet();
  if (name == "kuhn-cube") return make_kuhn_cube();
  if (name == "odd-fan") return make_odd_fan();
  if (name.starts_with("kuhn-grid(") && name.ends_with(")")) {
    const std::string arg = name.substr(10, name.size() - 11);
    std::size_t pos = 0;
    unsigned long n = 0;
    try {
      n = std::stoul(arg, &pos);
    } catch (const std::exception&) {
      throw Error("unknown fixture '" + name + "'");
    }
    if (pos != arg.size() || n == 0) throw Error("unknown fixture '" + name + "'");
    return make_kuhn_grid(n);
  }
  throw Error("unknown fixture '" + name +
              "' (expected single-tet, kuhn-cube, kuhn-grid(n), or odd-fan)");
}

}  // namespace pentamesh
