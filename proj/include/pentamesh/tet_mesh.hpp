#pragma once

#include <algorithm>
#include <map>
#include <utility>

#include "pentamesh/core.hpp"

namespace pentamesh {

/// Indexed 3D tetrahedral mesh. Plain data; use create() to construct with
/// validation (ids in range, 4 distinct vertices per cell, positive volume,
/// finite coordinates).
struct TetMesh {
  std::vector<Point3> vertices;
  std::vector<std::array<VertexId, 4>> cells;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t cell_count() const { return cells.size(); }

  void validate() const;

  static TetMesh create(std::vector<Point3> vertices, std::vector<std::array<VertexId, 4>> cells) {
    TetMesh m{std::move(vertices), std::move(cells)};
    m.validate();
    return m;
  }
};

/// Sorted 3-subset of vertex ids identifying a triangular face.
using FaceKey = std::array<VertexId, 3>;

/// The face of `cell` opposite vertex position `k`, as a sorted key.
inline FaceKey face_key(const std::array<VertexId, 4>& cell, int k) {
  FaceKey f{};
  int j = 0;
  for (int i = 0; i < 4; ++i) {
    if (i != k) f[j++] = cell[i];
  }
  std::sort(f.begin(), f.end());
  return f;
}

/// Face-adjacency map: sorted face key -> incident cells in ascending id
/// order. std::map keys give a deterministic iteration order.
using FaceAdjacency = std::map<FaceKey, std::vector<CellId>>;

namespace detail {

/// Face incidence without the non-manifold error, for checkers that must
/// report rather than throw.
inline FaceAdjacency collect_face_incidence(const TetMesh& mesh) {
  FaceAdjacency adj;
  for (CellId c = 0; c < mesh.cells.size(); ++c) {
    for (int k = 0; k < 4; ++k) {
      adj[face_key(mesh.cells[c], k)].push_back(c);
    }
  }
  return adj;
}

}  // namespace detail

/// Triangular-face adjacency of a tetrahedral mesh. Every face key maps to
/// one (boundary) or two (interior) cells; three or more incident cells is
/// a non-manifold input and raises ConformityError.
inline FaceAdjacency build_face_adjacency(const TetMesh& mesh) {
  FaceAdjacency adj = detail::collect_face_incidence(mesh);
  for (const auto& [face, cells] : adj) {
    if (cells.size() > 2) {
      throw ConformityError("non-manifold input: face (" + std::to_string(face[0]) + "," +
                            std::to_string(face[1]) + "," + std::to_string(face[2]) +
                            ") is incident to " + std::to_string(cells.size()) + " cells");
    }
  }
  return adj;
}

inline double tet_volume(const TetMesh& mesh, CellId c) {
  const auto& cell = mesh.cells.at(c);
  const double vol = tet_volume(mesh.vertices[cell[0]], mesh.vertices[cell[1]],
                                mesh.vertices[cell[2]], mesh.vertices[cell[3]]);
  if (vol <= kDegenerateMeasureTol) {
    throw DegeneracyError("cell " + std::to_string(c) + " is degenerate (volume " +
                          std::to_string(vol) + ")");
  }
  return vol;
}

inline double total_volume(const TetMesh& mesh) {
  double sum = 0.0;
  for (CellId c = 0; c < mesh.cells.size(); ++c) sum += tet_volume(mesh, c);
  return sum;
}

inline void TetMesh::validate() const {
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    if (!all_finite(vertices[v])) {
      throw Error("vertex " + std::to_string(v) + " has non-finite coordinates");
    }
  }
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& cell = cells[c];
    for (VertexId v : cell) {
      if (v >= vertices.size()) {
        throw ReferenceError("cell " + std::to_string(c) + " references vertex " +
                             std::to_string(v) + " but the mesh has " +
                             std::to_string(vertices.size()) + " vertices");
      }
    }
    auto sorted = cell;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error("cell " + std::to_string(c) + " has repeated vertex ids");
    }
    const double vol = pentamesh::tet_volume(vertices[cell[0]], vertices[cell[1]],
                                             vertices[cell[2]], vertices[cell[3]]);
    if (vol <= kDegenerateMeasureTol) {
      throw DegeneracyError("cell " + std::to_string(c) + " is degenerate (volume " +
                            std::to_string(vol) + ")");
    }
  }
}

/// Conformity check. Combinatorial core: no duplicate cells, every face
/// incident to at most two cells. On top of that, the two cells across an
/// interior face must lie strictly on opposite sides of it, which catches
/// hanging-node constructions whose vertices break the shared-id premise.
inline ConformityReport check_conforming(const TetMesh& mesh) {
  ConformityReport report;

  std::map<std::array<VertexId, 4>, std::vector<CellId>> by_vertex_set;
  for (CellId c = 0; c < mesh.cells.size(); ++c) {
    auto key = mesh.cells[c];
    std::sort(key.begin(), key.end());
    by_vertex_set[key].push_back(c);
  }
  for (const auto& [key, cells] : by_vertex_set) {
    for (std::size_t i = 1; i < cells.size(); ++i) {
      report.violations.push_back({cells[0], cells[i], "duplicate cell (same vertex set)"});
    }
  }

  const FaceAdjacency adj = detail::collect_face_incidence(mesh);
  for (const auto& [face, cells] : adj) {
    if (cells.size() > 2) {
      report.violations.push_back(
          {cells[0], cells[1],
           "face shared by " + std::to_string(cells.size()) + " cells (non-manifold)"});
      continue;
    }
    if (cells.size() == 2) {
      // Opposite vertices must straddle the face plane.
      double side[2];
      for (int i = 0; i < 2; ++i) {
        const auto& cell = mesh.cells[cells[i]];
        VertexId opp = kInvalidVertex;
        for (VertexId v : cell) {
          if (!std::binary_search(face.begin(), face.end(), v)) opp = v;
        }
        side[i] = signed_tet_volume(mesh.vertices[face[0]], mesh.vertices[face[1]],
                                    mesh.vertices[face[2]], mesh.vertices[opp]);
      }
      if (!(side[0] * side[1] < 0.0)) {
        report.violations.push_back(
            {cells[0], cells[1], "cells do not lie on opposite sides of their shared face"});
      }
    }
  }
  return report;
}

}  // namespace pentamesh
