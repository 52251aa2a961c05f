#pragma once

#include <algorithm>
#include <map>
#include <utility>

#include "pentamesh/core.hpp"

namespace pentamesh {

/// A pentatope together with an explicit vertex order and a type in
/// {0,1,2,3}. The order and the type drive bisection: the refinement edge
/// is always (v[0], v[4]).
struct TaggedPentatope {
  std::array<VertexId, 5> v{};
  std::uint8_t type = 0;

  EdgeKey refinement_edge() const {
    return v[0] < v[4] ? EdgeKey{v[0], v[4]} : EdgeKey{v[4], v[0]};
  }

  std::array<VertexId, 5> sorted_vertices() const {
    auto s = v;
    std::sort(s.begin(), s.end());
    return s;
  }

  bool operator==(const TaggedPentatope& o) const { return v == o.v && type == o.type; }
};

/// Where a cell came from. Extruded cells record the spatial tetrahedron,
/// the slab, and their position tau in {1..4} within the subdivided prism.
/// Bisection children keep the extrusion root of their ancestor plus their
/// generation; `parent` is the creation-sequence id inside the refinement
/// pass that produced the cell and is only meaningful for debugging.
struct Provenance {
  enum class Kind : std::uint8_t { extruded, bisected, unknown };

  Kind kind = Kind::unknown;
  CellId root_tet = kInvalidCell;
  std::uint32_t slab = 0;
  std::uint8_t tau = 0;  // 1..4 for extruded roots
  std::uint32_t generation = 0;
  CellId parent = kInvalidCell;
  std::uint8_t child_ordinal = 0;

  static Provenance extruded(CellId tet, std::uint32_t slab, std::uint8_t tau) {
    Provenance p;
    p.kind = Kind::extruded;
    p.root_tet = tet;
    p.slab = slab;
    p.tau = tau;
    p.generation = 0;
    return p;
  }

  static Provenance child_of(const Provenance& parent_prov, CellId parent_id,
                             std::uint8_t ordinal) {
    Provenance p = parent_prov;
    p.kind = Kind::bisected;
    p.generation = parent_prov.generation + 1;
    p.parent = parent_id;
    p.child_ordinal = ordinal;
    return p;
  }

  bool operator==(const Provenance& o) const {
    return kind == o.kind && root_tet == o.root_tet && slab == o.slab && tau == o.tau &&
           generation == o.generation && parent == o.parent && child_ordinal == o.child_ordinal;
  }
};

/// Indexed 4D pentatope mesh. Cells are tagged pentatopes; the vertex order
/// stored per cell *is* the tag.
struct PentMesh {
  std::vector<Point4> vertices;
  std::vector<TaggedPentatope> cells;
  std::vector<Provenance> provenance;  // one entry per cell

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t cell_count() const { return cells.size(); }

  void validate() const;

  static PentMesh create(std::vector<Point4> vertices, std::vector<TaggedPentatope> cells,
                         std::vector<Provenance> provenance) {
    PentMesh m{std::move(vertices), std::move(cells), std::move(provenance)};
    m.validate();
    return m;
  }
};

/// Sorted 4-subset of vertex ids identifying a hyperface (tetrahedral facet).
using HyperfaceKey = std::array<VertexId, 4>;

/// The hyperface of `cell` opposite vertex position `k`, as a sorted key.
inline HyperfaceKey hyperface_key(const std::array<VertexId, 5>& cell, int k) {
  HyperfaceKey f{};
  int j = 0;
  for (int i = 0; i < 5; ++i) {
    if (i != k) f[j++] = cell[i];
  }
  std::sort(f.begin(), f.end());
  return f;
}

using HyperfaceAdjacency = std::map<HyperfaceKey, std::vector<CellId>>;

namespace detail {

inline HyperfaceAdjacency collect_hyperface_incidence(const PentMesh& mesh) {
  HyperfaceAdjacency adj;
  for (CellId c = 0; c < mesh.cells.size(); ++c) {
    for (int k = 0; k < 5; ++k) {
      adj[hyperface_key(mesh.cells[c].v, k)].push_back(c);
    }
  }
  return adj;
}

}  // namespace detail

/// Hyperface adjacency of a pentatope mesh; analogous to
/// build_face_adjacency, with 4-vertex keys.
inline HyperfaceAdjacency build_hyperface_adjacency(const PentMesh& mesh) {
  HyperfaceAdjacency adj = detail::collect_hyperface_incidence(mesh);
  for (const auto& [face, cells] : adj) {
    if (cells.size() > 2) {
      throw ConformityError("non-manifold input: hyperface (" + std::to_string(face[0]) + "," +
                            std::to_string(face[1]) + "," + std::to_string(face[2]) + "," +
                            std::to_string(face[3]) + ") is incident to " +
                            std::to_string(cells.size()) + " cells");
    }
  }
  return adj;
}

inline double pent_measure(const PentMesh& mesh, CellId c) {
  const auto& cell = mesh.cells.at(c).v;
  const double measure =
      pent_measure(mesh.vertices[cell[0]], mesh.vertices[cell[1]], mesh.vertices[cell[2]],
                   mesh.vertices[cell[3]], mesh.vertices[cell[4]]);
  if (measure <= kDegenerateMeasureTol) {
    throw DegeneracyError("cell " + std::to_string(c) + " is degenerate (measure " +
                          std::to_string(measure) + ")");
  }
  return measure;
}

inline double total_measure(const PentMesh& mesh) {
  double sum = 0.0;
  for (CellId c = 0; c < mesh.cells.size(); ++c) sum += pent_measure(mesh, c);
  return sum;
}

inline void PentMesh::validate() const {
  if (provenance.size() != cells.size()) {
    throw Error("provenance size (" + std::to_string(provenance.size()) +
                ") does not match cell count (" + std::to_string(cells.size()) + ")");
  }
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    if (!all_finite(vertices[v])) {
      throw Error("vertex " + std::to_string(v) + " has non-finite coordinates");
    }
  }
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& cell = cells[c];
    if (cell.type > 3) {
      throw Error("cell " + std::to_string(c) + " has tag type " + std::to_string(cell.type) +
                  " outside {0,1,2,3}");
    }
    for (VertexId v : cell.v) {
      if (v >= vertices.size()) {
        throw ReferenceError("cell " + std::to_string(c) + " references vertex " +
                             std::to_string(v) + " but the mesh has " +
                             std::to_string(vertices.size()) + " vertices");
      }
    }
    const auto sorted = cell.sorted_vertices();
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error("cell " + std::to_string(c) + " has repeated vertex ids");
    }
    const double measure =
        pentamesh::pent_measure(vertices[cell.v[0]], vertices[cell.v[1]], vertices[cell.v[2]],
                                vertices[cell.v[3]], vertices[cell.v[4]]);
    if (measure <= kDegenerateMeasureTol) {
      throw DegeneracyError("cell " + std::to_string(c) + " is degenerate (measure " +
                            std::to_string(measure) + ")");
    }
  }
}

/// Conformity check for pentatope meshes: no duplicate cells, at most two
/// cells per hyperface, and the opposite vertices of the two cells across
/// an interior hyperface strictly on opposite sides of it.
inline ConformityReport check_conforming(const PentMesh& mesh) {
  ConformityReport report;

  std::map<std::array<VertexId, 5>, std::vector<CellId>> by_vertex_set;
  for (CellId c = 0; c < mesh.cells.size(); ++c) {
    by_vertex_set[mesh.cells[c].sorted_vertices()].push_back(c);
  }
  for (const auto& [key, cells] : by_vertex_set) {
    for (std::size_t i = 1; i < cells.size(); ++i) {
      report.violations.push_back({cells[0], cells[i], "duplicate cell (same vertex set)"});
    }
  }

  const HyperfaceAdjacency adj = detail::collect_hyperface_incidence(mesh);
  for (const auto& [face, cells] : adj) {
    if (cells.size() > 2) {
      report.violations.push_back(
          {cells[0], cells[1],
           "hyperface shared by " + std::to_string(cells.size()) + " cells (non-manifold)"});
      continue;
    }
    if (cells.size() == 2) {
      double side[2];
      for (int i = 0; i < 2; ++i) {
        const auto& cell = mesh.cells[cells[i]].v;
        VertexId opp = kInvalidVertex;
        for (VertexId v : cell) {
          if (!std::binary_search(face.begin(), face.end(), v)) opp = v;
        }
        side[i] = signed_pent_measure(mesh.vertices[face[0]], mesh.vertices[face[1]],
                                      mesh.vertices[face[2]], mesh.vertices[face[3]],
                                      mesh.vertices[opp]);
      }
      if (!(side[0] * side[1] < 0.0)) {
        report.violations.push_back(
            {cells[0], cells[1], "cells do not lie on opposite sides of their shared hyperface"});
      }
    }
  }
  return report;
}

}  // namespace pentamesh
