#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>

#include "pentamesh/tet_mesh.hpp"

namespace pentamesh {

/// Vertex labels of a 4-coloring. Serialized as 0,1,2,3.
enum class ColorLabel : std::uint8_t { A = 0, B = 1, C = 2, D = 3 };

inline char color_name(ColorLabel c) { return "ABCD"[static_cast<int>(c)]; }

/// Total per-vertex label assignment, indexed by VertexId.
using ColorAssignment = std::vector<ColorLabel>;

/// Vertex adjacency of a tetrahedral mesh: the union over cells of all six
/// vertex pairs. Neighbor lists are sorted, symmetric and self-loop free.
inline std::vector<std::vector<VertexId>> vertex_graph(const TetMesh& mesh) {
  std::vector<std::vector<VertexId>> adj(mesh.vertex_count());
  for (const auto& cell : mesh.cells) {
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        adj[cell[i]].push_back(cell[j]);
        adj[cell[j]].push_back(cell[i]);
      }
    }
  }
  for (auto& nbrs : adj) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  return adj;
}

struct ColoringViolation {
  VertexId a = kInvalidVertex;
  VertexId b = kInvalidVertex;
};

struct ColoringReport {
  std::vector<ColoringViolation> violating_edges;
  bool pass() const { return violating_edges.empty(); }
};

/// Properness check: no edge of the mesh may join two equal labels. The
/// assignment must be total; a partial one is an error, not a violation.
inline ColoringReport verify_coloring(const TetMesh& mesh, const ColorAssignment& colors) {
  if (colors.size() != mesh.vertex_count()) {
    throw ColoringError("incomplete color assignment: " + std::to_string(colors.size()) +
                        " labels for " + std::to_string(mesh.vertex_count()) + " vertices");
  }
  ColoringReport report;
  std::set<EdgeKey> seen;
  for (const auto& cell : mesh.cells) {
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        const EdgeKey e = edge_key(cell[i], cell[j]);
        if (colors[e.first] == colors[e.second] && seen.insert(e).second) {
          report.violating_edges.push_back({e.first, e.second});
        }
      }
    }
  }
  return report;
}

struct ColoringSearchResult {
  enum class Status { found, budget_exhausted, uncolorable };
  Status status = Status::uncolorable;
  ColorAssignment colors;  // valid only when status == found
  std::uint64_t nodes_expanded = 0;

  bool found() const { return status == Status::found; }
};

/// Meshes with fewer vertices than this are searched exhaustively
/// (ignoring the caller's budget, up to a large safety cap), so a failure
/// is a proof of 4-uncolorability rather than a budget artifact.
inline constexpr std::size_t kExhaustiveVertexThreshold = 64;
inline constexpr std::uint64_t kExhaustiveSafetyCap = 50'000'000;

/// Backtracking search for a proper 4-coloring, DSATUR-ordered: the next
/// vertex is the uncolored one with the most distinct neighbor colors,
/// ties broken by higher degree then lower id; labels are tried in order
/// A,B,C,D. Deterministic for identical inputs and budget. Every attempted
/// assignment counts one node expansion against the budget.
inline ColoringSearchResult find_four_coloring(const TetMesh& mesh,
                                               std::uint64_t budget = 1'000'000) {
  const auto adj = vertex_graph(mesh);
  const std::size_t n = adj.size();
  const bool exhaustive = n < kExhaustiveVertexThreshold;
  const std::uint64_t effective_budget = exhaustive ? kExhaustiveSafetyCap : budget;

  ColoringSearchResult result;
  std::vector<int> color(n, -1);
  // Count of colored neighbors per label, per vertex; saturation is the
  // number of nonzero entries.
  std::vector<std::array<std::uint16_t, 4>> neighbor_labels(n, {0, 0, 0, 0});
  bool budget_hit = false;

  auto saturation = [&](std::size_t v) {
    int s = 0;
    for (int l = 0; l < 4; ++l) s += neighbor_labels[v][l] > 0 ? 1 : 0;
    return s;
  };

  auto pick_vertex = [&]() {
    std::size_t best = n;
    int best_sat = -1;
    std::size_t best_deg = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (color[v] >= 0) continue;
      const int sat = saturation(v);
      const std::size_t deg = adj[v].size();
      if (sat > best_sat || (sat == best_sat && deg > best_deg)) {
        best = v;
        best_sat = sat;
        best_deg = deg;
      }
    }
    return best;
  };

  std::function<bool(std::size_t)> go = [&](std::size_t colored) -> bool {
    if (colored == n) return true;
    const std::size_t v = pick_vertex();
    for (int label = 0; label < 4; ++label) {
      if (neighbor_labels[v][label] > 0) continue;
      if (result.nodes_expanded >= effective_budget) {
        budget_hit = true;
        return false;
      }
      ++result.nodes_expanded;
      color[v] = label;
      for (VertexId w : adj[v]) ++neighbor_labels[w][label];
      if (go(colored + 1)) return true;
      for (VertexId w : adj[v]) --neighbor_labels[w][label];
      color[v] = -1;
      if (budget_hit) return false;
    }
    return false;
  };

  if (go(0)) {
    result.status = ColoringSearchResult::Status::found;
    result.colors.resize(n);
    for (std::size_t v = 0; v < n; ++v) result.colors[v] = static_cast<ColorLabel>(color[v]);
  } else {
    result.status = budget_hit ? ColoringSearchResult::Status::budget_exhausted
                               : ColoringSearchResult::Status::uncolorable;
  }
  return result;
}

struct EdgeParityEntry {
  VertexId a = kInvalidVertex;
  VertexId b = kInvalidVertex;
  std::uint32_t incident_cells = 0;
  bool interior = false;

  bool odd() const { return incident_cells % 2 == 1; }
  bool flagged() const { return interior && odd(); }
};

/// Per-edge incidence report. An edge is interior when it lies in no
/// boundary face. Odd interior edges are flagged; boundary edges are
/// reported with their counts but never flagged, since the parity
/// criterion this diagnostic serves is stated for interior edges.
struct EdgeParityReport {
  std::vector<EdgeParityEntry> edges;  // ascending by (a, b)

  std::vector<EdgeParityEntry> flagged() const {
    std::vector<EdgeParityEntry> out;
    for (const auto& e : edges) {
      if (e.flagged()) out.push_back(e);
    }
    return out;
  }
  bool pass() const {
    return std::none_of(edges.begin(), edges.end(),
                        [](const EdgeParityEntry& e) { return e.flagged(); });
  }
};

inline EdgeParityReport edge_parity_check(const TetMesh& mesh) {
  std::map<EdgeKey, std::uint32_t> counts;
  for (const auto& cell : mesh.cells) {
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) ++counts[edge_key(cell[i], cell[j])];
    }
  }

  std::set<EdgeKey> boundary_edges;
  for (const auto& [face, cells] : detail::collect_face_incidence(mesh)) {
    if (cells.size() == 1) {
      boundary_edges.insert(edge_key(face[0], face[1]));
      boundary_edges.insert(edge_key(face[0], face[2]));
      boundary_edges.insert(edge_key(face[1], face[2]));
    }
  }

  EdgeParityReport report;
  for (const auto& [edge, count] : counts) {
    report.edges.push_back({edge.first, edge.second, count, !boundary_edges.contains(edge)});
  }
  return report;
}

struct BarycentricSubdivision {
  TetMesh mesh;
  ColorAssignment colors;
};

/// Barycentric subdivision with the canonical coloring: original vertices
/// are A, edge centers B, face centers C, cell centers D. Each input cell
/// becomes 24 cells, one per flag (vertex in edge in face in cell); centers
/// shared between neighboring cells are deduplicated by the sub-simplex's
/// sorted vertex-id key, so the result conforms whenever the input does.
inline BarycentricSubdivision barycentric_subdivide(const TetMesh& mesh) {
  const std::size_t nv = mesh.vertex_count();

  std::map<EdgeKey, VertexId> edge_ids;
  std::map<FaceKey, VertexId> face_ids;
  for (const auto& cell : mesh.cells) {
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) edge_ids[edge_key(cell[i], cell[j])] = 0;
      face_ids[face_key(cell, i)] = 0;
    }
  }

  std::vector<Point3> vertices = mesh.vertices;
  vertices.reserve(nv + edge_ids.size() + face_ids.size() + mesh.cell_count());

  auto centroid = [&](std::initializer_list<VertexId> ids) {
    Point3 p{0.0, 0.0, 0.0};
    for (VertexId v : ids) {
      for (int k = 0; k < 3; ++k) p[k] += mesh.vertices[v][k];
    }
    for (int k = 0; k < 3; ++k) p[k] /= static_cast<double>(ids.size());
    return p;
  };

  for (auto& [edge, id] : edge_ids) {
    id = static_cast<VertexId>(vertices.size());
    vertices.push_back(centroid({edge.first, edge.second}));
  }
  for (auto& [face, id] : face_ids) {
    id = static_cast<VertexId>(vertices.size());
    vertices.push_back(centroid({face[0], face[1], face[2]}));
  }
  const VertexId first_cell_center = static_cast<VertexId>(vertices.size());
  for (const auto& cell : mesh.cells) {
    vertices.push_back(centroid({cell[0], cell[1], cell[2], cell[3]}));
  }

  std::vector<std::array<VertexId, 4>> cells;
  cells.reserve(24 * mesh.cell_count());
  for (CellId c = 0; c < mesh.cell_count(); ++c) {
    const VertexId center = first_cell_center + c;
    std::array<FaceKey, 4> faces;
    for (int k = 0; k < 4; ++k) faces[k] = face_key(mesh.cells[c], k);
    std::sort(faces.begin(), faces.end());
    for (const FaceKey& face : faces) {
      const std::array<EdgeKey, 3> edges{edge_key(face[0], face[1]), edge_key(face[0], face[2]),
                                         edge_key(face[1], face[2])};
      for (const EdgeKey& edge : edges) {
        for (VertexId v : {edge.first, edge.second}) {
          cells.push_back({v, edge_ids.at(edge), face_ids.at(face), center});
        }
      }
    }
  }

  ColorAssignment colors(vertices.size(), ColorLabel::D);
  for (std::size_t v = 0; v < nv; ++v) colors[v] = ColorLabel::A;
  for (const auto& [edge, id] : edge_ids) colors[id] = ColorLabel::B;
  for (const auto& [face, id] : face_ids) colors[id] = ColorLabel::C;

  return {TetMesh::create(std::move(vertices), std::move(cells)), std::move(colors)};
}

}  // namespace pentamesh
