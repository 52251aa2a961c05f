#pragma once

#include <algorithm>
#include <map>
#include <utility>

#include "pentamesh/pent_mesh.hpp"

namespace pentamesh {

/// The reflection of a tagged pentatope: the other vertex order of the
/// same cell that bisects to the same children. The permutation depends on
/// the type:
///   type 0   -> (v4, v3, v2, v1, v0)
///   type 1   -> (v4, v1, v3, v2, v0)
///   type 2,3 -> (v4, v1, v2, v3, v0)
/// Reflection is an involution for every type.
inline TaggedPentatope reflect(const TaggedPentatope& t) {
  const auto& x = t.v;
  switch (t.type) {
    case 0:
      return {{x[4], x[3], x[2], x[1], x[0]}, t.type};
    case 1:
      return {{x[4], x[1], x[3], x[2], x[0]}, t.type};
    default:
      return {{x[4], x[1], x[2], x[3], x[0]}, t.type};
  }
}

/// Shared table of edge midpoints, keyed by the sorted endpoint pair, so
/// that every bisection of one edge anywhere in the mesh produces a single
/// vertex. Midpoint coordinates are the arithmetic mean of the endpoints.
struct MidpointTable {
  std::map<EdgeKey, VertexId> midpoints;

  VertexId get_or_create(VertexId a, VertexId b, std::vector<Point4>& vertices) {
    const EdgeKey key = edge_key(a, b);
    auto it = midpoints.find(key);
    if (it != midpoints.end()) return it->second;
    const VertexId id = static_cast<VertexId>(vertices.size());
    vertices.push_back(midpoint(vertices[a], vertices[b]));
    midpoints.emplace(key, id);
    return id;
  }
};

namespace detail {

/// Children of the bisection rule as pure index arithmetic, given the
/// midpoint id m of the refinement edge (v0, v4):
///   child1 = (v0, m, v1, v2, v3) for every type;
///   child2 = (v4, m, v3, v2, v1) for type 0,
///            (v4, m, v1, v3, v2) for type 1,
///            (v4, m, v1, v2, v3) for types 2 and 3;
/// both children have type (parent type + 1) mod 4.
inline std::pair<TaggedPentatope, TaggedPentatope> bisect_with_midpoint(const TaggedPentatope& t,
                                                                        VertexId m) {
  const auto& x = t.v;
  const std::uint8_t child_type = static_cast<std::uint8_t>((t.type + 1) % 4);
  const TaggedPentatope first{{x[0], m, x[1], x[2], x[3]}, child_type};
  TaggedPentatope second;
  switch (t.type) {
    case 0:
      second = {{x[4], m, x[3], x[2], x[1]}, child_type};
      break;
    case 1:
      second = {{x[4], m, x[1], x[3], x[2]}, child_type};
      break;
    default:
      second = {{x[4], m, x[1], x[2], x[3]}, child_type};
      break;
  }
  return {first, second};
}

}  // namespace detail

struct BisectChildren {
  TaggedPentatope first;
  TaggedPentatope second;
  VertexId midpoint = kInvalidVertex;
};

/// Bisect a tagged pentatope at the midpoint of its refinement edge,
/// fetching or creating the midpoint through the shared table. Children
/// whose measure falls below the degeneracy floor are rejected.
inline BisectChildren bisect(const TaggedPentatope& t, MidpointTable& midpoints,
                             std::vector<Point4>& vertices) {
  const VertexId m = midpoints.get_or_create(t.v[0], t.v[4], vertices);
  auto [first, second] = detail::bisect_with_midpoint(t, m);
  for (const TaggedPentatope* child : {&first, &second}) {
    const auto& cv = child->v;
    const double measure = pent_measure(vertices[cv[0]], vertices[cv[1]], vertices[cv[2]],
                                        vertices[cv[3]], vertices[cv[4]]);
    if (measure <= kDegenerateMeasureTol) {
      throw DegeneracyError("bisection child has degenerate measure " + std::to_string(measure));
    }
  }
  return {first, second, m};
}

/// Reflected-neighbor predicate: the two tags must share a hyperface (have
/// exactly four common vertex ids), have the same type, and the vertex
/// order of t2 must match the order of t1 or of reflect(t1) in all but at
/// most one position.
inline bool reflected_neighbors(const TaggedPentatope& t1, const TaggedPentatope& t2) {
  if (t1.type != t2.type) return false;

  const auto s1 = t1.sorted_vertices();
  const auto s2 = t2.sorted_vertices();
  std::array<VertexId, 5> common{};
  const auto end =
      std::set_intersection(s1.begin(), s1.end(), s2.begin(), s2.end(), common.begin());
  if (end - common.begin() != 4) return false;

  auto differing_positions = [](const TaggedPentatope& a, const TaggedPentatope& b) {
    int count = 0;
    for (int i = 0; i < 5; ++i) count += a.v[i] != b.v[i] ? 1 : 0;
    return count;
  };
  return differing_positions(t2, t1) <= 1 || differing_positions(t2, reflect(t1)) <= 1;
}

namespace detail {

inline bool hyperface_contains(const HyperfaceKey& face, VertexId v) {
  return std::binary_search(face.begin(), face.end(), v);
}

inline bool hyperface_contains_all(const HyperfaceKey& face, const TaggedPentatope& t) {
  int hits = 0;
  for (VertexId v : t.v) hits += hyperface_contains(face, v) ? 1 : 0;
  return hits >= 4;
}

/// Bisect combinatorially against a scratch midpoint table; fresh ids are
/// handed out by the caller and never touch any mesh.
inline std::pair<TaggedPentatope, TaggedPentatope> bisect_symbolic(
    const TaggedPentatope& t, std::map<EdgeKey, VertexId>& scratch, VertexId& next_id) {
  const EdgeKey key = edge_key(t.v[0], t.v[4]);
  auto it = scratch.find(key);
  if (it == scratch.end()) it = scratch.emplace(key, next_id++).first;
  return bisect_with_midpoint(t, it->second);
}

}  // namespace detail

/// Consistency of one adjacent pair sharing the given hyperface:
///   1. if either tag's refinement edge lies in the shared hyperface, the
///      two tags themselves must be reflected neighbors;
///   2. otherwise each tag is bisected (into scratch storage; the mesh is
///      untouched) and the unique pair of children containing the shared
///      hyperface must be reflected neighbors.
/// If no child of a tag contains the shared hyperface the mesh structure
/// is malformed and a StructuralError is raised.
inline bool check_pair_consistent(const TaggedPentatope& t1, const TaggedPentatope& t2,
                                  const HyperfaceKey& shared) {
  auto edge_in_face = [&](const TaggedPentatope& t) {
    return detail::hyperface_contains(shared, t.v[0]) &&
           detail::hyperface_contains(shared, t.v[4]);
  };
  if (edge_in_face(t1) || edge_in_face(t2)) return reflected_neighbors(t1, t2);

  std::map<EdgeKey, VertexId> scratch;
  VertexId next_id = 0;
  for (const auto& t : {t1, t2}) {
    for (VertexId v : t.v) next_id = std::max(next_id, v + 1);
  }
  const auto children1 = detail::bisect_symbolic(t1, scratch, next_id);
  const auto children2 = detail::bisect_symbolic(t2, scratch, next_id);

  auto child_on_face = [&](const std::pair<TaggedPentatope, TaggedPentatope>& children,
                           const char* which) -> const TaggedPentatope& {
    const bool first = detail::hyperface_contains_all(shared, children.first);
    const bool second = detail::hyperface_contains_all(shared, children.second);
    if (first == second) {
      throw StructuralError(std::string("malformed mesh: expected exactly one child of the ") +
                            which + " tag to contain the shared hyperface");
    }
    return first ? children.first : children.second;
  };
  return reflected_neighbors(child_on_face(children1, "first"), child_on_face(children2, "second"));
}

struct TaggingViolation {
  CellId a = kInvalidCell;
  CellId b = kInvalidCell;
  HyperfaceKey hyperface{};
  std::string reason;
};

struct TaggingReport {
  std::vector<TaggingViolation> violations;
  std::size_t pairs_checked = 0;
  bool pass() const { return violations.empty(); }
};

/// Mesh-wide consistency: every pair of cells sharing a hyperface must be
/// consistently tagged. Hyperfaces with more than two incident cells are
/// reported as violations too.
inline TaggingReport check_consistent_tagging(const PentMesh& mesh) {
  TaggingReport report;
  for (const auto& [face, cells] : detail::collect_hyperface_incidence(mesh)) {
    if (cells.size() > 2) {
      report.violations.push_back({cells[0], cells[1], face,
                                   "hyperface shared by " + std::to_string(cells.size()) +
                                       " cells (non-manifold)"});
      continue;
    }
    if (cells.size() != 2) continue;
    ++report.pairs_checked;
    const TaggedPentatope& t1 = mesh.cells[cells[0]];
    const TaggedPentatope& t2 = mesh.cells[cells[1]];
    try {
      if (!check_pair_consistent(t1, t2, face)) {
        const bool clause1 = (detail::hyperface_contains(face, t1.v[0]) &&
                              detail::hyperface_contains(face, t1.v[4])) ||
                             (detail::hyperface_contains(face, t2.v[0]) &&
                              detail::hyperface_contains(face, t2.v[4]));
        report.violations.push_back({cells[0], cells[1], face,
                                     clause1 ? "refinement edge lies in the shared hyperface but "
                                               "the tags are not reflected neighbors"
                                             : "the children sharing the hyperface are not "
                                               "reflected neighbors"});
      }
    } catch (const StructuralError& e) {
      report.violations.push_back({cells[0], cells[1], face, e.what()});
    }
  }
  return report;
}

namespace detail {

/// Working state for conforming refinement. Cells are append-only; a
/// bisected cell is marked dead and its children appended, so cell ids
/// reflect creation order. Vertex-to-cell incidence lists stay sorted
/// because new cells always get larger ids.
class Refiner {
 public:
  explicit Refiner(const PentMesh& mesh) : vertices_(mesh.vertices) {
    entries_.reserve(mesh.cells.size() * 2);
    incidence_.resize(mesh.vertices.size());
    for (CellId c = 0; c < mesh.cells.size(); ++c) {
      entries_.push_back({mesh.cells[c], mesh.provenance[c], true});
      for (VertexId v : mesh.cells[c].v) incidence_[v].push_back(c);
      bump_generation(mesh.provenance[c].generation, +1);
    }
  }

  void refine_cell(CellId c, int depth) {
    if (!entries_[c].alive) return;
    if (depth > depth_limit()) {
      throw PreconditionError(
          "refinement closure exceeded its recursion guard; the input tagging is not consistent");
    }
    while (entries_[c].alive) {
      const EdgeKey edge = entries_[c].tag.refinement_edge();
      const std::vector<CellId> patch = cells_sharing_edge(edge);
      CellId incompatible = kInvalidCell;
      for (CellId s : patch) {
        if (entries_[s].tag.refinement_edge() != edge) {
          incompatible = s;
          break;
        }
      }
      if (incompatible == kInvalidCell) {
        bisect_patch(edge, patch);
        return;
      }
      refine_cell(incompatible, depth + 1);
    }
  }

  PentMesh extract() && {
    PentMesh out;
    out.vertices = std::move(vertices_);
    for (const Entry& e : entries_) {
      if (!e.alive) continue;
      out.cells.push_back(e.tag);
      out.provenance.push_back(e.prov);
    }
    return out;
  }

 private:
  struct Entry {
    TaggedPentatope tag;
    Provenance prov;
    bool alive = true;
  };

  std::vector<CellId> cells_sharing_edge(const EdgeKey& edge) const {
    std::vector<CellId> out;
    const auto& la = incidence_[edge.first];
    const auto& lb = incidence_[edge.second];
    std::set_intersection(la.begin(), la.end(), lb.begin(), lb.end(), std::back_inserter(out));
    std::erase_if(out, [&](CellId c) { return !entries_[c].alive; });
    return out;
  }

  void bisect_patch(const EdgeKey& edge, const std::vector<CellId>& patch) {
    bisections_ += patch.size();
    if (bisections_ > kClosureSafetyCap) {
      throw PreconditionError(
          "refinement closure performed an implausible number of bisections; the input tagging "
          "is not consistent");
    }
    const VertexId m = midpoints_.get_or_create(edge.first, edge.second, vertices_);
    if (m >= incidence_.size()) incidence_.resize(m + 1);
    for (CellId s : patch) {
      const BisectChildren children = bisect(entries_[s].tag, midpoints_, vertices_);
      entries_[s].alive = false;
      bump_generation(entries_[s].prov.generation, -1);
      append_child(children.first, entries_[s].prov, s, 0);
      append_child(children.second, entries_[s].prov, s, 1);
    }
  }

  void append_child(const TaggedPentatope& tag, const Provenance& parent_prov, CellId parent,
                    std::uint8_t ordinal) {
    // parent_prov may reference entries_ storage; copy before push_back can
    // reallocate it.
    const Provenance child_prov = Provenance::child_of(parent_prov, parent, ordinal);
    const CellId id = static_cast<CellId>(entries_.size());
    entries_.push_back({tag, child_prov, true});
    for (VertexId v : tag.v) incidence_[v].push_back(id);
    bump_generation(child_prov.generation, +1);
  }

  void bump_generation(std::uint32_t gen, int delta) {
    if (gen >= alive_by_generation_.size()) alive_by_generation_.resize(gen + 1, 0);
    alive_by_generation_[gen] += delta;
  }

  int depth_limit() const {
    std::size_t lo = alive_by_generation_.size(), hi = 0;
    for (std::size_t g = 0; g < alive_by_generation_.size(); ++g) {
      if (alive_by_generation_[g] > 0) {
        lo = std::min(lo, g);
        hi = std::max(hi, g);
      }
    }
    const std::size_t span = lo <= hi ? hi - lo : 0;
    return static_cast<int>(4 * (span + 2));
  }

  static constexpr std::size_t kClosureSafetyCap = 10'000'000;

  std::vector<Point4> vertices_;
  std::vector<Entry> entries_;
  std::vector<std::vector<CellId>> incidence_;
  std::vector<long long> alive_by_generation_;
  MidpointTable midpoints_;
  std::size_t bisections_ = 0;
};

}  // namespace detail

/// Conforming local refinement. Every marked cell is bisected; before a
/// cell can split, every neighbor sharing its refinement edge is first
/// refined until the whole edge patch agrees on that edge, and the patch
/// is then bisected atomically around one shared midpoint. Requires a
/// consistently tagged input (the guard converts runaway closure into a
/// PreconditionError). Marked ids refer to the input mesh; the work list
/// is processed in ascending id order and the output lists surviving
/// cells in creation order, so the result is deterministic.
inline PentMesh refine(const PentMesh& mesh, std::vector<CellId> marked) {
  std::sort(marked.begin(), marked.end());
  marked.erase(std::unique(marked.begin(), marked.end()), marked.end());
  for (CellId c : marked) {
    if (c >= mesh.cells.size()) {
      throw Error("marked cell " + std::to_string(c) + " out of range (mesh has " +
                  std::to_string(mesh.cells.size()) + " cells)");
    }
  }
  detail::Refiner refiner(mesh);
  for (CellId c : marked) refiner.refine_cell(c, 0);
  return std::move(refiner).extract();
}

/// Bisect every cell once.
inline PentMesh refine_uniform(const PentMesh& mesh) {
  std::vector<CellId> all(mesh.cells.size());
  for (CellId c = 0; c < mesh.cells.size(); ++c) all[c] = c;
  return refine(mesh, std::move(all));
}

}  // namespace pentamesh
