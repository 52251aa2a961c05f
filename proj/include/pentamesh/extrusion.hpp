#pragma once

#include <utility>

#include "pentamesh/coloring.hpp"
#include "pentamesh/pent_mesh.hpp"
#include "pentamesh/tet_mesh.hpp"

namespace pentamesh {

/// Strictly increasing time values s_0 < s_1 < ... < s_M that bound the
/// space-time slabs; there are values.size()-1 slabs.
struct TimeSlices {
  std::vector<double> values;

  std::size_t slab_count() const { return values.size() - 1; }

  void validate() const {
    if (values.size() < 2) {
      throw Error("time slices need at least two values, got " + std::to_string(values.size()));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i])) throw Error("time slice " + std::to_string(i) + " not finite");
      if (i > 0 && !(values[i - 1] < values[i])) {
        throw Error("time slices must be strictly increasing (values " + std::to_string(i - 1) +
                    " and " + std::to_string(i) + ")");
      }
    }
  }

  static TimeSlices create(std::vector<double> values) {
    TimeSlices s{std::move(values)};
    s.validate();
    return s;
  }

  /// Equispaced slices: M slabs between t0 and t1.
  static TimeSlices uniform(double t0, double t1, std::size_t slabs) {
    std::vector<double> values(slabs + 1);
    for (std::size_t i = 0; i <= slabs; ++i) {
      values[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(slabs);
    }
    return create(std::move(values));
  }
};

/// Embed a spatial point into space-time at time r: (x,y,z) -> (x,y,z,r).
inline Point4 embed_at_time(const Point3& p, double r) { return {p[0], p[1], p[2], r}; }

namespace detail {

/// The cell's vertices ordered by their color label: (v_A, v_B, v_C, v_D).
/// A proper coloring puts exactly one label on each vertex of a cell.
inline std::array<VertexId, 4> order_by_color(const std::array<VertexId, 4>& cell,
                                              const ColorAssignment& colors) {
  std::array<VertexId, 4> by_color{kInvalidVertex, kInvalidVertex, kInvalidVertex,
                                   kInvalidVertex};
  for (VertexId v : cell) by_color[static_cast<int>(colors[v])] = v;
  for (VertexId v : by_color) {
    if (v == kInvalidVertex) {
      throw ColoringError("cell does not carry all four colors");
    }
  }
  return by_color;
}

/// The four tags of one subdivided prism. Vertex ids follow the global
/// scheme id(vertex, slice) = slice * nv + vertex; `lo` and `hi` are the
/// color-ordered spatial vertices embedded at the slab's bottom and top.
inline std::array<TaggedPentatope, 4> prism_tags(const std::array<VertexId, 4>& by_color,
                                                 std::size_t nv, std::uint32_t slab) {
  const VertexId base_lo = static_cast<VertexId>(slab * nv);
  const VertexId base_hi = static_cast<VertexId>((slab + 1) * nv);
  const VertexId a = base_lo + by_color[0], b = base_lo + by_color[1],
                 c = base_lo + by_color[2], d = base_lo + by_color[3];
  const VertexId a1 = base_hi + by_color[0], b1 = base_hi + by_color[1],
                 c1 = base_hi + by_color[2], d1 = base_hi + by_color[3];
  return {TaggedPentatope{{d, c, b, a, d1}, 0}, TaggedPentatope{{c, b, a, d1, c1}, 0},
          TaggedPentatope{{b, a, d1, c1, b1}, 0}, TaggedPentatope{{a, d1, c1, b1, a1}, 0}};
}

}  // namespace detail

/// Extrude every tetrahedron through every slab and subdivide each prism
/// into four pentatopes along the coloring, emitting the canonical type-0
/// tags. The embedded copies of a spatial vertex share one global id per
/// slice, id = slice * vertex_count + vertex, so adjacent prisms and slabs
/// agree on their shared vertices by construction. Cells are ordered by
/// (slab, tetrahedron, tau) and carry extrusion provenance.
inline PentMesh extrude_subdivide(const TetMesh& mesh, const ColorAssignment& colors,
                                  const TimeSlices& slices) {
  slices.validate();
  const ColoringReport coloring = verify_coloring(mesh, colors);
  if (!coloring.pass()) {
    throw ColoringError("improper coloring: " + std::to_string(coloring.violating_edges.size()) +
                        " monochromatic edge(s), first (" +
                        std::to_string(coloring.violating_edges[0].a) + "," +
                        std::to_string(coloring.violating_edges[0].b) + ")");
  }
  const ConformityReport conformity = check_conforming(mesh);
  if (!conformity.pass()) {
    throw ConformityError("input mesh is not conforming: " +
                          std::to_string(conformity.violations.size()) + " violation(s), first: " +
                          conformity.violations[0].reason);
  }

  const std::size_t nv = mesh.vertex_count();
  const std::size_t slabs = slices.slab_count();

  PentMesh out;
  out.vertices.reserve(nv * (slabs + 1));
  for (std::size_t j = 0; j <= slabs; ++j) {
    for (std::size_t v = 0; v < nv; ++v) {
      out.vertices.push_back(embed_at_time(mesh.vertices[v], slices.values[j]));
    }
  }

  out.cells.reserve(4 * mesh.cell_count() * slabs);
  out.provenance.reserve(out.cells.capacity());
  for (std::uint32_t slab = 0; slab < slabs; ++slab) {
    for (CellId tet = 0; tet < mesh.cell_count(); ++tet) {
      const auto by_color = detail::order_by_color(mesh.cells[tet], colors);
      const auto tags = detail::prism_tags(by_color, nv, slab);
      for (std::uint8_t k = 0; k < 4; ++k) {
        out.cells.push_back(tags[k]);
        out.provenance.push_back(Provenance::extruded(tet, slab, static_cast<std::uint8_t>(k + 1)));
      }
    }
  }
  return out;
}

/// Recompute every tag from extrusion provenance and the coloring, in one
/// pass with constant work per cell. The result is exactly what
/// extrude_subdivide emits; meshes containing bisection children are
/// rejected, since child tags come from the bisection rule instead.
inline PentMesh tag_mesh(PentMesh pents, const TetMesh& mesh, const ColorAssignment& colors) {
  if (colors.size() != mesh.vertex_count()) {
    throw ColoringError("incomplete color assignment: " + std::to_string(colors.size()) +
                        " labels for " + std::to_string(mesh.vertex_count()) + " vertices");
  }
  const std::size_t nv = mesh.vertex_count();
  for (std::size_t c = 0; c < pents.cells.size(); ++c) {
    const Provenance& prov = pents.provenance[c];
    if (prov.kind != Provenance::Kind::extruded || prov.generation != 0) {
      throw PreconditionError("tag_mesh requires generation-0 extruded cells; cell " +
                              std::to_string(c) + " is refined or of unknown origin");
    }
    const auto by_color = detail::order_by_color(mesh.cells.at(prov.root_tet), colors);
    const auto tags = detail::prism_tags(by_color, nv, prov.slab);
    pents.cells[c] = tags[prov.tau - 1];
  }
  return pents;
}

}  // namespace pentamesh
