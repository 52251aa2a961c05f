#pragma once

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>

#include "pentamesh/pent_mesh.hpp"

namespace pentamesh {

/// Spatial cross-section of a space-time mesh: a plain 3D tetrahedral
/// complex for export. Not validated as a conforming mesh; it exists for
/// viewers and volume accounting.
struct SliceMesh {
  std::vector<Point3> vertices;
  std::vector<std::array<VertexId, 4>> cells;

  double total_volume() const {
    double sum = 0.0;
    for (const auto& c : cells) {
      sum += tet_volume(vertices[c[0]], vertices[c[1]], vertices[c[2]], vertices[c[3]]);
    }
    return sum;
  }
};

namespace detail {

/// A slice point is either a mesh vertex lying on the cut hyperplane
/// (key (v,v)) or the crossing of a mesh edge (key (a,b), a<b). Keys give
/// slice vertices a deterministic identity shared between adjacent cells.
using SlicePointKey = std::pair<VertexId, VertexId>;

struct SliceBuilder {
  std::map<SlicePointKey, VertexId> ids;
  std::vector<Point3> coords;

  VertexId intern(const SlicePointKey& key, const Point3& p) {
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    const VertexId id = static_cast<VertexId>(coords.size());
    coords.push_back(p);
    ids.emplace(key, id);
    return id;
  }
};

struct SliceCorner {
  SlicePointKey key;
  VertexId id;
};

inline bool corner_less(const SliceCorner& a, const SliceCorner& b) { return a.key < b.key; }

/// Emit the tetrahedra of a fan from the lowest-keyed corner over the
/// polytope faces that do not contain it. Faces are triangles or quads;
/// quads are split along the diagonal through their own lowest-keyed
/// corner, so the split is reproducible and agrees across cells that share
/// the quad.
inline void fan_polytope(const std::vector<SliceCorner>& corners,
                         const std::vector<std::vector<int>>& faces,
                         std::vector<std::array<VertexId, 4>>& out) {
  int apex = 0;
  for (std::size_t i = 1; i < corners.size(); ++i) {
    if (corner_less(corners[i], corners[apex])) apex = static_cast<int>(i);
  }
  for (const auto& face : faces) {
    if (std::find(face.begin(), face.end(), apex) != face.end()) continue;
    if (face.size() == 3) {
      out.push_back({corners[apex].id, corners[face[0]].id, corners[face[1]].id,
                     corners[face[2]].id});
    } else {
      // quad, as a cycle f0-f1-f2-f3
      int lo = 0;
      for (int i = 1; i < 4; ++i) {
        if (corner_less(corners[face[i]], corners[face[lo]])) lo = i;
      }
      const auto q = [&](int i) { return corners[face[(lo + i) % 4]].id; };
      out.push_back({corners[apex].id, q(0), q(1), q(2)});
      out.push_back({corners[apex].id, q(0), q(2), q(3)});
    }
  }
}

}  // namespace detail

/// Cross-section of the mesh with the hyperplane time = t.
///
/// Cells strictly straddling the hyperplane contribute the intersection
/// polytope (a tetrahedron, pyramid, or triangular prism depending on how
/// many vertices lie on each side), tetrahedralized by fanning from the
/// lowest-keyed slice point. Cell facets lying exactly in the hyperplane
/// are emitted once, from the cell above (from the cell below only at the
/// global final time). Slicing an extruded mesh at a slice value therefore
/// reproduces the embedded spatial mesh at that slice.
inline SliceMesh extract_time_slice(const PentMesh& mesh, double t) {
  if (mesh.cell_count() == 0) throw Error("cannot slice an empty mesh");
  double tmin = mesh.vertices[0][3], tmax = mesh.vertices[0][3];
  for (const Point4& p : mesh.vertices) {
    tmin = std::min(tmin, p[3]);
    tmax = std::max(tmax, p[3]);
  }
  if (t < tmin || t > tmax) {
    throw Error("slice time " + std::to_string(t) + " outside the mesh time range [" +
                std::to_string(tmin) + ", " + std::to_string(tmax) + "]");
  }

  detail::SliceBuilder builder;
  std::vector<std::array<VertexId, 4>> cells;
  std::set<HyperfaceKey> emitted_flat_facets;

  auto spatial = [](const Point4& p) { return Point3{p[0], p[1], p[2]}; };

  for (const TaggedPentatope& cell : mesh.cells) {
    std::vector<VertexId> below, on, above;
    for (VertexId v : cell.v) {
      const double tv = mesh.vertices[v][3];
      if (tv < t) {
        below.push_back(v);
      } else if (tv > t) {
        above.push_back(v);
      } else {
        on.push_back(v);
      }
    }

    if (on.size() == 4) {
      // A whole facet lies in the hyperplane; it is the cross-section of
      // this cell. Emit from the upper cell so interior facets appear once.
      const bool upper = above.size() == 1;
      if (!upper && t != tmax) continue;
      HyperfaceKey facet{on[0], on[1], on[2], on[3]};
      std::sort(facet.begin(), facet.end());
      if (!emitted_flat_facets.insert(facet).second) continue;
      std::array<VertexId, 4> tet{};
      for (int i = 0; i < 4; ++i) {
        tet[i] = builder.intern({facet[i], facet[i]}, spatial(mesh.vertices[facet[i]]));
      }
      cells.push_back(tet);
      continue;
    }
    if (below.empty() || above.empty()) continue;  // no interior intersection

    std::sort(below.begin(), below.end());
    std::sort(above.begin(), above.end());

    std::vector<detail::SliceCorner> corners;
    auto add_on = [&](VertexId v) {
      corners.push_back({{v, v}, builder.intern({v, v}, spatial(mesh.vertices[v]))});
      return static_cast<int>(corners.size() - 1);
    };
    auto add_cut = [&](VertexId lo, VertexId hi) {
      const Point4& a = mesh.vertices[lo];
      const Point4& b = mesh.vertices[hi];
      const double s = (t - a[3]) / (b[3] - a[3]);
      const Point3 p{a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1]),
                     a[2] + s * (b[2] - a[2])};
      const detail::SlicePointKey key = lo < hi ? std::make_pair(lo, hi) : std::make_pair(hi, lo);
      corners.push_back({key, builder.intern(key, p)});
      return static_cast<int>(corners.size() - 1);
    };

    const std::size_t nl = below.size(), nu = above.size(), nz = on.size();
    const std::size_t npts = nz + nl * nu;
    std::vector<std::vector<int>> faces;

    if (npts == 4) {
      // Tetrahedral section: (4,0,1), (1,0,4), (3,1,1), (1,1,3), (2,2,1),
      // (1,2,2), (1,3,1) as (below, on, above).
      for (VertexId v : on) add_on(v);
      for (VertexId lo : below) {
        for (VertexId hi : above) add_cut(lo, hi);
      }
      cells.push_back({corners[0].id, corners[1].id, corners[2].id, corners[3].id});
      continue;
    }
    if (nz == 1 && nl == 2 && nu == 2) {
      // Pyramid: quad of cuts (l_i, u_j) plus the on-plane apex.
      const int o = add_on(on[0]);
      const int c00 = add_cut(below[0], above[0]);
      const int c01 = add_cut(below[0], above[1]);
      const int c11 = add_cut(below[1], above[1]);
      const int c10 = add_cut(below[1], above[0]);
      faces = {{c00, c01, c11, c10}, {o, c00, c01}, {o, c01, c11}, {o, c11, c10}, {o, c10, c00}};
      detail::fan_polytope(corners, faces, cells);
      continue;
    }
    if (nz == 0 && (nl == 2 || nl == 3)) {
      // Triangular prism: three parallel cut edges between the 2-side and
      // the 3-side.
      const auto& two = nl == 2 ? below : above;
      const auto& three = nl == 2 ? above : below;
      int c[3][2];
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 2; ++j) {
          c[i][j] = nl == 2 ? add_cut(two[j], three[i]) : add_cut(three[i], two[j]);
        }
      }
      faces = {{c[0][0], c[1][0], c[2][0]},
               {c[0][1], c[1][1], c[2][1]},
               {c[0][0], c[1][0], c[1][1], c[0][1]},
               {c[1][0], c[2][0], c[2][1], c[1][1]},
               {c[0][0], c[2][0], c[2][1], c[0][1]}};
      detail::fan_polytope(corners, faces, cells);
      continue;
    }
    // Lower-dimensional touch (a vertex, edge, or triangle in the plane
    // with nothing on one side): no volume contribution.
  }

  return {std::move(builder.coords), std::move(cells)};
}

/// Legacy-format unstructured-grid text file (readable by common viewers).
inline void write_vtk(const SliceMesh& mesh, std::ostream& out, const std::string& title) {
  out << std::setprecision(17);
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.vertices.size() << " double\n";
  for (const Point3& p : mesh.vertices) out << p[0] << " " << p[1] << " " << p[2] << "\n";
  out << "CELLS " << mesh.cells.size() << " " << 5 * mesh.cells.size() << "\n";
  for (const auto& c : mesh.cells) {
    out << "4 " << c[0] << " " << c[1] << " " << c[2] << " " << c[3] << "\n";
  }
  out << "CELL_TYPES " << mesh.cells.size() << "\n";
  for (std::size_t i = 0; i < mesh.cells.size(); ++i) out << "10\n";
}

/// Cross-section at time t written as an unstructured-grid text file.
inline void export_time_slice(const PentMesh& mesh, double t, const std::string& path) {
  const SliceMesh slice = extract_time_slice(mesh, t);
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_vtk(slice, out, "pentamesh slice t=" + std::to_string(t));
  if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace pentamesh
