#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

/// pentamesh: simplicial space-time meshes in four dimensions.
///
/// The library works on two indexed mesh types: a 3D tetrahedral mesh
/// (the spatial mesh) and a 4D pentatope mesh (the space-time mesh, where
/// the fourth coordinate is time). All connectivity is expressed through
/// dense, 0-based vertex and cell indices; geometric coordinates are only
/// consulted for measures, orientation checks and slicing. Two cells share
/// a sub-simplex exactly when they share the corresponding vertex ids, so
/// conformity and adjacency queries are integer logic, not epsilon
/// comparisons.
namespace pentamesh {

using VertexId = std::uint32_t;
using CellId = std::uint32_t;

inline constexpr VertexId kInvalidVertex = static_cast<VertexId>(-1);
inline constexpr CellId kInvalidCell = static_cast<CellId>(-1);

/// Absolute floor on cell measures. Cells at or below it are rejected as
/// degenerate when meshes are constructed and when cells are bisected.
inline constexpr double kDegenerateMeasureTol = 1e-14;

using Point3 = std::array<double, 3>;
using Point4 = std::array<double, 4>;

/// Sorted pair of vertex ids identifying an edge.
using EdgeKey = std::pair<VertexId, VertexId>;

inline EdgeKey edge_key(VertexId a, VertexId b) {
  return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
}

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A cell (or a would-be child cell) has measure below kDegenerateMeasureTol.
struct DegeneracyError : Error {
  using Error::Error;
};

/// An input mesh failed a conformity requirement.
struct ConformityError : Error {
  using Error::Error;
};

/// A color assignment is missing, partial, or improper where a proper one
/// is required.
struct ColoringError : Error {
  using Error::Error;
};

/// The combinatorial structure of a mesh is inconsistent with what an
/// operation assumes (e.g. no child of a tagged cell contains a hyperface
/// both parents share).
struct StructuralError : Error {
  using Error::Error;
};

/// A stated precondition of an algorithm was violated; in particular the
/// refinement closure raises this when its recursion guard trips, which
/// indicates the input tagging was not consistent.
struct PreconditionError : Error {
  using Error::Error;
};

/// Malformed file content.
struct ParseError : Error {
  using Error::Error;
};

/// File content references an entity that does not exist.
struct ReferenceError : Error {
  using Error::Error;
};

/// Filesystem-level failure (cannot open/write a file).
struct IoError : Error {
  using Error::Error;
};

template <std::size_t N>
inline bool all_finite(const std::array<double, N>& p) {
  for (double c : p) {
    if (!std::isfinite(c)) return false;
  }
  return true;
}

inline double det3(const Point3& a, const Point3& b, const Point3& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
         a[2] * (b[0] * c[1] - b[1] * c[0]);
}

inline double det4(const Point4& a, const Point4& b, const Point4& c, const Point4& d) {
  // Laplace expansion along the first row.
  double det = 0.0;
  for (int j = 0; j < 4; ++j) {
    Point3 r1{}, r2{}, r3{};
    int k = 0;
    for (int col = 0; col < 4; ++col) {
      if (col == j) continue;
      r1[k] = b[col];
      r2[k] = c[col];
      r3[k] = d[col];
      ++k;
    }
    const double minor = det3(r1, r2, r3);
    det += ((j % 2 == 0) ? 1.0 : -1.0) * a[j] * minor;
  }
  return det;
}

/// Signed volume of the tetrahedron (a,b,c,d): det[b-a, c-a, d-a] / 6.
inline double signed_tet_volume(const Point3& a, const Point3& b, const Point3& c,
                                const Point3& d) {
  const Point3 u{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
  const Point3 v{c[0] - a[0], c[1] - a[1], c[2] - a[2]};
  const Point3 w{d[0] - a[0], d[1] - a[1], d[2] - a[2]};
  return det3(u, v, w) / 6.0;
}

inline double tet_volume(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  return std::abs(signed_tet_volume(a, b, c, d));
}

/// Signed 4-measure of the pentatope (a,b,c,d,e): det of the four edge
/// vectors from a, divided by 4! = 24.
inline double signed_pent_measure(const Point4& a, const Point4& b, const Point4& c,
                                  const Point4& d, const Point4& e) {
  Point4 u{}, v{}, w{}, x{};
  for (int i = 0; i < 4; ++i) {
    u[i] = b[i] - a[i];
    v[i] = c[i] - a[i];
    w[i] = d[i] - a[i];
    x[i] = e[i] - a[i];
  }
  return det4(u, v, w, x) / 24.0;
}

inline double pent_measure(const Point4& a, const Point4& b, const Point4& c, const Point4& d,
                           const Point4& e) {
  return std::abs(signed_pent_measure(a, b, c, d, e));
}

inline Point4 midpoint(const Point4& a, const Point4& b) {
  return {(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0, (a[2] + b[2]) / 2.0, (a[3] + b[3]) / 2.0};
}

struct ConformityViolation {
  CellId a = kInvalidCell;
  CellId b = kInvalidCell;  // kInvalidCell for single-cell problems
  std::string reason;
};

/// Result of a conformity check. Violations are report content, not errors;
/// an empty list means the mesh passed.
struct ConformityReport {
  std::vector<ConformityViolation> violations;
  bool pass() const { return violations.empty(); }
};

}  // namespace pentamesh
