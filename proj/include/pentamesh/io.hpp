#pragma once

#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "pentamesh/coloring.hpp"
#include "pentamesh/pent_mesh.hpp"
#include "pentamesh/tet_mesh.hpp"

// Native mesh file format (version 1). Line-oriented text; '#' starts a
// comment; ids are dense and 0-based.
//
//   pentamesh 1 tet|pent
//   vertices <N>
//     x y z          (tet)  |  x y z t        (pent)
//   cells <M>
//     v0 v1 v2 v3    (tet)  |  v0 v1 v2 v3 v4 gamma
//   colors           (optional, tet only; N lines of 0..3)
//     c
//   provenance       (optional, pent only; M lines)
//     E tet slab tau                               (extruded, generation 0)
//     B parent ordinal generation tet slab tau     (bisection child)
//     U                                            (unknown origin)
//   end
//
// Doubles round-trip exactly (written with max_digits10).

namespace pentamesh {

struct MeshFileContent {
  enum class Kind { tet, pent };
  Kind kind = Kind::tet;
  TetMesh tet;
  std::optional<ColorAssignment> colors;
  PentMesh pent;
};

namespace detail {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  /// Next non-empty, non-comment line; returns false at end of input.
  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_number_;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  }

  std::size_t line_number() const { return line_number_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("line " + std::to_string(line_number_) + ": " + what);
  }

 private:
  std::istream& in_;
  std::size_t line_number_ = 0;
};

template <typename T>
inline T parse_field(std::istringstream& ss, LineReader& reader, const char* what) {
  T value{};
  if (!(ss >> value)) reader.fail(std::string("expected ") + what);
  return value;
}

inline void expect_line_end(std::istringstream& ss, LineReader& reader) {
  std::string extra;
  if (ss >> extra) reader.fail("unexpected trailing field '" + extra + "'");
}

inline void write_coord_row(std::ostream& out, const double* coords, int n) {
  for (int i = 0; i < n; ++i) out << (i ? " " : "") << coords[i];
  out << "\n";
}

}  // namespace detail

inline void serialize(const TetMesh& mesh, const ColorAssignment* colors, std::ostream& out) {
  out << std::setprecision(17);
  out << "pentamesh 1 tet\n";
  out << "vertices " << mesh.vertex_count() << "\n";
  for (const Point3& p : mesh.vertices) detail::write_coord_row(out, p.data(), 3);
  out << "cells " << mesh.cell_count() << "\n";
  for (const auto& cell : mesh.cells) {
    out << cell[0] << " " << cell[1] << " " << cell[2] << " " << cell[3] << "\n";
  }
  if (colors != nullptr) {
    out << "colors\n";
    for (ColorLabel c : *colors) out << static_cast<int>(c) << "\n";
  }
  out << "end\n";
}

inline void serialize(const PentMesh& mesh, std::ostream& out) {
  out << std::setprecision(17);
  out << "pentamesh 1 pent\n";
  out << "vertices " << mesh.vertex_count() << "\n";
  for (const Point4& p : mesh.vertices) detail::write_coord_row(out, p.data(), 4);
  out << "cells " << mesh.cell_count() << "\n";
  for (const auto& cell : mesh.cells) {
    for (VertexId v : cell.v) out << v << " ";
    out << static_cast<int>(cell.type) << "\n";
  }
  out << "provenance\n";
  for (const Provenance& p : mesh.provenance) {
    switch (p.kind) {
      case Provenance::Kind::extruded:
        out << "E " << p.root_tet << " " << p.slab << " " << static_cast<int>(p.tau) << "\n";
        break;
      case Provenance::Kind::bisected:
        out << "B " << p.parent << " " << static_cast<int>(p.child_ordinal) << " " << p.generation
            << " " << p.root_tet << " " << p.slab << " " << static_cast<int>(p.tau) << "\n";
        break;
      case Provenance::Kind::unknown:
        out << "U\n";
        break;
    }
  }
  out << "end\n";
}

template <typename MeshT, typename... Args>
inline void serialize_to_file(const MeshT& mesh, const std::string& path, Args&&... args) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  serialize(mesh, std::forward<Args>(args)..., out);
  if (!out) throw IoError("failed while writing '" + path + "'");
}

inline void serialize_to_file(const TetMesh& mesh, const std::string& path) {
  serialize_to_file(mesh, path, static_cast<const ColorAssignment*>(nullptr));
}

inline MeshFileContent parse_mesh_file(std::istream& in) {
  detail::LineReader reader(in);
  std::string line;

  if (!reader.next(line)) throw ParseError("empty mesh file");
  std::istringstream header(line);
  std::string magic, kind_word;
  int version = 0;
  if (!(header >> magic >> version >> kind_word) || magic != "pentamesh") {
    reader.fail("expected header 'pentamesh <version> tet|pent'");
  }
  if (version != 1) reader.fail("unsupported format version " + std::to_string(version));
  MeshFileContent content;
  if (kind_word == "tet") {
    content.kind = MeshFileContent::Kind::tet;
  } else if (kind_word == "pent") {
    content.kind = MeshFileContent::Kind::pent;
  } else {
    reader.fail("unknown mesh kind '" + kind_word + "'");
  }
  const bool is_tet = content.kind == MeshFileContent::Kind::tet;
  const int dim = is_tet ? 3 : 4;

  if (!reader.next(line)) reader.fail("missing 'vertices' section");
  std::istringstream vhead(line);
  std::string word;
  std::size_t nv = 0;
  if (!(vhead >> word >> nv) || word != "vertices") reader.fail("expected 'vertices <count>'");

  std::vector<Point3> verts3;
  std::vector<Point4> verts4;
  for (std::size_t i = 0; i < nv; ++i) {
    if (!reader.next(line)) reader.fail("unexpected end of file in vertex block");
    std::istringstream ss(line);
    if (is_tet) {
      Point3 p{};
      for (int k = 0; k < dim; ++k) p[k] = detail::parse_field<double>(ss, reader, "coordinate");
      verts3.push_back(p);
    } else {
      Point4 p{};
      for (int k = 0; k < dim; ++k) p[k] = detail::parse_field<double>(ss, reader, "coordinate");
      verts4.push_back(p);
    }
    detail::expect_line_end(ss, reader);
  }

  if (!reader.next(line)) reader.fail("missing 'cells' section");
  std::istringstream chead(line);
  std::size_t nc = 0;
  if (!(chead >> word >> nc) || word != "cells") reader.fail("expected 'cells <count>'");

  std::vector<std::array<VertexId, 4>> tet_cells;
  std::vector<TaggedPentatope> pent_cells;
  for (std::size_t i = 0; i < nc; ++i) {
    if (!reader.next(line)) reader.fail("unexpected end of file in cell block");
    std::istringstream ss(line);
    const int nverts = is_tet ? 4 : 5;
    std::array<VertexId, 5> ids{};
    for (int k = 0; k < nverts; ++k) {
      const auto v = detail::parse_field<long long>(ss, reader, "vertex id");
      if (v < 0 || static_cast<std::size_t>(v) >= nv) {
        throw ReferenceError("cell " + std::to_string(i) + " (line " +
                             std::to_string(reader.line_number()) + "): vertex id " +
                             std::to_string(v) + " out of range (mesh has " + std::to_string(nv) +
                             " vertices)");
      }
      ids[k] = static_cast<VertexId>(v);
    }
    if (is_tet) {
      tet_cells.push_back({ids[0], ids[1], ids[2], ids[3]});
    } else {
      const int gamma = detail::parse_field<int>(ss, reader, "tag type");
      if (gamma < 0 || gamma > 3) reader.fail("tag type " + std::to_string(gamma) + " not in 0..3");
      pent_cells.push_back({{ids[0], ids[1], ids[2], ids[3], ids[4]},
                            static_cast<std::uint8_t>(gamma)});
    }
    detail::expect_line_end(ss, reader);
  }

  std::optional<ColorAssignment> colors;
  std::vector<Provenance> provenance;
  bool saw_provenance = false;
  while (true) {
    if (!reader.next(line)) reader.fail("missing 'end' line");
    std::istringstream ss(line);
    ss >> word;
    if (word == "end") {
      detail::expect_line_end(ss, reader);
      break;
    }
    if (word == "colors" && is_tet) {
      detail::expect_line_end(ss, reader);
      ColorAssignment parsed(nv, ColorLabel::A);
      for (std::size_t i = 0; i < nv; ++i) {
        if (!reader.next(line)) reader.fail("unexpected end of file in color block");
        std::istringstream cs(line);
        const int c = detail::parse_field<int>(cs, reader, "color label");
        if (c < 0 || c > 3) reader.fail("color label " + std::to_string(c) + " not in 0..3");
        parsed[i] = static_cast<ColorLabel>(c);
        detail::expect_line_end(cs, reader);
      }
      colors = std::move(parsed);
    } else if (word == "provenance" && !is_tet) {
      detail::expect_line_end(ss, reader);
      saw_provenance = true;
      for (std::size_t i = 0; i < nc; ++i) {
        if (!reader.next(line)) reader.fail("unexpected end of file in provenance block");
        std::istringstream ps(line);
        std::string tag;
        ps >> tag;
        Provenance p;
        if (tag == "E") {
          p.kind = Provenance::Kind::extruded;
          p.root_tet = detail::parse_field<CellId>(ps, reader, "tet id");
          p.slab = detail::parse_field<std::uint32_t>(ps, reader, "slab index");
          const int tau = detail::parse_field<int>(ps, reader, "tau index");
          if (tau < 1 || tau > 4) reader.fail("tau index " + std::to_string(tau) + " not in 1..4");
          p.tau = static_cast<std::uint8_t>(tau);
        } else if (tag == "B") {
          p.kind = Provenance::Kind::bisected;
          p.parent = detail::parse_field<CellId>(ps, reader, "parent id");
          const int ordinal = detail::parse_field<int>(ps, reader, "child ordinal");
          if (ordinal != 0 && ordinal != 1) reader.fail("child ordinal must be 0 or 1");
          p.child_ordinal = static_cast<std::uint8_t>(ordinal);
          p.generation = detail::parse_field<std::uint32_t>(ps, reader, "generation");
          p.root_tet = detail::parse_field<CellId>(ps, reader, "root tet id");
          p.slab = detail::parse_field<std::uint32_t>(ps, reader, "slab index");
          const int tau = detail::parse_field<int>(ps, reader, "tau index");
          if (tau < 1 || tau > 4) reader.fail("tau index " + std::to_string(tau) + " not in 1..4");
          p.tau = static_cast<std::uint8_t>(tau);
        } else if (tag == "U") {
          p.kind = Provenance::Kind::unknown;
        } else {
          reader.fail("unknown provenance tag '" + tag + "'");
        }
        detail::expect_line_end(ps, reader);
        provenance.push_back(p);
      }
    } else {
      reader.fail("unknown section '" + word + "'");
    }
  }

  if (is_tet) {
    content.tet = TetMesh::create(std::move(verts3), std::move(tet_cells));
    if (colors) {
      content.colors = std::move(colors);
    }
  } else {
    if (!saw_provenance) provenance.assign(nc, Provenance{});
    content.pent = PentMesh::create(std::move(verts4), std::move(pent_cells),
                                    std::move(provenance));
  }
  return content;
}

inline MeshFileContent parse_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  try {
    return parse_mesh_file(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  } catch (const ReferenceError& e) {
    throw ReferenceError(path + ": " + e.what());
  }
}

/// Two-file node/element import (the text convention used by common
/// tetrahedral mesh generators). The .node file starts with
/// "<n> <dim> <n_attrs> <n_markers>", followed by "<id> x y z ..." rows;
/// the .ele file starts with "<m> <nodes_per_cell> <n_attrs>" followed by
/// "<id> v0 v1 v2 v3 ..." rows. 0- or 1-based ids are detected from the
/// first node's index.
inline TetMesh import_node_ele(const std::string& node_path, const std::string& ele_path) {
  std::ifstream node_in(node_path);
  if (!node_in) throw IoError("cannot open '" + node_path + "' for reading");
  detail::LineReader nodes(node_in);

  std::string line;
  if (!nodes.next(line)) throw ParseError(node_path + ": empty node file");
  std::istringstream nhead(line);
  std::size_t n = 0;
  int dim = 0;
  if (!(nhead >> n >> dim) || dim != 3) {
    throw ParseError(node_path + ": expected header '<count> 3 <attrs> <markers>'");
  }

  long long base = 0;
  std::vector<Point3> verts(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!nodes.next(line)) throw ParseError(node_path + ": unexpected end of node file");
    std::istringstream ss(line);
    const auto idx = detail::parse_field<long long>(ss, nodes, "node index");
    if (i == 0) {
      if (idx != 0 && idx != 1) {
        throw ParseError(node_path + ": first node index must be 0 or 1, got " +
                         std::to_string(idx));
      }
      base = idx;
    }
    const auto slot = idx - base;
    if (slot < 0 || static_cast<std::size_t>(slot) >= n) {
      throw ParseError(node_path + ": node index " + std::to_string(idx) + " out of range");
    }
    Point3 p{};
    for (int k = 0; k < 3; ++k) p[k] = detail::parse_field<double>(ss, nodes, "coordinate");
    verts[static_cast<std::size_t>(slot)] = p;
  }

  std::ifstream ele_in(ele_path);
  if (!ele_in) throw IoError("cannot open '" + ele_path + "' for reading");
  detail::LineReader eles(ele_in);
  if (!eles.next(line)) throw ParseError(ele_path + ": empty element file");
  std::istringstream ehead(line);
  std::size_t m = 0;
  int per_cell = 0;
  if (!(ehead >> m >> per_cell) || per_cell != 4) {
    throw ParseError(ele_path + ": expected header '<count> 4 <attrs>'");
  }

  std::vector<std::array<VertexId, 4>> cells(m);
  long long ele_base = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!eles.next(line)) throw ParseError(ele_path + ": unexpected end of element file");
    std::istringstream ss(line);
    const auto idx = detail::parse_field<long long>(ss, eles, "element index");
    if (i == 0) {
      if (idx != 0 && idx != 1) {
        throw ParseError(ele_path + ": first element index must be 0 or 1, got " +
                         std::to_string(idx));
      }
      ele_base = idx;
    }
    const auto slot = idx - ele_base;
    if (slot < 0 || static_cast<std::size_t>(slot) >= m) {
      throw ParseError(ele_path + ": element index " + std::to_string(idx) + " out of range");
    }
    std::array<VertexId, 4> cell{};
    for (int k = 0; k < 4; ++k) {
      const auto v = detail::parse_field<long long>(ss, eles, "vertex id");
      const auto vslot = v - base;
      if (vslot < 0 || static_cast<std::size_t>(vslot) >= n) {
        throw ReferenceError(ele_path + ": element " + std::to_string(i) + " (line " +
                             std::to_string(eles.line_number()) + "): vertex id " +
                             std::to_string(v) + " out of range");
      }
      cell[k] = static_cast<VertexId>(vslot);
    }
    cells[static_cast<std::size_t>(slot)] = cell;
  }
  return TetMesh::create(std::move(verts), std::move(cells));
}

}  // namespace pentamesh
