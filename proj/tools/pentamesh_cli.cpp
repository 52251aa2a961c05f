// Command-line driver: coloring, extrusion, tagging checks, refinement,
// verification, statistics, slicing, and the end-to-end pipeline.
//
// Exit codes: 0 all checks pass, 1 a check failed (reports written),
// 2 usage or input error.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "pentamesh/pentamesh.hpp"

using namespace pentamesh;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

/// Deterministic machine-readable report: "key value" lines, no timestamps.
class Report {
 public:
  explicit Report(std::string command) { add("command", std::move(command)); }

  void add(const std::string& key, const std::string& value) {
    lines_.push_back(key + " " + value);
  }
  void add(const std::string& key, std::size_t value) { add(key, std::to_string(value)); }
  void add(const std::string& key, double value) {
    std::ostringstream ss;
    ss.precision(17);
    ss << value;
    add(key, ss.str());
  }

  void write(const std::string& path) const {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw IoError("cannot open report file '" + path + "'");
    out << "pentamesh-report 1\n";
    for (const auto& line : lines_) out << line << "\n";
  }

 private:
  std::vector<std::string> lines_;
};

struct TetInput {
  std::string fixture;
  std::string input;
  std::string node;
  std::string ele;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--fixture", fixture,
                    "built-in mesh: single-tet, kuhn-cube, kuhn-grid(n), odd-fan");
    cmd->add_option("--input", input, "native mesh file");
    cmd->add_option("--node", node, "node file (two-file text import)");
    cmd->add_option("--ele", ele, "element file (two-file text import)");
  }

  TetMesh load(std::optional<ColorAssignment>* colors = nullptr) const {
    const int sources = (!fixture.empty()) + (!input.empty()) + (!node.empty() || !ele.empty());
    if (sources != 1) {
      throw Error("choose exactly one input: --fixture, --input, or --node/--ele");
    }
    if (!fixture.empty()) return generate_fixture(fixture);
    if (!input.empty()) {
      MeshFileContent content = parse_mesh_file(input);
      if (content.kind != MeshFileContent::Kind::tet) {
        throw Error("'" + input + "' is not a tetrahedral mesh file");
      }
      if (colors != nullptr) *colors = std::move(content.colors);
      return std::move(content.tet);
    }
    if (node.empty() || ele.empty()) throw Error("--node and --ele must be given together");
    return import_node_ele(node, ele);
  }
};

PentMesh load_pent(const std::string& input) {
  MeshFileContent content = parse_mesh_file(input);
  if (content.kind != MeshFileContent::Kind::pent) {
    throw Error("'" + input + "' is not a pentatope mesh file");
  }
  return std::move(content.pent);
}

struct SliceSpec {
  std::string list;
  double t0 = 0.0;
  double t1 = 1.0;
  std::size_t num_slabs = 0;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--slices", list, "comma-separated strictly increasing time values");
    cmd->add_option("--t0", t0, "first time value (with --num-slabs)");
    cmd->add_option("--t1", t1, "last time value (with --num-slabs)");
    cmd->add_option("--num-slabs", num_slabs, "number of equal slabs between --t0 and --t1");
  }

  TimeSlices resolve() const {
    if (!list.empty() && num_slabs > 0) {
      throw Error("give either --slices or --t0/--t1/--num-slabs, not both");
    }
    if (!list.empty()) {
      std::vector<double> values;
      std::stringstream ss(list);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          values.push_back(std::stod(item));
        } catch (const std::exception&) {
          throw Error("cannot parse slice value '" + item + "'");
        }
      }
      return TimeSlices::create(std::move(values));
    }
    if (num_slabs > 0) return TimeSlices::uniform(t0, t1, num_slabs);
    throw Error("no time slices given (--slices or --num-slabs)");
  }
};

struct MarkSpec {
  bool uniform = false;
  std::string ids;
  double fraction = 0.0;
  std::uint64_t seed = 0;

  void add_options(CLI::App* cmd) {
    cmd->add_flag("--uniform", uniform, "mark every cell");
    cmd->add_option("--mark-ids", ids, "comma-separated cell ids to mark (single round)");
    cmd->add_option("--mark-frac", fraction, "mark a random fraction (0,1] of cells per round");
    cmd->add_option("--seed", seed, "seed for random marking");
  }

  bool any() const { return uniform || !ids.empty() || fraction > 0.0; }

  std::vector<CellId> marks(const PentMesh& mesh, int round) const {
    std::vector<CellId> marked;
    if (uniform) {
      marked.resize(mesh.cell_count());
      for (CellId c = 0; c < mesh.cell_count(); ++c) marked[c] = c;
      return marked;
    }
    if (!ids.empty()) {
      std::stringstream ss(ids);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          marked.push_back(static_cast<CellId>(std::stoul(item)));
        } catch (const std::exception&) {
          throw Error("cannot parse cell id '" + item + "'");
        }
      }
      return marked;
    }
    if (fraction <= 0.0 || fraction > 1.0) {
      throw Error("--mark-frac must lie in (0, 1]");
    }
    std::vector<CellId> all(mesh.cell_count());
    for (CellId c = 0; c < mesh.cell_count(); ++c) all[c] = c;
    const auto count = std::max<std::size_t>(
        1, static_cast<std::size_t>(fraction * static_cast<double>(mesh.cell_count()) + 0.5));
    std::mt19937 rng(static_cast<std::mt19937::result_type>(seed + 0x9e3779b9ull * round));
    std::sample(all.begin(), all.end(), std::back_inserter(marked), count, rng);
    return marked;
  }
};

void print_coloring_failure(const ColoringSearchResult& result) {
  if (result.status == ColoringSearchResult::Status::uncolorable) {
    std::cout << "coloring: proven not 4-colorable (exhaustive search)\n";
  } else {
    std::cout << "coloring: not found within budget (" << result.nodes_expanded << " nodes)\n";
  }
  std::cout << "hint: rerun the pipeline with --auto-barycentric to subdivide and color "
               "canonically\n";
}

// ---- subcommand runners ----------------------------------------------------

int run_color(const TetInput& in, std::uint64_t budget, const std::string& output,
              const std::string& report_path) {
  const TetMesh mesh = in.load();
  const auto result = find_four_coloring(mesh, budget);
  Report report("color");
  report.add("vertices", mesh.vertex_count());
  report.add("cells", mesh.cell_count());
  report.add("nodes-expanded", result.nodes_expanded);
  if (!result.found()) {
    report.add("status",
               result.status == ColoringSearchResult::Status::uncolorable ? "uncolorable"
                                                                          : "not-found");
    report.write(report_path);
    print_coloring_failure(result);
    return kExitCheckFailed;
  }
  report.add("status", "found");
  report.write(report_path);
  if (!output.empty()) serialize_to_file(mesh, output, &result.colors);
  std::cout << "coloring: found after " << result.nodes_expanded << " nodes\n";
  return kExitPass;
}

int run_parity(const TetInput& in, const std::string& report_path) {
  const TetMesh mesh = in.load();
  const EdgeParityReport parity = edge_parity_check(mesh);
  const auto flagged = parity.flagged();
  Report report("parity");
  report.add("edges", parity.edges.size());
  report.add("flagged", flagged.size());
  for (const auto& e : flagged) {
    report.add("odd-interior-edge",
               std::to_string(e.a) + "," + std::to_string(e.b) + " count " +
                   std::to_string(e.incident_cells));
  }
  report.write(report_path);
  std::cout << "parity: " << parity.edges.size() << " edges, " << flagged.size()
            << " odd interior\n";
  for (const auto& e : flagged) {
    std::cout << "  edge (" << e.a << "," << e.b << ") incident to " << e.incident_cells
              << " cells\n";
  }
  return flagged.empty() ? kExitPass : kExitCheckFailed;
}

int run_barycentric(const TetInput& in, const std::string& output,
                    const std::string& report_path) {
  const TetMesh mesh = in.load();
  const auto [sub, colors] = barycentric_subdivide(mesh);
  Report report("barycentric");
  report.add("input-cells", mesh.cell_count());
  report.add("cells", sub.cell_count());
  report.add("vertices", sub.vertex_count());
  report.write(report_path);
  if (!output.empty()) serialize_to_file(sub, output, &colors);
  std::cout << "barycentric: " << sub.cell_count() << " cells, " << sub.vertex_count()
            << " vertices\n";
  return kExitPass;
}

int run_extrude(const TetInput& in, const SliceSpec& slices, std::uint64_t budget,
                const std::string& output, const std::string& report_path) {
  std::optional<ColorAssignment> colors;
  const TetMesh mesh = in.load(&colors);
  if (!colors) {
    const auto result = find_four_coloring(mesh, budget);
    if (!result.found()) {
      print_coloring_failure(result);
      return kExitCheckFailed;
    }
    colors = result.colors;
  }
  const PentMesh pents = extrude_subdivide(mesh, *colors, slices.resolve());
  Report report("extrude");
  report.add("cells", pents.cell_count());
  report.add("vertices", pents.vertex_count());
  report.add("measure", total_measure(pents));
  report.write(report_path);
  if (!output.empty()) serialize_to_file(pents, output);
  std::cout << "extrude: cells " << pents.cell_count() << " vertices " << pents.vertex_count()
            << "\n";
  return kExitPass;
}

int run_tag_check(const std::string& input, const std::string& report_path) {
  const PentMesh mesh = load_pent(input);
  const TaggingReport tagging = check_consistent_tagging(mesh);
  Report report("tag-check");
  report.add("cells", mesh.cell_count());
  report.add("pairs-checked", tagging.pairs_checked);
  report.add("violations", tagging.violations.size());
  for (const auto& v : tagging.violations) {
    report.add("violation", std::to_string(v.a) + "," + std::to_string(v.b) + ": " + v.reason);
  }
  report.add("status", tagging.pass() ? "pass" : "fail");
  report.write(report_path);
  std::cout << "tag-check: " << tagging.pairs_checked << " pairs, " << tagging.violations.size()
            << " violations\n";
  for (const auto& v : tagging.violations) {
    std::cout << "  cells (" << v.a << "," << v.b << "): " << v.reason << "\n";
  }
  return tagging.pass() ? kExitPass : kExitCheckFailed;
}

int run_bisect(const std::string& input, const MarkSpec& marks, int rounds,
               const std::string& output, const std::string& report_path) {
  PentMesh mesh = load_pent(input);
  if (!marks.any()) throw Error("choose marks: --uniform, --mark-ids, or --mark-frac");
  Report report("bisect");
  report.add("input-cells", mesh.cell_count());
  for (int round = 0; round < rounds; ++round) {
    mesh = refine(mesh, marks.marks(mesh, round));
    report.add("round-" + std::to_string(round + 1) + "-cells", mesh.cell_count());
    std::cout << "refine round " << round + 1 << ": cells " << mesh.cell_count() << "\n";
  }
  const ConformityReport conformity = check_conforming(mesh);
  report.add("conforming", conformity.pass() ? "yes" : "no");
  report.write(report_path);
  if (!output.empty()) serialize_to_file(mesh, output);
  return conformity.pass() ? kExitPass : kExitCheckFailed;
}

int run_verify(const std::string& input, const std::string& report_path) {
  const MeshFileContent content = parse_mesh_file(input);
  Report report("verify");
  ConformityReport conformity;
  std::size_t coloring_violations = 0;
  if (content.kind == MeshFileContent::Kind::tet) {
    conformity = check_conforming(content.tet);
    report.add("kind", "tet");
    report.add("cells", content.tet.cell_count());
    if (content.colors) {
      coloring_violations = verify_coloring(content.tet, *content.colors).violating_edges.size();
      report.add("coloring-violations", coloring_violations);
    }
  } else {
    conformity = check_conforming(content.pent);
    report.add("kind", "pent");
    report.add("cells", content.pent.cell_count());
  }
  report.add("conformity-violations", conformity.violations.size());
  const bool pass = conformity.pass() && coloring_violations == 0;
  report.add("status", pass ? "pass" : "fail");
  report.write(report_path);
  std::cout << "verify: " << conformity.violations.size() << " conformity violations";
  if (coloring_violations > 0) std::cout << ", " << coloring_violations << " coloring violations";
  std::cout << "\n";
  for (const auto& v : conformity.violations) {
    std::cout << "  cells (" << v.a << "," << (v.b == kInvalidCell ? std::string("-")
                                                                   : std::to_string(v.b))
              << "): " << v.reason << "\n";
  }
  return pass ? kExitPass : kExitCheckFailed;
}

int run_stats(const std::string& input, const std::string& report_path) {
  const MeshFileContent content = parse_mesh_file(input);
  Report report("stats");
  if (content.kind == MeshFileContent::Kind::tet) {
    const TetMesh& mesh = content.tet;
    report.add("kind", "tet");
    report.add("vertices", mesh.vertex_count());
    report.add("cells", mesh.cell_count());
    double total = 0.0, lo = 0.0, hi = 0.0;
    for (CellId c = 0; c < mesh.cell_count(); ++c) {
      const double v = tet_volume(mesh, c);
      total += v;
      lo = c == 0 ? v : std::min(lo, v);
      hi = std::max(hi, v);
    }
    report.add("total-volume", total);
    if (mesh.cell_count() > 0) {
      report.add("min-volume", lo);
      report.add("max-volume", hi);
    }
    std::cout << "tet mesh: " << mesh.vertex_count() << " vertices, " << mesh.cell_count()
              << " cells, volume " << total << "\n";
  } else {
    const PentMesh& mesh = content.pent;
    report.add("kind", "pent");
    report.add("vertices", mesh.vertex_count());
    report.add("cells", mesh.cell_count());
    double total = 0.0, lo = 0.0, hi = 0.0;
    std::array<std::size_t, 4> type_histogram{};
    std::map<std::uint32_t, std::size_t> generations;
    for (CellId c = 0; c < mesh.cell_count(); ++c) {
      const double v = pent_measure(mesh, c);
      total += v;
      lo = c == 0 ? v : std::min(lo, v);
      hi = std::max(hi, v);
      ++type_histogram[mesh.cells[c].type];
      ++generations[mesh.provenance[c].generation];
    }
    report.add("total-measure", total);
    if (mesh.cell_count() > 0) {
      report.add("min-measure", lo);
      report.add("max-measure", hi);
    }
    for (int g = 0; g < 4; ++g) {
      report.add("type-" + std::to_string(g) + "-cells", type_histogram[g]);
    }
    for (const auto& [gen, count] : generations) {
      report.add("generation-" + std::to_string(gen) + "-cells", count);
    }
    std::cout << "pent mesh: " << mesh.vertex_count() << " vertices, " << mesh.cell_count()
              << " cells, measure " << total << "\n";
  }
  report.write(report_path);
  return kExitPass;
}

int run_slice(const std::string& input, double time, const std::string& output,
              const std::string& report_path) {
  const PentMesh mesh = load_pent(input);
  const SliceMesh slice = extract_time_slice(mesh, time);
  Report report("slice");
  report.add("time", time);
  report.add("vertices", slice.vertices.size());
  report.add("cells", slice.cells.size());
  report.add("volume", slice.total_volume());
  report.write(report_path);
  if (!output.empty()) {
    std::ofstream out(output);
    if (!out) throw IoError("cannot open '" + output + "' for writing");
    write_vtk(slice, out, "pentamesh slice");
  }
  std::cout << "slice t=" << time << ": " << slice.cells.size() << " tets, volume "
            << slice.total_volume() << "\n";
  return kExitPass;
}

int run_pipeline(const TetInput& in, const SliceSpec& slices, std::uint64_t budget,
                 bool auto_barycentric, int refine_rounds, const MarkSpec& marks,
                 const std::string& out_dir, const std::string& report_path) {
  namespace fs = std::filesystem;
  if (!out_dir.empty()) fs::create_directories(out_dir);
  auto artifact = [&](const std::string& name) {
    return out_dir.empty() ? name : (fs::path(out_dir) / name).string();
  };

  Report report("pipeline");
  std::optional<ColorAssignment> colors;
  TetMesh mesh = in.load(&colors);
  report.add("input-cells", mesh.cell_count());

  // Stage 1: coloring, with the subdivision fallback.
  if (!colors) {
    const auto result = find_four_coloring(mesh, budget);
    if (result.found()) {
      colors = result.colors;
      report.add("coloring", "found");
      std::cout << "coloring: found after " << result.nodes_expanded << " nodes\n";
    } else if (auto_barycentric) {
      auto sub = barycentric_subdivide(mesh);
      mesh = std::move(sub.mesh);
      colors = std::move(sub.colors);
      report.add("coloring", "barycentric-fallback");
      std::cout << "coloring: falling back to barycentric subdivision ("
                << mesh.cell_count() << " cells)\n";
    } else {
      report.add("coloring", result.status == ColoringSearchResult::Status::uncolorable
                                 ? "uncolorable"
                                 : "not-found");
      report.write(report_path);
      print_coloring_failure(result);
      return kExitCheckFailed;
    }
  } else {
    report.add("coloring", "from-input");
  }

  const ColoringReport coloring = verify_coloring(mesh, *colors);
  if (!coloring.pass()) {
    report.add("status", "coloring-violations");
    report.write(report_path);
    std::cout << "coloring verification failed: " << coloring.violating_edges.size()
              << " monochromatic edges\n";
    return kExitCheckFailed;
  }
  serialize_to_file(mesh, artifact("colored.pmesh"), &*colors);

  // Stage 2: extrusion.
  PentMesh pents = extrude_subdivide(mesh, *colors, slices.resolve());
  report.add("spacetime-cells", pents.cell_count());
  report.add("spacetime-vertices", pents.vertex_count());
  std::cout << "extrude: cells " << pents.cell_count() << "\n";
  serialize_to_file(pents, artifact("spacetime.pmesh"));

  // Stage 3: tagging consistency.
  const TaggingReport tagging = check_consistent_tagging(pents);
  report.add("tagging-violations", tagging.violations.size());
  if (!tagging.pass()) {
    report.add("status", "tagging-violations");
    report.write(report_path);
    std::cout << "tag-check failed: " << tagging.violations.size() << " violations\n";
    return kExitCheckFailed;
  }
  std::cout << "tag-check: pass (" << tagging.pairs_checked << " pairs)\n";

  // Stage 4: optional refinement.
  if (refine_rounds > 0) {
    for (int round = 0; round < refine_rounds; ++round) {
      pents = refine(pents, marks.marks(pents, round));
      const ConformityReport conformity = check_conforming(pents);
      report.add("round-" + std::to_string(round + 1) + "-cells", pents.cell_count());
      std::cout << "refine round " << round + 1 << ": cells " << pents.cell_count() << "\n";
      if (!conformity.pass()) {
        report.add("status", "refinement-nonconforming");
        report.write(report_path);
        std::cout << "conformity failed after round " << round + 1 << "\n";
        return kExitCheckFailed;
      }
    }
    serialize_to_file(pents, artifact("refined.pmesh"));
  }

  // Stage 5: final verification.
  const ConformityReport conformity = check_conforming(pents);
  report.add("conformity-violations", conformity.violations.size());
  report.add("final-cells", pents.cell_count());
  report.add("status", conformity.pass() ? "pass" : "fail");
  report.write(report_path);
  std::cout << "verify: " << (conformity.pass() ? "pass" : "fail") << "\n";
  std::cout << "final: cells " << pents.cell_count() << "\n";
  return conformity.pass() ? kExitPass : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"4D simplex space-time meshes: coloring, extrusion, tagging, bisection"};
  app.require_subcommand(1);

  // color
  auto* color_cmd = app.add_subcommand("color", "find a 4-coloring of a tetrahedral mesh");
  TetInput color_in;
  color_in.add_options(color_cmd);
  std::uint64_t color_budget = 1'000'000;
  std::string color_output, color_report;
  color_cmd->add_option("--budget", color_budget, "node-expansion budget");
  color_cmd->add_option("--output", color_output, "write the colored mesh here");
  color_cmd->add_option("--report", color_report, "write a machine-readable report");

  // parity
  auto* parity_cmd = app.add_subcommand("parity", "edge-parity diagnostic");
  TetInput parity_in;
  parity_in.add_options(parity_cmd);
  std::string parity_report;
  parity_cmd->add_option("--report", parity_report, "write a machine-readable report");

  // barycentric
  auto* bary_cmd = app.add_subcommand("barycentric",
                                      "barycentric subdivision with the canonical coloring");
  TetInput bary_in;
  bary_in.add_options(bary_cmd);
  std::string bary_output, bary_report;
  bary_cmd->add_option("--output", bary_output, "write the subdivided colored mesh here");
  bary_cmd->add_option("--report", bary_report, "write a machine-readable report");

  // extrude
  auto* extrude_cmd = app.add_subcommand("extrude", "extrude and subdivide into pentatopes");
  TetInput extrude_in;
  extrude_in.add_options(extrude_cmd);
  SliceSpec extrude_slices;
  extrude_slices.add_options(extrude_cmd);
  std::uint64_t extrude_budget = 1'000'000;
  std::string extrude_output, extrude_report;
  extrude_cmd->add_option("--budget", extrude_budget, "coloring budget if colors are missing");
  extrude_cmd->add_option("--output", extrude_output, "write the space-time mesh here");
  extrude_cmd->add_option("--report", extrude_report, "write a machine-readable report");

  // tag-check
  auto* tag_cmd = app.add_subcommand("tag-check", "verify consistent tagging");
  std::string tag_input, tag_report;
  tag_cmd->add_option("--input", tag_input, "pentatope mesh file")->required();
  tag_cmd->add_option("--report", tag_report, "write a machine-readable report");

  // bisect
  auto* bisect_cmd = app.add_subcommand("bisect", "conforming local refinement");
  std::string bisect_input, bisect_output, bisect_report;
  int bisect_rounds = 1;
  MarkSpec bisect_marks;
  bisect_cmd->add_option("--input", bisect_input, "pentatope mesh file")->required();
  bisect_cmd->add_option("--refine-rounds", bisect_rounds, "number of refinement rounds");
  bisect_marks.add_options(bisect_cmd);
  bisect_cmd->add_option("--output", bisect_output, "write the refined mesh here");
  bisect_cmd->add_option("--report", bisect_report, "write a machine-readable report");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "conformity (and coloring) verification");
  std::string verify_input, verify_report;
  verify_cmd->add_option("--input", verify_input, "mesh file (tet or pent)")->required();
  verify_cmd->add_option("--report", verify_report, "write a machine-readable report");

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "mesh statistics");
  std::string stats_input, stats_report;
  stats_cmd->add_option("--input", stats_input, "mesh file (tet or pent)")->required();
  stats_cmd->add_option("--report", stats_report, "write a machine-readable report");

  // slice
  auto* slice_cmd = app.add_subcommand("slice", "export a spatial cross-section");
  std::string slice_input, slice_output, slice_report;
  double slice_time = 0.0;
  slice_cmd->add_option("--input", slice_input, "pentatope mesh file")->required();
  slice_cmd->add_option("--time", slice_time, "time value to slice at")->required();
  slice_cmd->add_option("--output", slice_output, "write the cross-section grid file here");
  slice_cmd->add_option("--report", slice_report, "write a machine-readable report");

  // pipeline
  auto* pipeline_cmd = app.add_subcommand(
      "pipeline", "color -> (fallback) -> extrude -> tag-check -> bisect -> verify");
  TetInput pipeline_in;
  pipeline_in.add_options(pipeline_cmd);
  SliceSpec pipeline_slices;
  pipeline_slices.add_options(pipeline_cmd);
  std::uint64_t pipeline_budget = 1'000'000;
  bool pipeline_auto_barycentric = false;
  int pipeline_rounds = 0;
  MarkSpec pipeline_marks;
  std::string pipeline_out_dir, pipeline_report;
  pipeline_cmd->add_option("--budget", pipeline_budget, "coloring node-expansion budget");
  pipeline_cmd->add_flag("--auto-barycentric", pipeline_auto_barycentric,
                         "fall back to barycentric subdivision when no 4-coloring is found");
  pipeline_cmd->add_option("--refine-rounds", pipeline_rounds, "refinement rounds to run");
  pipeline_marks.add_options(pipeline_cmd);
  pipeline_cmd->add_option("--out-dir", pipeline_out_dir, "directory for stage artifacts");
  pipeline_cmd->add_option("--report", pipeline_report, "write a machine-readable report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (color_cmd->parsed()) return run_color(color_in, color_budget, color_output, color_report);
    if (parity_cmd->parsed()) return run_parity(parity_in, parity_report);
    if (bary_cmd->parsed()) return run_barycentric(bary_in, bary_output, bary_report);
    if (extrude_cmd->parsed()) {
      return run_extrude(extrude_in, extrude_slices, extrude_budget, extrude_output,
                         extrude_report);
    }
    if (tag_cmd->parsed()) return run_tag_check(tag_input, tag_report);
    if (bisect_cmd->parsed()) {
      return run_bisect(bisect_input, bisect_marks, bisect_rounds, bisect_output, bisect_report);
    }
    if (verify_cmd->parsed()) return run_verify(verify_input, verify_report);
    if (stats_cmd->parsed()) return run_stats(stats_input, stats_report);
    if (slice_cmd->parsed()) return run_slice(slice_input, slice_time, slice_output, slice_report);
    if (pipeline_cmd->parsed()) {
      return run_pipeline(pipeline_in, pipeline_slices, pipeline_budget,
                          pipeline_auto_barycentric, pipeline_rounds, pipeline_marks,
                          pipeline_out_dir, pipeline_report);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
