#include <catch2/catch.hpp>

#include "pentamesh/bisection.hpp"
#include "pentamesh/extrusion.hpp"
#include "pentamesh/fixtures.hpp"
#include "support/test_oracles.hpp"

using namespace pentamesh;

namespace {

const ColorAssignment kReferenceColors{ColorLabel::A, ColorLabel::B, ColorLabel::C,
                                       ColorLabel::D};

PentMesh reference_prism_mesh(std::vector<double> slices = {0.0, 1.0}) {
  return extrude_subdivide(make_single_tet(), kReferenceColors,
                           TimeSlices::create(std::move(slices)));
}

std::set<std::pair<std::array<VertexId, 5>, int>> child_shapes(const TaggedPentatope& a,
                                                               const TaggedPentatope& b) {
  return {{a.sorted_vertices(), a.type}, {b.sorted_vertices(), b.type}};
}

/// Five-vertex scratch mesh with random coordinates, rejecting thin cells.
std::vector<Point4> random_pent_coords(std::mt19937& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  while (true) {
    std::vector<Point4> pts(5);
    for (auto& p : pts) {
      for (double& c : p) c = uni(rng);
    }
    if (pent_measure(pts[0], pts[1], pts[2], pts[3], pts[4]) > 1e-4) return pts;
  }
}

}  // namespace

TEST_CASE("reflection permutations per type", "[bisection]") {
  const TaggedPentatope t0{{10, 11, 12, 13, 14}, 0};
  REQUIRE(reflect(t0) == TaggedPentatope{{14, 13, 12, 11, 10}, 0});

  // (x_0, z, x_1, x_2, x_3)_1 reflects to (x_3, z, x_2, x_1, x_0)_1.
  const VertexId x0 = 0, x1 = 1, x2 = 2, x3 = 3, z = 9;
  const TaggedPentatope t1{{x0, z, x1, x2, x3}, 1};
  REQUIRE(reflect(t1) == TaggedPentatope{{x3, z, x2, x1, x0}, 1});

  const TaggedPentatope t2{{10, 11, 12, 13, 14}, 2};
  REQUIRE(reflect(t2) == TaggedPentatope{{14, 11, 12, 13, 10}, 2});
  const TaggedPentatope t3{{10, 11, 12, 13, 14}, 3};
  REQUIRE(reflect(t3) == TaggedPentatope{{14, 11, 12, 13, 10}, 3});
}

TEST_CASE("reflection is an involution for every type", "[bisection]") {
  std::mt19937 rng(42);
  for (int type = 0; type < 4; ++type) {
    for (int trial = 0; trial < 100; ++trial) {
      std::array<VertexId, 5> ids{0, 1, 2, 3, 4};
      std::shuffle(ids.begin(), ids.end(), rng);
      const TaggedPentatope t{ids, static_cast<std::uint8_t>(type)};
      REQUIRE(reflect(reflect(t)) == t);
    }
  }
}

TEST_CASE("bisection follows the type table", "[bisection]") {
  SECTION("type 1 produces (x0,z,x1,x2,x3)_2 and (x4,z,x1,x3,x2)_2") {
    std::vector<Point4> verts{{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0},
                              {0, 0, 0, 1}};
    MidpointTable table;
    const TaggedPentatope t{{0, 1, 2, 3, 4}, 1};
    const BisectChildren children = bisect(t, table, verts);
    const VertexId z = children.midpoint;
    REQUIRE(z == 5);
    REQUIRE(verts[z] == midpoint(verts[0], verts[4]));
    REQUIRE(children.first == TaggedPentatope{{0, z, 1, 2, 3}, 2});
    REQUIRE(children.second == TaggedPentatope{{4, z, 1, 3, 2}, 2});
  }

  SECTION("the proof's first prism tag bisects as displayed") {
    // t_1 = (x_D, x_C, x_B, x_A, x_D')_0 with the reference ids.
    const PentMesh mesh = reference_prism_mesh();
    std::vector<Point4> verts = mesh.vertices;
    MidpointTable table;
    const BisectChildren children = bisect(mesh.cells[0], table, verts);
    const VertexId z1 = children.midpoint;
    const VertexId xA = 0, xB = 1, xC = 2, xD = 3, xD1 = 7;
    REQUIRE(children.first == TaggedPentatope{{xD, z1, xC, xB, xA}, 1});
    REQUIRE(children.second == TaggedPentatope{{xD1, z1, xA, xB, xC}, 1});
  }
}

TEST_CASE("children have half the parent measure and the next type", "[bisection]") {
  std::mt19937 rng(2024);
  for (int type = 0; type < 4; ++type) {
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<Point4> verts = random_pent_coords(rng);
      const double parent = pent_measure(verts[0], verts[1], verts[2], verts[3], verts[4]);
      MidpointTable table;
      const TaggedPentatope t{{0, 1, 2, 3, 4}, static_cast<std::uint8_t>(type)};
      const BisectChildren children = bisect(t, table, verts);
      REQUIRE(children.first.type == (type + 1) % 4);
      REQUIRE(children.second.type == (type + 1) % 4);
      for (const auto& child : {children.first, children.second}) {
        const auto& v = child.v;
        const double m =
            pent_measure(verts[v[0]], verts[v[1]], verts[v[2]], verts[v[3]], verts[v[4]]);
        REQUIRE(m == Approx(parent / 2.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("a tag and its reflection bisect to the same cells", "[bisection]") {
  std::mt19937 rng(777);
  for (int type = 0; type < 4; ++type) {
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<Point4> verts = random_pent_coords(rng);
      std::array<VertexId, 5> ids{0, 1, 2, 3, 4};
      std::shuffle(ids.begin(), ids.end(), rng);
      const TaggedPentatope t{ids, static_cast<std::uint8_t>(type)};

      std::vector<Point4> verts_a = verts, verts_b = verts;
      MidpointTable table_a, table_b;
      const BisectChildren a = bisect(t, table_a, verts_a);
      const BisectChildren b = bisect(reflect(t), table_b, verts_b);
      REQUIRE(child_shapes(a.first, a.second) == child_shapes(b.first, b.second));
    }
  }
}

TEST_CASE("reflected-neighbor predicate reproduces the worked examples", "[bisection]") {
  const VertexId x0 = 0, x1 = 1, x2 = 2, x3 = 3, y = 7, z = 8;

  SECTION("consistent relative order but differing in every position: not neighbors") {
    const TaggedPentatope t{{x0, x1, x2, x3, y}, 1};
    const TaggedPentatope u{{z, x0, x1, x2, x3}, 1};
    REQUIRE_FALSE(reflected_neighbors(t, u));
    REQUIRE_FALSE(reflected_neighbors(u, t));
  }
  SECTION("differing from the reflection only in the second position: neighbors") {
    const TaggedPentatope t{{x0, z, x1, x2, x3}, 1};
    const TaggedPentatope u{{x3, y, x2, x1, x0}, 1};
    REQUIRE(reflected_neighbors(t, u));
    REQUIRE(reflected_neighbors(u, t));
  }
  SECTION("equal types are required") {
    const TaggedPentatope t{{x0, z, x1, x2, x3}, 1};
    const TaggedPentatope u{{x3, y, x2, x1, x0}, 2};
    REQUIRE_FALSE(reflected_neighbors(t, u));
  }
  SECTION("identical tags share five ids, not a hyperface") {
    const TaggedPentatope t{{x0, x1, x2, x3, y}, 1};
    REQUIRE_FALSE(reflected_neighbors(t, t));
  }
}

TEST_CASE("reflected_neighbors is symmetric", "[bisection]") {
  std::mt19937 rng(31337);
  std::uniform_int_distribution<int> type_dist(0, 3);
  std::uniform_int_distribution<VertexId> id_dist(0, 9);
  int positives = 0;
  for (int trial = 0; trial < 4000; ++trial) {
    auto draw = [&]() {
      std::array<VertexId, 5> ids{};
      while (true) {
        for (auto& v : ids) v = id_dist(rng);
        auto s = ids;
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) == s.end()) return ids;
      }
    };
    const TaggedPentatope t{draw(), static_cast<std::uint8_t>(type_dist(rng))};
    const TaggedPentatope u{draw(), static_cast<std::uint8_t>(type_dist(rng))};
    const bool ab = reflected_neighbors(t, u);
    REQUIRE(ab == reflected_neighbors(u, t));
    positives += ab ? 1 : 0;
  }
  REQUIRE(positives > 0);  // the generator does hit the predicate
}

TEST_CASE("pairwise consistency covers the three structural cases", "[bisection]") {
  SECTION("same prism: consecutive tags are consistent through their children") {
    const PentMesh mesh = reference_prism_mesh();
    for (CellId c = 0; c + 1 < 4; ++c) {
      const auto& t = mesh.cells[c];
      const auto& u = mesh.cells[c + 1];
      // shared hyperface = the 4 common ids
      std::array<VertexId, 5> a = t.sorted_vertices(), b = u.sorted_vertices();
      HyperfaceKey shared{};
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), shared.begin());
      // neither refinement edge lies in the shared hyperface here
      REQUIRE(check_pair_consistent(t, u, shared));
    }
  }
  SECTION("cross slab: the stacked pair is consistent through their children") {
    const PentMesh mesh = reference_prism_mesh({0.0, 1.0, 2.0});
    const auto& t = mesh.cells[3];  // tau_4 of slab 0
    const auto& u = mesh.cells[4];  // tau_1 of slab 1
    REQUIRE(mesh.provenance[3].tau == 4);
    REQUIRE(mesh.provenance[4].tau == 1);
    const HyperfaceKey shared{4, 5, 6, 7};
    REQUIRE(check_pair_consistent(t, u, shared));
  }
  SECTION("same slab, different prisms: vertical edge in the face, direct neighbors") {
    const TetMesh pair = TetMesh::create(
        {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}}, {{0, 1, 2, 3}, {1, 2, 3, 4}});
    // A proper coloring: shared face {1,2,3} gets three colors, the two
    // opposite vertices 0 and 4 both get the remaining color.
    const ColorAssignment colors{ColorLabel::A, ColorLabel::B, ColorLabel::C, ColorLabel::D,
                                 ColorLabel::A};
    const PentMesh mesh = extrude_subdivide(pair, colors, TimeSlices::create({0.0, 1.0}));
    std::size_t cross_prism_pairs = 0;
    for (const auto& [face, cells] : build_hyperface_adjacency(mesh)) {
      if (cells.size() != 2) continue;
      if (mesh.provenance[cells[0]].root_tet == mesh.provenance[cells[1]].root_tet) continue;
      ++cross_prism_pairs;
      const auto& t = mesh.cells[cells[0]];
      const auto& u = mesh.cells[cells[1]];
      // Clause 1 must be the active clause: a refinement edge lies in the face.
      const bool t_edge_in =
          std::binary_search(face.begin(), face.end(), t.v[0]) &&
          std::binary_search(face.begin(), face.end(), t.v[4]);
      const bool u_edge_in =
          std::binary_search(face.begin(), face.end(), u.v[0]) &&
          std::binary_search(face.begin(), face.end(), u.v[4]);
      REQUIRE((t_edge_in || u_edge_in));
      REQUIRE(reflected_neighbors(t, u));
      REQUIRE(check_pair_consistent(t, u, face));
    }
    REQUIRE(cross_prism_pairs > 0);
  }
}

TEST_CASE("mesh-wide consistent tagging on extrusion outputs", "[bisection]") {
  struct Case {
    TetMesh mesh;
    ColorAssignment colors;
  };
  std::vector<Case> cases;
  cases.push_back({make_single_tet(), kReferenceColors});
  cases.push_back({make_kuhn_cube(), oracle::kuhn_grid_coloring(1)});
  cases.push_back({make_kuhn_grid(2), oracle::kuhn_grid_coloring(2)});
  for (const auto& [tet, colors] : cases) {
    const PentMesh mesh = extrude_subdivide(tet, colors, TimeSlices::create({0.0, 0.5, 1.0}));
    const TaggingReport report = check_consistent_tagging(mesh);
    REQUIRE(report.pass());
    REQUIRE(report.pairs_checked > 0);
  }
}

TEST_CASE("a scrambled tag breaks consistency and is reported", "[bisection]") {
  PentMesh mesh = extrude_subdivide(make_kuhn_cube(), oracle::kuhn_grid_coloring(1),
                                    TimeSlices::create({0.0, 1.0}));
  REQUIRE(check_consistent_tagging(mesh).pass());
  std::swap(mesh.cells[5].v[0], mesh.cells[5].v[1]);
  const TaggingReport report = check_consistent_tagging(mesh);
  REQUIRE_FALSE(report.pass());
  bool cell5_listed = false;
  for (const auto& v : report.violations) cell5_listed |= v.a == 5 || v.b == 5;
  REQUIRE(cell5_listed);
}

TEST_CASE("an isolated pentatope is vacuously consistent", "[bisection]") {
  PentMesh mesh;
  mesh.vertices = {{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  mesh.cells = {{{0, 1, 2, 3, 4}, 0}};
  mesh.provenance.resize(1);
  REQUIRE(check_consistent_tagging(mesh).pass());
}

TEST_CASE("refine with no marks is the identity", "[bisection]") {
  const PentMesh mesh = reference_prism_mesh();
  const PentMesh out = refine(mesh, {});
  REQUIRE(out.cells == mesh.cells);
  REQUIRE(out.vertices == mesh.vertices);
}

TEST_CASE("uniform refinement doubles the cell count and conforms", "[bisection]") {
  PentMesh mesh = extrude_subdivide(make_kuhn_cube(), oracle::kuhn_grid_coloring(1),
                                    TimeSlices::create({0.0, 1.0}));
  const double measure = total_measure(mesh);
  std::size_t expected = mesh.cell_count();
  for (int round = 0; round < 3; ++round) {
    mesh = refine_uniform(mesh);
    expected *= 2;
    REQUIRE(mesh.cell_count() == expected);
    REQUIRE(check_conforming(mesh).pass());
    REQUIRE(total_measure(mesh) == Approx(measure).epsilon(1e-10));
  }
}

TEST_CASE("uniform refinement preserves consistent tagging", "[bisection]") {
  PentMesh mesh = extrude_subdivide(make_kuhn_cube(), oracle::kuhn_grid_coloring(1),
                                    TimeSlices::create({0.0, 1.0}));
  for (int round = 0; round < 4; ++round) {
    mesh = refine_uniform(mesh);
    REQUIRE(check_consistent_tagging(mesh).pass());
  }
}

TEST_CASE("types cycle back to zero after four uniform rounds", "[bisection]") {
  PentMesh mesh = reference_prism_mesh();
  for (int round = 1; round <= 4; ++round) {
    mesh = refine_uniform(mesh);
    for (const auto& cell : mesh.cells) REQUIRE(cell.type == round % 4);
    for (const auto& prov : mesh.provenance) {
      REQUIRE(prov.kind == Provenance::Kind::bisected);
      REQUIRE(prov.generation == static_cast<std::uint32_t>(round));
    }
  }
}

TEST_CASE("marking one cell refines exactly its refinement-edge patch", "[bisection]") {
  const PentMesh mesh = reference_prism_mesh();
  for (CellId marked = 0; marked < 4; ++marked) {
    // Oracle: cells sharing the marked cell's refinement edge, found by
    // brute-force scan.
    const EdgeKey edge = mesh.cells[marked].refinement_edge();
    std::set<CellId> expected_bisected;
    for (CellId c = 0; c < mesh.cell_count(); ++c) {
      const auto& v = mesh.cells[c].v;
      const bool has_a = std::find(v.begin(), v.end(), edge.first) != v.end();
      const bool has_b = std::find(v.begin(), v.end(), edge.second) != v.end();
      if (has_a && has_b) expected_bisected.insert(c);
    }

    const PentMesh out = refine(mesh, {marked});
    REQUIRE(out.cell_count() == mesh.cell_count() + expected_bisected.size());
    REQUIRE(check_conforming(out).pass());

    // Surviving generation-0 cells are exactly the non-patch cells.
    std::set<std::array<VertexId, 5>> survivors;
    for (CellId c = 0; c < out.cell_count(); ++c) {
      if (out.provenance[c].generation == 0) survivors.insert(out.cells[c].sorted_vertices());
    }
    for (CellId c = 0; c < mesh.cell_count(); ++c) {
      const bool survived = survivors.contains(mesh.cells[c].sorted_vertices());
      REQUIRE(survived == !expected_bisected.contains(c));
    }
  }
}

TEST_CASE("random marking rounds keep the mesh conforming and conserve measure", "[bisection]") {
  PentMesh mesh = extrude_subdivide(make_kuhn_cube(), oracle::kuhn_grid_coloring(1),
                                    TimeSlices::create({0.0, 1.0}));
  const double measure = total_measure(mesh);
  std::mt19937 rng(5150);
  for (int round = 0; round < 4; ++round) {
    std::vector<CellId> all(mesh.cell_count());
    for (CellId c = 0; c < mesh.cell_count(); ++c) all[c] = c;
    std::vector<CellId> marked;
    std::sample(all.begin(), all.end(), std::back_inserter(marked),
                std::max<std::size_t>(1, mesh.cell_count() / 5), rng);
    mesh = refine(mesh, marked);
    REQUIRE(check_conforming(mesh).pass());
    REQUIRE(total_measure(mesh) == Approx(measure).epsilon(1e-10));
    REQUIRE(check_conforming(mesh).violations.empty());
  }
  // Provenance roots survive through the generations.
  for (const auto& prov : mesh.provenance) {
    REQUIRE(prov.root_tet != kInvalidCell);
    REQUIRE((prov.tau >= 1 && prov.tau <= 4));
  }
}

TEST_CASE("refinement is deterministic", "[bisection]") {
  const PentMesh mesh = extrude_subdivide(make_kuhn_cube(), oracle::kuhn_grid_coloring(1),
                                          TimeSlices::create({0.0, 1.0}));
  const std::vector<CellId> marked{3, 11, 17};
  const PentMesh a = refine(mesh, marked);
  const PentMesh b = refine(mesh, marked);
  REQUIRE(a.cells == b.cells);
  REQUIRE(a.vertices == b.vertices);
}

TEST_CASE("marked ids outside the mesh are rejected", "[bisection]") {
  const PentMesh mesh = reference_prism_mesh();
  REQUIRE_THROWS_AS(refine(mesh, {99}), Error);
}

TEST_CASE("the congruence-class census under uniform bisection is finite", "[bisection]") {
  // Sorted edge-length multisets normalized by measure^(1/4) distinguish
  // similarity classes. With the extruded single-tet start the cumulative
  // census stabilizes (at 348 classes, from round 10 on); the per-round
  // shape sets become 4-periodic once the census is complete.
  PentMesh mesh = reference_prism_mesh();

  using Signature = std::array<long long, 10>;
  auto signatures = [](const PentMesh& m) {
    std::set<Signature> out;
    for (CellId cell = 0; cell < m.cell_count(); ++cell) {
      const auto& v = m.cells[cell].v;
      const double measure = pent_measure(m.vertices[v[0]], m.vertices[v[1]], m.vertices[v[2]],
                                          m.vertices[v[3]], m.vertices[v[4]]);
      const double scale = std::pow(measure, 0.25);
      Signature sig{};
      int k = 0;
      for (int i = 0; i < 5; ++i) {
        for (int j = i + 1; j < 5; ++j) {
          double d2 = 0.0;
          for (int a = 0; a < 4; ++a) {
            const double diff = m.vertices[v[i]][a] - m.vertices[v[j]][a];
            d2 += diff * diff;
          }
          sig[k++] = std::llround(std::sqrt(d2) / scale * 1e9);
        }
      }
      std::sort(sig.begin(), sig.end());
      out.insert(sig);
    }
    return out;
  };

  std::vector<std::set<Signature>> per_round{signatures(mesh)};
  std::set<Signature> cumulative = per_round[0];
  std::vector<std::size_t> census{cumulative.size()};
  for (int round = 1; round <= 12; ++round) {
    mesh = refine_uniform(mesh);
    per_round.push_back(signatures(mesh));
    cumulative.insert(per_round.back().begin(), per_round.back().end());
    census.push_back(cumulative.size());
  }
  REQUIRE(census[10] == 348);
  REQUIRE(census[11] == census[10]);
  REQUIRE(census[12] == census[10]);
  REQUIRE(per_round[11] == per_round[7]);
  REQUIRE(per_round[12] == per_round[8]);
}

TEST_CASE("inconsistent tagging trips the closure guard", "[bisection]") {
  // Two cells sharing the hyperface {A,P,Q,B}; each one's refinement edge
  // lies inside the other's patch with a different edge, so closure
  // ping-pongs without progress until the recursion guard fires.
  PentMesh mesh;
  mesh.vertices = {{0, 0, 0, 0},  {1, 0, 0, 0}, {0, 1, 0, 0},
                   {0, 0, 1, 0},  {0, 0, 0, 1}, {0, 0, 0, -1}};
  const VertexId A = 0, B = 1, P = 2, Q = 3, R = 4, S = 5;
  mesh.cells = {{{A, P, Q, R, B}, 0},   // refinement edge (A,B)
                {{P, A, B, S, Q}, 0}};  // refinement edge (P,Q)
  mesh.provenance.resize(2);
  REQUIRE_FALSE(check_consistent_tagging(mesh).pass());
  REQUIRE_THROWS_AS(refine(mesh, {0}), PreconditionError);
}
