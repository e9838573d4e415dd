#include "doctest.h"

#include <random>

#include "support/oracles.hpp"
#include "twd/cuts.hpp"
#include "twd/graph.hpp"

using namespace twd;

namespace {

Graph two_triangles_bridge() {
  // {0,1,2} triangle, {3,4,5} triangle, bridge 2-3
  return Graph::from_edges({{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}, {2, 3}});
}

}  // namespace

TEST_CASE("sparsest_cut exact examples") {
  SolverConfig cfg;

  SUBCASE("two triangles joined by a bridge") {
    Graph g = two_triangles_bridge();
    Cut c = sparsest_cut(g, g.vertex_set(), cfg);
    REQUIRE(c.sparsity.has_value());
    CHECK(*c.sparsity == Rat(1, 3));
    CHECK(c.exact);
  }
  SUBCASE("single edge") {
    Graph g = Graph::from_edges({{0, 1}});
    Cut c = sparsest_cut(g, g.vertex_set(), cfg);
    CHECK(*c.sparsity == Rat(1, 1));
  }
  SUBCASE("K4 with all terminals") {
    Graph g = make_complete(4);
    Cut c = sparsest_cut(g, g.vertex_set(), cfg);
    CHECK(*c.sparsity == Rat(2, 1));
    CHECK(c.crossing == 4);
  }
  SUBCASE("fewer than 2 vertices is a domain error") {
    Graph g(std::vector<VertexId>{0}, {});
    CHECK_THROWS_AS(sparsest_cut(g, VertexSet{0}, cfg), Error);
  }
}

TEST_CASE("min_conductance_cut examples") {
  SolverConfig cfg;

  SUBCASE("two triangles joined by a bridge") {
    Graph g = two_triangles_bridge();
    auto c = min_conductance_cut(g, cfg);
    REQUIRE(c.has_value());
    CHECK(*c->conductance == Rat(1, 3));
  }
  SUBCASE("disconnected graph with edges on both sides") {
    Graph g = Graph::from_edges({{0, 1}, {2, 3}});
    auto c = min_conductance_cut(g, cfg);
    REQUIRE(c.has_value());
    CHECK(*c->conductance == Rat(0, 1));
  }
  SUBCASE("C6") {
    auto c = min_conductance_cut(make_cycle(6), cfg);
    REQUIRE(c.has_value());
    CHECK(*c->conductance == Rat(1, 1));
  }
  SUBCASE("all cuts degenerate") {
    // star: any side without the center has no internal edges
    Graph star = Graph::from_edges({{0, 1}, {0, 2}, {0, 3}});
    auto c = min_conductance_cut(star, cfg);
    CHECK(!c.has_value());
  }
}

TEST_CASE("balanced_cut examples") {
  SolverConfig cfg;

  SUBCASE("K4, Z=V, gamma=1/4") {
    // gamma * |Z| = 1, so a 1|3 split is already balanced; enumeration
    // gives crossing 3, not the 2|2 value 4
    Graph g = make_complete(4);
    Cut c = balanced_cut(g, g.vertex_set(), g.vertex_set(), cfg);
    CHECK(c.crossing == 3);
    CHECK(std::min(c.side_a.size(), c.side_b.size()) >= 1);
  }
  SUBCASE("two triangles + bridge") {
    Graph g = two_triangles_bridge();
    Cut c = balanced_cut(g, g.vertex_set(), g.vertex_set(), cfg);
    CHECK(c.crossing == 1);
  }
  SUBCASE("P8") {
    Graph g = make_path(8);
    Cut c = balanced_cut(g, g.vertex_set(), g.vertex_set(), cfg);
    CHECK(c.crossing == 1);
    CHECK(std::min(c.side_a.size(), c.side_b.size()) >= 2);
  }
  SUBCASE("balance floor") {
    Graph g = make_path(8);
    CHECK_THROWS_AS(balanced_cut(g, g.vertex_set(), VertexSet{0}, cfg),
                    PreconditionError);
  }
}

TEST_CASE("exact sparsest cut matches brute force on random graphs") {
  std::mt19937_64 rng(21);
  SolverConfig cfg;
  int done = 0;
  while (done < 60) {
    std::uniform_int_distribution<int> sz(2, 12);
    Graph g = oracle::random_graph(sz(rng), 0.45, rng);
    if (g.num_edges() == 0) continue;
    auto brute = oracle::brute_sparsity(g, g.vertex_set());
    if (!brute) continue;
    Cut c = sparsest_cut(g, g.vertex_set(), cfg);
    REQUIRE(c.sparsity.has_value());
    CHECK(c.sparsity->value() == doctest::Approx(*brute));
    ++done;
  }
}

TEST_CASE("exact conductance matches brute force") {
  std::mt19937_64 rng(22);
  SolverConfig cfg;
  int done = 0;
  while (done < 60) {
    std::uniform_int_distribution<int> sz(3, 12);
    Graph g = oracle::random_graph(sz(rng), 0.5, rng);
    if (g.num_edges() < 2) continue;
    auto brute = oracle::brute_conductance(g);
    auto c = min_conductance_cut(g, cfg);
    if (!brute) {
      CHECK(!c.has_value());
    } else {
      REQUIRE(c.has_value());
      CHECK(c->conductance->value() == doctest::Approx(*brute));
    }
    ++done;
  }
}

TEST_CASE("terminal-split enumeration matches full enumeration") {
  std::mt19937_64 rng(23);
  SolverConfig full;          // full bipartition enumeration
  SolverConfig term;          // force the terminal-split path
  term.exact_limit = 0;
  term.terminal_enum_limit = 10;
  for (int it = 0; it < 25; ++it) {
    Graph g = oracle::random_connected_graph(9, 0.4, rng);
    // terminals: a random subset of size 3..5
    std::vector<VertexId> ids = g.vertex_ids();
    std::shuffle(ids.begin(), ids.end(), rng);
    std::uniform_int_distribution<int> k(3, 5);
    ids.resize(k(rng));
    VertexSet t(ids);
    Cut a = sparsest_cut(g, t, full);
    Cut b = sparsest_cut(g, t, term);
    REQUIRE(a.sparsity.has_value());
    REQUIRE(b.sparsity.has_value());
    CHECK(*a.sparsity == *b.sparsity);
    CHECK(b.exact);
  }
}

TEST_CASE("cut fields are recomputable") {
  std::mt19937_64 rng(24);
  SolverConfig cfg;
  for (int it = 0; it < 30; ++it) {
    Graph g = oracle::random_connected_graph(8, 0.45, rng);
    Cut c = sparsest_cut(g, g.vertex_set(), cfg);
    CutMetrics m = cut_metrics(g, c.side_a, g.vertex_set());
    CHECK(m.crossing == c.crossing);
    CHECK(c.side_a.unite(c.side_b) == g.vertex_set());
    CHECK(c.side_a.intersect(c.side_b).empty());
    REQUIRE(c.sparsity.has_value());
    CHECK(*c.sparsity == Rat(m.crossing, std::min(m.term_a, m.term_b)));
  }
}

TEST_CASE("heuristic cuts are feasible and close on structured graphs") {
  SolverConfig heur;
  heur.mode = SolverConfig::Mode::spectral;

  SUBCASE("grid bisection is found") {
    Graph g = make_grid(4, 8);
    Cut c = sparsest_cut(g, g.vertex_set(), heur);
    REQUIRE(c.sparsity.has_value());
    CHECK(!c.exact);
    CHECK(c.sparsity->value() <= 0.5);  // optimal is 4/16
    CHECK(!c.side_a.empty());
    CHECK(!c.side_b.empty());
  }
  SUBCASE("balanced heuristic cut respects balance") {
    Graph g = make_grid(4, 8);
    Cut c = balanced_cut(g, g.vertex_set(), g.vertex_set(), heur);
    CHECK(std::min(c.side_a.size(), c.side_b.size()) >= 8);  // gamma=1/4 of 32
  }
  SUBCASE("spectral mode finds zero-crossing cuts on disconnected graphs") {
    Graph g = Graph::from_edges({{0, 1}, {1, 2}, {0, 2}, {5, 6}, {6, 7}, {5, 7}});
    SolverConfig cfg;
    cfg.mode = SolverConfig::Mode::spectral;
    auto c = min_conductance_cut(g, cfg);
    REQUIRE(c.has_value());
    CHECK(c->crossing == 0);
  }
  SUBCASE("two communities split at the bottleneck") {
    std::mt19937_64 rng(4);
    // two K8 blobs plus one bridge
    std::vector<std::pair<VertexId, VertexId>> es;
    for (int i = 0; i < 8; ++i)
      for (int j = i + 1; j < 8; ++j) {
        es.push_back({i, j});
        es.push_back({8 + i, 8 + j});
      }
    es.push_back({0, 8});
    Graph g = Graph::from_edges(es);
    SolverConfig cfg;
    cfg.mode = SolverConfig::Mode::spectral;
    auto c = min_conductance_cut(g, cfg);
    REQUIRE(c.has_value());
    CHECK(c->crossing == 1);
  }
}
