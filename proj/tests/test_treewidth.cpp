#include "doctest.h"

#include <random>

#include "support/oracles.hpp"
#include "twd/treewidth.hpp"
#include "twd/well_linked.hpp"

using namespace twd;

TEST_CASE("exact treewidth on known graphs") {
  SUBCASE("grids") {
    for (int g = 2; g <= 4; ++g) {
      auto [w, td] = exact_treewidth(make_grid(g, g));
      CHECK(w == g);
      CHECK(td.valid_for(make_grid(g, g)));
      CHECK(td.width() == g);
    }
  }
  SUBCASE("cliques") {
    for (int n = 2; n <= 8; ++n) {
      auto [w, td] = exact_treewidth(make_complete(n));
      CHECK(w == n - 1);
      CHECK(td.valid_for(make_complete(n)));
    }
  }
  SUBCASE("Petersen graph, DP against branch and bound") {
    std::vector<std::pair<VertexId, VertexId>> es;
    for (int i = 0; i < 5; ++i) {
      es.push_back({i, (i + 1) % 5});          // outer cycle
      es.push_back({5 + i, 5 + (i + 2) % 5});  // inner pentagram
      es.push_back({i, 5 + i});                // spokes
    }
    Graph pet = Graph::from_edges(es);
    auto [w, td] = exact_treewidth(pet);
    CHECK(w == exact_treewidth_bnb(pet));
    CHECK(w == 4);
    CHECK(td.valid_for(pet));
  }
  SUBCASE("too large is a size error") {
    CHECK_THROWS_AS(exact_treewidth(make_grid(5, 5), 18), SizeError);
  }
}

TEST_CASE("DP agrees with branch and bound on a random corpus") {
  std::mt19937_64 rng(41);
  for (int it = 0; it < 500; ++it) {
    std::uniform_int_distribution<int> sz(2, 10);
    std::uniform_real_distribution<double> pr(0.15, 0.7);
    Graph g = oracle::random_graph(sz(rng), pr(rng), rng);
    auto [w, td] = exact_treewidth(g);
    CHECK(w == exact_treewidth_bnb(g));
    CHECK(td.valid_for(g));
    CHECK(td.width() == w);
  }
}

TEST_CASE("upper bound heuristics") {
  SUBCASE("trees eliminate to width 1") {
    std::mt19937_64 rng(42);
    for (int it = 0; it < 20; ++it) {
      Graph t = oracle::random_tree(10, rng);
      auto [w, td] = tw_upper_bound(t, EliminationHeuristic::min_degree);
      CHECK(w == 1);
      CHECK(td.valid_for(t));
    }
  }
  SUBCASE("K6") {
    auto [w, td] = tw_upper_bound(make_complete(6));
    CHECK(w == 5);
    CHECK(td.valid_for(make_complete(6)));
  }
  SUBCASE("4x4 grid vs exact") {
    Graph g = make_grid(4, 4);
    auto [w, td] = tw_upper_bound(g);
    auto [exact, etd] = exact_treewidth(g);
    CHECK(w >= exact);
    CHECK(exact == 4);
    CHECK(td.valid_for(g));
  }
  SUBCASE("large components use the set-based greedy") {
    Graph g = make_grid(12, 12);
    auto [w, td] = tw_upper_bound(g);
    CHECK(w >= 12);
    CHECK(td.valid_for(g));
    auto [w2, td2] = tw_upper_bound(g, EliminationHeuristic::min_degree);
    CHECK(td2.valid_for(g));
  }
  SUBCASE("upper bound is never below exact on random graphs") {
    std::mt19937_64 rng(43);
    for (int it = 0; it < 100; ++it) {
      Graph g = oracle::random_graph(9, 0.4, rng);
      auto [w, td] = tw_upper_bound(g, it % 2 ? EliminationHeuristic::min_degree
                                              : EliminationHeuristic::min_fill);
      CHECK(w >= exact_treewidth(g).first);
      CHECK(td.valid_for(g));
    }
  }
}

TEST_CASE("well-linked lower bound formula") {
  CHECK(tw_lower_bound_from_well_linked(24, Rat(1, 1), 4) == 1);
  CHECK(tw_lower_bound_from_well_linked(9, Rat(1, 3), 3) == 0);
  CHECK(tw_lower_bound_from_well_linked(90, Rat(1, 2), 3) == 4);
  CHECK(tw_lower_bound_from_well_linked(0, Rat(1, 1), 1) == 0);
}

TEST_CASE("certificate bound never exceeds exact treewidth") {
  std::mt19937_64 rng(44);
  SolverConfig cfg;
  for (int it = 0; it < 120; ++it) {
    std::uniform_int_distribution<int> sz(3, 10);
    Graph g = oracle::random_connected_graph(sz(rng), 0.4, rng);
    auto cert = find_well_linked_set(g, cfg);
    REQUIRE(cert.verification == WellLinkedCertificate::Verification::exhaustive);
    Graph host = g.induced(cert.host);
    int bound = tw_lower_bound_from_well_linked(
        static_cast<long long>(cert.terminal_set.size()), cert.alpha,
        std::max(1, host.max_degree()));
    CHECK(bound <= exact_treewidth(g).first);
  }
}

TEST_CASE("node_well_linked_bounds bracket") {
  CHECK(node_well_linked_bounds(3) == std::pair<int, int>(3, 12));
  CHECK(node_well_linked_bounds(0) == std::pair<int, int>(0, 0));

  // Desk-scale calibration: the upper half tw <= 4k holds for the maximum
  // node-well-linked set; the literal lower half fails on small cycles
  // (C5 carries a node-well-linked triple at treewidth 2).
  SolverConfig cfg;
  Graph c5 = make_cycle(5);
  int k_max = 0;
  for (std::uint32_t m = 1; m < (1u << 5); ++m) {
    std::vector<VertexId> ids;
    for (int i = 0; i < 5; ++i)
      if ((m >> i) & 1) ids.push_back(i);
    VertexSet x(ids);
    if (verify_node_well_linked(c5, x, cfg).pass)
      k_max = std::max<int>(k_max, x.size());
  }
  int tw = exact_treewidth(c5).first;
  CHECK(tw == 2);
  CHECK(k_max >= 2);
  CHECK(tw <= node_well_linked_bounds(k_max).second);
}

TEST_CASE("decompose_or_certify") {
  SolverConfig cfg;
  SUBCASE("tree at w=2 decomposes at width 1") {
    std::mt19937_64 rng(45);
    Graph t = oracle::random_tree(12, rng);
    auto r = decompose_or_certify(t, 2, cfg);
    REQUIRE(r.decomposition.has_value());
    CHECK(!r.certificate.has_value());
    CHECK(r.decomposition->width() == 1);
    CHECK(r.decomposition->valid_for(t));
  }
  SUBCASE("K5 at w=2 certifies") {
    auto r = decompose_or_certify(make_complete(5), 2, cfg);
    REQUIRE(r.certificate.has_value());
    CHECK(!r.decomposition.has_value());
    CHECK(r.certificate->bound > 2);
  }
  SUBCASE("5x5 grid at w=3 certifies") {
    SolverConfig big = cfg;
    big.exact_limit = 26;
    auto r = decompose_or_certify(make_grid(5, 5), 3, big);
    REQUIRE(r.certificate.has_value());
    CHECK(r.certificate->bound > 3);
  }
  SUBCASE("witnesses replay") {
    std::mt19937_64 rng(46);
    for (int it = 0; it < 40; ++it) {
      Graph g = oracle::random_connected_graph(9, 0.35, rng);
      std::uniform_int_distribution<int> wd(1, 4);
      int w = wd(rng);
      auto r = decompose_or_certify(g, w, cfg);
      CHECK(r.decomposition.has_value() != r.certificate.has_value());
      if (r.decomposition) {
        CHECK(r.decomposition->valid_for(g));
        CHECK(r.decomposition->width() <= 4 * w);
      } else {
        CHECK(r.certificate->bound > w);
        CHECK(r.certificate->bound <= exact_treewidth(g).first);
      }
    }
  }
}

TEST_CASE("tw_bounds") {
  SolverConfig cfg;
  SUBCASE("small graphs are exact") {
    auto b = tw_bounds(make_complete(6), cfg);
    CHECK(b.lower == 5);
    CHECK(b.upper == 5);
    CHECK(b.lower_witness_kind == "exact");
    CHECK(b.upper_witness->valid_for(make_complete(6)));
  }
  SUBCASE("large graphs bracket the true value") {
    Graph g = make_grid(12, 12);
    auto b = tw_bounds(g, cfg);
    CHECK(b.lower >= 2);
    CHECK(b.lower <= 12);
    CHECK(b.upper >= 12);
    CHECK(b.upper_witness->valid_for(g));
  }
  SUBCASE("bracket holds on a random corpus against exact") {
    std::mt19937_64 rng(47);
    for (int it = 0; it < 40; ++it) {
      Graph g = oracle::random_graph(9, 0.4, rng);
      auto b = tw_bounds(g, cfg);
      int tw = exact_treewidth(g).first;
      CHECK(b.lower <= tw);
      CHECK(tw <= b.upper);
    }
  }
}

TEST_CASE("PACE serialization shape") {
  auto [w, td] = exact_treewidth(make_cycle(4));
  std::string pace = td.to_pace();
  CHECK(pace.find("s td ") == 0);
  CHECK(pace.find("b 1 ") != std::string::npos);
  CHECK(w == 2);
}
