#include "doctest.h"

#include <map>
#include <random>

#include "support/oracles.hpp"
#include "twd/expander.hpp"

using namespace twd;

TEST_CASE("cut_matching_game basics") {
  SUBCASE("n=2, one round is a single edge") {
    auto w = cut_matching_game(2, 1, 0);
    CHECK(w.graph.num_edges() == 1);
    CHECK(w.expansion == Rat(1, 1));
  }
  SUBCASE("n=4, four rounds: every vertex has degree 4") {
    auto w = cut_matching_game(4, 4, 0);
    CHECK(w.graph.num_vertices() == 4);
    CHECK(w.graph.num_edges() == 8);
    for (VertexId v : w.graph.vertex_ids()) CHECK(w.graph.degree(v) == 4);
  }
  SUBCASE("n=16, 16 rounds reaches expansion >= 1/2 on most seeds") {
    int good = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
      auto w = cut_matching_game(16, 16, s);
      REQUIRE(w.verification == ExpanderWitness::Verification::exhaustive);
      if (Rat(1, 2) <= w.expansion) ++good;
    }
    CHECK(good >= 9);
  }
  SUBCASE("bad oracle raises a protocol error") {
    MatchingOracle bad = [](const std::vector<VertexId> &y,
                            const std::vector<VertexId> &) {
      Matching m;
      for (std::size_t i = 0; i + 1 < y.size(); i += 2)
        m.emplace_back(y[i], y[i + 1]);  // inside one half
      m.emplace_back(y[0], y[1]);
      return m;
    };
    CHECK_THROWS_AS(cut_matching_game(8, 2, 0, bad), ProtocolError);
  }
  SUBCASE("odd n rejected") {
    CHECK_THROWS_AS(cut_matching_game(5, 2, 0), PreconditionError);
  }
}

TEST_CASE("build_small_expander") {
  SUBCASE("n=4 gives K4") {
    auto w = build_small_expander(4, Rat(1, 1), 0);
    CHECK(w.graph.num_vertices() == 4);
    CHECK(Rat(1, 1) <= w.expansion);
  }
  SUBCASE("n=10 at target 1/5 verifies exhaustively") {
    auto w = build_small_expander(10, Rat(1, 5), 1);
    CHECK(w.verification == ExpanderWitness::Verification::exhaustive);
    CHECK(Rat(1, 5) <= w.expansion);
    auto [ex, side] = exact_edge_expansion(w.graph);
    CHECK(ex == w.expansion);
  }
  SUBCASE("n=200 at target 1/10 verifies spectrally") {
    auto w = build_small_expander(200, Rat(1, 10), 2);
    CHECK(w.verification == ExpanderWitness::Verification::spectral);
    CHECK(Rat(1, 10) <= w.expansion);
    CHECK(w.graph.max_degree() <= 3);
  }
}

TEST_CASE("split_vertices") {
  SUBCASE("C4 unchanged") {
    auto r = split_vertices(make_cycle(4), 0);
    CHECK(r.graph == make_cycle(4));
  }
  SUBCASE("degree-6 star center becomes a 6-vertex expander") {
    Graph star = Graph::from_edges(
        {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {0, 6}});
    auto r = split_vertices(star, 0);
    CHECK(r.graph.num_vertices() == 12);  // 6 leaves + 6 expander vertices
    CHECK(r.graph.max_degree() <= 4);
    for (auto &[v, members] : r.mapping)
      if (v == 0) CHECK(members.size() == 6);
  }
  SUBCASE("inter-vertex edges appear exactly once") {
    std::mt19937_64 rng(61);
    for (int it = 0; it < 20; ++it) {
      Graph g = oracle::random_connected_graph(9, 0.5, rng);
      auto r = split_vertices(g, it);
      CHECK(r.edge_images.size() == g.num_edges());
      CHECK(r.graph.max_degree() <= 4);
      for (auto &[v, members] : r.mapping)
        if (members.size() > 1)
          CHECK(members.size() == static_cast<std::size_t>(g.degree(v)));
      auto sorted = r.graph.sorted_edges();
      for (const Edge &e : r.edge_images)
        CHECK(std::binary_search(sorted.begin(), sorted.end(), e));
    }
  }
}

TEST_CASE("route_matchings_short_paths") {
  SUBCASE("K4 direct edges") {
    ExpanderWitness host;
    host.graph = make_complete(4);
    host.expansion = exact_edge_expansion(host.graph).first;
    Matching m{{0, 1}, {2, 3}};
    auto emb = route_matchings_short_paths(host, {m}, RoutingCaps{}, 0);
    CHECK(emb.max_length == 1);
    CHECK(emb.edge_congestion == 1);
    CHECK(emb.within_caps);
  }
  SUBCASE("C6 antipodal pairs route with congestion <= 3") {
    ExpanderWitness host;
    host.graph = make_cycle(6);
    host.expansion = exact_edge_expansion(host.graph).first;
    Matching m{{0, 3}, {1, 4}, {2, 5}};
    auto emb = route_matchings_short_paths(host, {m}, RoutingCaps{}, 0);
    CHECK(emb.edge_congestion <= 3);
    for (auto &[e, p] : emb.paths) {
      CHECK(p.front() == e.u);
      CHECK(p.back() == e.v);
    }
  }
  SUBCASE("cut-matching host carries 5 random matchings within caps") {
    auto host = cut_matching_game(16, 16, 3);
    std::mt19937_64 rng(62);
    std::vector<Matching> ms;
    for (int j = 0; j < 5; ++j) {
      std::vector<VertexId> perm(16);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      Matching m;
      for (int i = 0; i < 16; i += 2) m.emplace_back(perm[i], perm[i + 1]);
      ms.push_back(m);
    }
    auto emb = route_matchings_short_paths(host, ms, RoutingCaps{}, 4);
    CHECK(emb.within_caps);
    std::map<Edge, int> load;
    int maxlen = 0;
    for (auto &[e, p] : emb.paths) {
      maxlen = std::max(maxlen, static_cast<int>(p.size()) - 1);
      for (std::size_t i = 0; i + 1 < p.size(); ++i) load[Edge(p[i], p[i + 1])]++;
    }
    int cong = 0;
    for (auto &[e, l] : load) cong = std::max(cong, l);
    CHECK(cong == emb.edge_congestion);
    CHECK(maxlen == emb.max_length);
  }
}

TEST_CASE("reduce_degree") {
  SolverConfig cfg;
  SUBCASE("K8 with X = V: degree stays within 2*rounds") {
    Graph g = make_complete(8);
    WellLinkedCertificate cert;
    cert.host = g.vertex_set();
    cert.terminal_set = g.vertex_set();
    cert.alpha = Rat(1, 1);
    auto r = reduce_degree(g, cert, 4, cfg);
    CHECK(r.vertex_cap == 1);
    CHECK(r.reduced.max_degree() <= 8);
    CHECK(r.max_observed_round_congestion <= 1);
    CHECK(r.witness_over_x.graph.num_edges() == 4 * 4);
  }
  SUBCASE("zero rounds gives an empty subgraph") {
    Graph g = make_complete(6);
    WellLinkedCertificate cert;
    cert.host = g.vertex_set();
    cert.terminal_set = g.vertex_set();
    cert.alpha = Rat(1, 1);
    auto r = reduce_degree(g, cert, 0, cfg);
    CHECK(r.reduced.num_edges() == 0);
  }
  SUBCASE("6x6 grid: reduced subgraph keeps a cycle") {
    // the certificate's edge form may miss the 1/alpha vertex-congestion
    // routing; escalate the cap the way the pipeline does
    Graph g = make_grid(6, 6);
    auto cert = find_well_linked_set(g, cfg);
    int rounds = 4;
    DegreeReduction r;
    int cap = 0;
    for (;; cap = std::max(1, 2 * cap)) {
      try {
        r = reduce_degree(g, cert, rounds, cfg, cap);
        break;
      } catch (const Error &) {
        REQUIRE(cap < 64);
      }
    }
    CHECK(r.reduced.max_degree() <= 2 * rounds * r.vertex_cap);
    bool has_cycle =
        r.reduced.num_edges() >= r.reduced.num_vertices() -
                                     r.reduced.connected_components().size() + 1;
    CHECK(has_cycle);
  }
  SUBCASE("overstated alpha fails the round flow") {
    Graph g = make_path(6);
    WellLinkedCertificate cert;
    cert.host = g.vertex_set();
    cert.terminal_set = g.vertex_set();
    cert.alpha = Rat(1, 1);  // overstated: P6 is not 1-well-linked
    CHECK_THROWS_AS(reduce_degree(g, cert, 2, cfg), Error);
  }
}
