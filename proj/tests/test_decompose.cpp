#include "doctest.h"

#include <random>

#include "support/oracles.hpp"
#include "twd/decompose.hpp"

using namespace twd;

TEST_CASE("certify_tw_at_least and replay") {
  SolverConfig cfg;
  SUBCASE("small exact certificates") {
    Graph k5 = make_complete(5);
    auto c = certify_tw_at_least(k5, k5.vertex_set(), 4, cfg);
    REQUIRE(c.has_value());
    CHECK(c->bound == 4);
    CHECK(replay_certificate(k5, *c));
  }
  SUBCASE("cycle certificates on large graphs") {
    Graph g = make_grid(8, 8);
    auto c = certify_tw_at_least(g, g.vertex_set(), 2, cfg);
    REQUIRE(c.has_value());
    CHECK(c->kind == TwCertificate::Kind::cycle);
    CHECK(replay_certificate(g, *c));
  }
  SUBCASE("forests cannot be certified at r=2") {
    std::mt19937_64 rng(81);
    Graph t = oracle::random_tree(30, rng);
    CHECK(!certify_tw_at_least(t, t.vertex_set(), 2, cfg).has_value());
  }
  SUBCASE("tampered certificates fail replay") {
    Graph g = make_grid(8, 8);
    auto c = certify_tw_at_least(g, g.vertex_set(), 2, cfg);
    REQUIRE(c.has_value());
    auto bad = *c;
    // cycle with a vertex swapped for a non-adjacent one
    REQUIRE(bad.witness_cycle.size() >= 3);
    bad.witness_cycle[0] = 63;
    bad.witness_cycle[1] = 0;
    CHECK(!replay_certificate(g, bad));
  }
}

TEST_CASE("preprocess") {
  PipelineConfig cfg;
  SUBCASE("low-degree graphs pass through with a measured alpha") {
    Graph g = make_grid(4, 4);
    auto pre = preprocess(g, cfg);
    CHECK(!pre.degree_reduced);
    CHECK(pre.working == g);
    CHECK(pre.terminals.alpha.num > 0);
  }
  SUBCASE("8x8 grid keeps a usable terminal set") {
    Graph g = make_grid(8, 8);
    auto pre = preprocess(g, cfg);
    CHECK(pre.max_degree <= 4);
    CHECK(pre.terminals.terminal_set.size() >= 8);
    CHECK(pre.terminals.verification ==
          WellLinkedCertificate::Verification::exhaustive);
  }
  SUBCASE("K12 keeps at least half the clique at alpha 1") {
    Graph g = make_complete(12);
    auto pre = preprocess(g, cfg);
    CHECK(pre.terminals.terminal_set.size() >= 6);
    CHECK(pre.terminals.alpha == Rat(1, 1));
  }
}

TEST_CASE("iteration_thm1 either succeeds or strictly drops phi") {
  PipelineConfig cfg;
  Graph g = make_grid(6, 6);
  auto pre = preprocess(g, cfg);
  Clustering c = singleton_clustering(pre.working, Clustering::Mode::thm1);
  long long phi = c.phi();
  for (int it = 0; it < 40; ++it) {
    auto step = iteration_thm1(pre.working, pre, c, 2, 2, cfg);
    CHECK(step.result.has_value() != step.next.has_value());
    if (step.result) {
      CHECK(step.result->subgraphs.size() == 2);
      return;
    }
    CHECK(step.next->phi() <= phi - 1);
    phi = step.next->phi();
    c = std::move(*step.next);
  }
  CHECK(false);  // neither success nor exhaustion within the budget
}

TEST_CASE("case1 on a two-community graph") {
  // two K8 blobs plus one bridge: the balanced split severs the bridge
  std::vector<std::pair<VertexId, VertexId>> es;
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) {
      es.push_back({i, j});
      es.push_back({8 + i, 8 + j});
    }
  es.push_back({0, 8});
  Graph g = Graph::from_edges(es);
  PipelineConfig cfg;
  auto res = decompose_thm1(g, 2, 2, cfg);
  CHECK(res.subgraphs.size() == 2);
  for (const auto &c : res.certificates) CHECK(c.bound >= 2);
}

TEST_CASE("case2 packs an expander host") {
  PipelineConfig cfg;
  auto host = cut_matching_game(64, 36, 5);
  Graph g = host.graph;
  auto pre = preprocess(g, cfg);
  Clustering c = singleton_clustering(pre.working, Clustering::Mode::thm1);
  auto out = case2_expander_pack(pre.working, pre, c, 2, 2, cfg);
  REQUIRE(out.result.has_value());
  CHECK(out.result->subgraphs.size() == 2);
  CHECK(out.result->subgraphs[0].intersect(out.result->subgraphs[1]).empty());
}

TEST_CASE("case2 re-clusters a small surviving part") {
  // disconnected working graph: the K4 component decomposes into its own
  // conductance part, stays below the 2r' floor and holds no terminal
  // majority, so the branch contracts it and phi drops
  std::vector<std::pair<VertexId, VertexId>> es;
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) es.push_back({i, j});  // K8
  for (int i = 8; i < 12; ++i)
    for (int j = i + 1; j < 12; ++j) es.push_back({i, j});  // K4, detached
  Graph g = Graph::from_edges(es);
  PipelineConfig cfg;
  cfg.r_prime_override = 64;
  Preprocessed pre;
  pre.working = g;
  pre.max_degree = g.max_degree();
  pre.terminals.host = VertexSet{0, 1, 2, 3, 4, 5, 6, 7};
  pre.terminals.terminal_set = pre.terminals.host;  // K8 is 1-well-linked
  pre.terminals.alpha = Rat(1, 1);
  Clustering c = singleton_clustering(g, Clustering::Mode::thm1);
  auto out = case2_expander_pack(g, pre, c, 2, 2, cfg);
  REQUIRE(out.next.has_value());
  CHECK(out.next->phi() < c.phi());
  CHECK(out.next->phi() == c.phi() - 6);  // the K4's six internal edges
}

TEST_CASE("case2 with a single part and one extraction") {
  PipelineConfig cfg;
  auto host = cut_matching_game(32, 25, 9);
  auto pre = preprocess(host.graph, cfg);
  Clustering c = singleton_clustering(pre.working, Clustering::Mode::thm1);
  auto out = case2_expander_pack(pre.working, pre, c, 1, 2, cfg);
  REQUIRE(out.result.has_value());
  CHECK(out.result->subgraphs.size() == 1);
  CHECK(out.result->certificates[0].bound >= 2);
}

TEST_CASE("case dispatch rules all lead to a certified result") {
  Graph g = make_grid(2, 60);  // long thin grid: tiny terminal set
  for (auto rule : {PipelineConfig::CaseRule::auto_conductance,
                    PipelineConfig::CaseRule::beta_k2,
                    PipelineConfig::CaseRule::n_at_least_k5}) {
    PipelineConfig cfg;
    cfg.case_rule = rule;
    auto res = decompose_thm1(g, 2, 1, cfg);
    CHECK(res.subgraphs.size() == 2);
    for (const auto &cert : res.certificates) CHECK(cert.bound >= 1);
  }
}

TEST_CASE("embed_expander_witness") {
  PipelineConfig cfg;
  SUBCASE("K12 part yields a certified subgraph") {
    Graph g = make_complete(12);
    auto c = singleton_clustering(g, Clustering::Mode::thm1);
    auto emb = embed_expander_witness(g, c.contracted, c.contracted.graph, 2, cfg);
    CHECK(emb.certificate.bound >= 2);
    CHECK(replay_certificate(g, emb.certificate));
    CHECK(!emb.supernodes.empty());
  }
  SUBCASE("oversized r'' is a precondition error") {
    Graph g = make_complete(6);
    auto c = singleton_clustering(g, Clustering::Mode::thm1);
    PipelineConfig big = cfg;
    big.r_dprime_override = 100;
    CHECK_THROWS_AS(
        embed_expander_witness(g, c.contracted, c.contracted.graph, 2, big),
        PreconditionError);
  }
}

TEST_CASE("decompose_thm1 end to end") {
  PipelineConfig cfg;
  SUBCASE("8x8 grid into two certified subgraphs") {
    Graph g = make_grid(8, 8);
    auto res = decompose_thm1(g, 2, 2, cfg);
    CHECK(res.subgraphs.size() == 2);
    for (std::size_t i = 0; i < res.subgraphs.size(); ++i) {
      CHECK(replay_certificate(g, res.certificates[i]));
      CHECK(res.certificates[i].bound >= 2);
    }
    // phi history strictly decreases wherever it moves
    for (std::size_t i = 1; i < res.trace.phi_history.size(); ++i)
      CHECK(res.trace.phi_history[i] < res.trace.phi_history[i - 1]);
  }
  SUBCASE("h=1 certifies the whole graph") {
    Graph g = make_grid(4, 4);
    auto res = decompose_thm1(g, 1, 2, cfg);
    REQUIRE(res.subgraphs.size() == 1);
    CHECK(res.subgraphs[0] == g.vertex_set());
  }
  SUBCASE("absurd parameters hit the feasibility gate") {
    Graph g = make_grid(4, 4);
    CHECK_THROWS_AS(decompose_thm1(g, 50, 10, cfg), ParameterError);
    CHECK_THROWS_AS(decompose_thm1(g, 0, 2, cfg), ParameterError);
  }
}

TEST_CASE("decompose_thm2 end to end") {
  PipelineConfig cfg;
  SUBCASE("dense random graph splits into two certified parts") {
    std::mt19937_64 rng(91);
    Graph g = oracle::random_connected_graph(40, 0.3, rng);
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      PipelineConfig c2 = cfg;
      c2.seed = seed;
      try {
        auto res = decompose_thm2(g, 2, 2, c2);
        CHECK(res.subgraphs.size() == 2);
        CHECK(res.subgraphs[0].intersect(res.subgraphs[1]).empty());
        for (const auto &cert : res.certificates)
          CHECK(replay_certificate(g, cert));
        ++ok;
      } catch (const PipelineError &) {
      }
    }
    CHECK(ok >= 2);
  }
  SUBCASE("random partition checks reject bad samples and resample") {
    // tiny h relative to a sparse graph forces some rejected samples
    Graph g = make_grid(5, 4);
    RunTrace trace;
    try {
      auto res = decompose_thm2(g, 2, 2, cfg, &trace);
      (void)res;
    } catch (const PipelineError &) {
    }
    CHECK(trace.resamples >= 1);
  }
  SUBCASE("phi strictly decreases on every thm2 re-cluster") {
    std::mt19937_64 rng(93);
    Graph g = oracle::random_connected_graph(24, 0.18, rng);
    RunTrace trace;
    try {
      auto res = decompose_thm2(g, 2, 2, cfg, &trace);
      (void)res;
    } catch (const PipelineError &) {
    }
    for (std::size_t i = 1; i < trace.phi_history.size(); ++i)
      CHECK(trace.phi_history[i] < trace.phi_history[i - 1]);
  }
}

TEST_CASE("determinism: same seed, same subgraphs") {
  PipelineConfig cfg;
  cfg.seed = 7;
  Graph g = make_grid(6, 6);
  auto a = decompose_thm1(g, 2, 2, cfg);
  auto b = decompose_thm1(g, 2, 2, cfg);
  REQUIRE(a.subgraphs.size() == b.subgraphs.size());
  for (std::size_t i = 0; i < a.subgraphs.size(); ++i)
    CHECK(a.subgraphs[i] == b.subgraphs[i]);
  CHECK(a.trace.phi_history == b.trace.phi_history);
}
