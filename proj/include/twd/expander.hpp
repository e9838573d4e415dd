#pragma once

#include <functional>
#include <map>
#include <optional>

#include "twd/cuts.hpp"
#include "twd/graph.hpp"
#include "twd/well_linked.hpp"

namespace twd {

struct ExpanderWitness {
  enum class Kind { edge_expander, union_of_matchings };
  enum class Verification { exhaustive, spectral };
  Graph graph;
  Kind kind = Kind::edge_expander;
  /// verified edge expansion: min over |X| <= n/2 of |E(X, X̄)| / |X|.
  /// Exhaustive mode stores the true minimum; spectral mode stores the
  /// Cheeger lower bound λ2/2 scaled to the expansion measure.
  Rat expansion{0, 1};
  Verification verification = Verification::exhaustive;
};

/// Exhaustive edge-expansion (min ratio and a worst side); SizeError above
/// the enumeration cap.
std::pair<Rat, VertexSet> exact_edge_expansion(const Graph &g, int exact_limit = 20);

/// Sound spectral lower bound on edge expansion (via λ2 of the normalized
/// Laplacian and minimum degree).
Rat spectral_expansion_lower_bound(const Graph &g, const SolverConfig &cfg);

using Matching = std::vector<std::pair<VertexId, VertexId>>;

/// matching player: receives the two halves, returns a perfect matching
using MatchingOracle =
    std::function<Matching(const std::vector<VertexId> &, const std::vector<VertexId> &)>;

class ProtocolError : public Error {
public:
  explicit ProtocolError(const std::string &msg) : Error(msg) {}
};

/// KRV-style cut-matching game on n vertices (n even). The cut player picks
/// halves by random projection of the lazy-random-walk embedding; the
/// default oracle pairs the halves in sorted order. Expansion of the union
/// is measured post hoc (exhaustive when feasible, spectral otherwise).
ExpanderWitness cut_matching_game(int n, int rounds, std::uint64_t seed,
                                  const MatchingOracle &oracle = nullptr,
                                  int exact_limit = 20);

/// Random (near-)3-regular graph, rebuilt until the verified expansion
/// reaches target_alpha; n < 4 returns the complete graph.
ExpanderWitness build_small_expander(int n, const Rat &target_alpha,
                                     std::uint64_t seed, int retry_budget = 64,
                                     int exact_limit = 20);

struct SplitVerticesResult {
  Graph graph;  // max degree <= 4
  /// original vertex -> its expander's vertices (degree <= 3 vertices map
  /// to themselves)
  std::vector<std::pair<VertexId, VertexSet>> mapping;
  /// original edge (by index in the input graph) -> edge in the new graph
  std::vector<Edge> edge_images;
};

/// Replace every vertex of degree >= 4 with a degree-3 expander on deg(v)
/// vertices, one original edge per expander vertex.
SplitVerticesResult split_vertices(const Graph &h, std::uint64_t seed);

struct EmbeddingPaths {
  /// expander edge -> path in the host (vertex sequence)
  std::vector<std::pair<Edge, std::vector<VertexId>>> paths;
  int max_length = 0;
  int edge_congestion = 0;
  int vertex_congestion = 0;
  bool within_caps = true;
};

struct RoutingCaps {
  double c_len = 4.0;   // cap: c_len * d_max * log2 n / alpha
  double c_cong = 4.0;  // cap: c_cong * log2^3 n / alpha
  int retries = 8;
};

/// Route the matchings' pairs along short low-congestion paths in the host;
/// retries with reshuffled orders until the caps hold. Throws Error with the
/// achieved values when the retry budget runs out.
EmbeddingPaths route_matchings_short_paths(const ExpanderWitness &host,
                                           const std::vector<Matching> &matchings,
                                           const RoutingCaps &caps,
                                           std::uint64_t seed);

struct DegreeReduction {
  Graph reduced;                    // union of all routed path edges
  ExpanderWitness witness_over_x;   // union of the game's matchings
  int rounds = 0;
  int vertex_cap = 0;               // ceil(1/alpha) per round
  int max_observed_round_congestion = 0;
};

/// Degree reduction: play the cut-matching game over the certificate's
/// terminals, realizing each matching as vertex-capacitated flow paths
/// inside g[host]; the union of path edges is the low-degree subgraph.
/// Throws when a round's flow is infeasible (alpha overstated: the edge
/// form does not guarantee the 1/alpha vertex-congestion form, so callers
/// may escalate via cap_override; 0 keeps ceil(1/alpha)).
DegreeReduction reduce_degree(const Graph &g, const WellLinkedCertificate &x,
                              int rounds, const SolverConfig &cfg,
                              int cap_override = 0);

}  // namespace twd
