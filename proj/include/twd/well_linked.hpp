#pragma once

#include <functional>
#include <optional>

#include "twd/cuts.hpp"
#include "twd/graph.hpp"

namespace twd {

/// Certificate that `terminal_set` is alpha-well-linked (or alpha-good,
/// or node-well-linked) inside the induced subgraph g[host]. Witness records
/// the checks that were actually run so they can be replayed.
struct WellLinkedCertificate {
  enum class Kind { edge_well_linked, alpha_good, node_well_linked };
  enum class Verification { exhaustive, sampled };
  VertexSet host;  // certificate lives in g[host]
  VertexSet terminal_set;
  Rat alpha{1, 1};
  Kind kind = Kind::edge_well_linked;
  Verification verification = Verification::exhaustive;
  /// sampled mode: the bipartitions that were checked (side containing the
  /// first host vertex), as sorted vertex lists
  std::vector<VertexSet> sampled_sides;
};

struct WellLinkedCheck {
  bool pass = true;
  std::optional<Cut> violation;  // genuinely violates the inequality
  WellLinkedCertificate::Verification verification =
      WellLinkedCertificate::Verification::exhaustive;
};

/// |E(A,B)| >= alpha * min(|A∩T|, |B∩T|) over bipartitions of V(g). Exact
/// within cfg limits, seeded sampling beyond.
WellLinkedCheck check_alpha_well_linked(const Graph &g, const VertexSet &t,
                                        const Rat &alpha, const SolverConfig &cfg);

/// alpha-goodness of s: boundary terminals of the subdivided instance are
/// alpha-well-linked, equivalently |E(A,B)| >= alpha * min over
/// |out(·)∩out(s)| for partitions (A,B) of s.
WellLinkedCheck check_alpha_good(const Graph &g, const VertexSet &s,
                                 const Rat &alpha, const SolverConfig &cfg);

struct WellLinkedDecomposition {
  std::vector<VertexSet> parts;
  long long boundary_sum = 0;      // sum of |out(W)| over parts
  long long boundary_of_s = 0;     // k' = |out(s)|
  bool meets_precondition = true;  // alpha < 1/(8 arv log2 k')
  bool bound_holds = true;         // boundary_sum <= k'(1+16 α arv log k')
  bool all_parts_exact = true;     // every split decision was exact
};

/// Split a custom instance: returns a cut of the subdivided instance with
/// sparsity below the threshold, if the finder knows one. Used to let the
/// conductance module feed lifted cuts into the splitter.
using ExtraCutFinder = std::function<std::optional<VertexSet>(
    const Graph &g, const VertexSet &part, const Rat &threshold)>;

/// Partition s into alpha-good parts by splitting on verified-sparse cuts
/// of the subdivided instances, with the charging bound on the boundary
/// sum. Runs for any alpha in (0,1); the boundary-sum bound is asserted
/// only when alpha sits below the guarantee threshold 1/(8 arv log2 k').
WellLinkedDecomposition well_linked_decomposition(
    const Graph &g, const VertexSet &s, const Rat &alpha,
    const SolverConfig &cfg, bool strict_precondition = false,
    const ExtraCutFinder &extra = nullptr);

/// Recursive sparse-cut shrinking: returns a set X with an exactly or
/// sample-verified alpha, well-linked in g[host].
WellLinkedCertificate find_well_linked_set(const Graph &g, const SolverConfig &cfg);

struct NodeWellLinkedCheck {
  bool pass = true;
  std::optional<std::pair<VertexSet, VertexSet>> violating_pair;
  bool exhaustive = true;
  long long pairs_checked = 0;
};

/// Every pair of equal-sized subsets (T1, T2) of x is linked by |T1|
/// node-disjoint paths; shared vertices pair by empty paths and remain
/// usable as interior vertices. Exhaustive for |x| <= 12, sampled beyond.
NodeWellLinkedCheck verify_node_well_linked(const Graph &g, const VertexSet &x,
                                            const SolverConfig &cfg = {});

/// Largest alpha for which t is alpha-well-linked in g, capped at 1
/// (exact enumeration; throws SizeError when infeasible). Rat::infinity()
/// when no bipartition splits the terminals.
Rat exact_well_linkedness(const Graph &g, const VertexSet &t,
                          const SolverConfig &cfg);

}  // namespace twd
