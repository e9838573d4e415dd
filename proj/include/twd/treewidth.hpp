#pragma once

#include <optional>
#include <string>

#include "twd/cuts.hpp"
#include "twd/graph.hpp"

namespace twd {

struct TreeDecomposition {
  // tree nodes 0..bags.size()-1
  std::vector<VertexSet> bags;
  std::vector<std::pair<int, int>> tree_edges;
  int width() const;
  /// Checks edge coverage and connected vertex traces against g.
  bool valid_for(const Graph &g, std::string *why = nullptr) const;
  std::string to_pace() const;  // PACE .td text format
};

struct TwBound {
  int lower = 0;
  int upper = 0;  // always >= lower
  /// how the lower bound was obtained: "exact", "contraction" or
  /// "well-linked"
  std::string lower_witness_kind;
  std::optional<TreeDecomposition> upper_witness;  // validates at `upper`
};

/// Exact value (both bounds equal) within the exact limit, otherwise the
/// best of the contraction and well-linked lower bounds against the
/// min-fill upper bound.
TwBound tw_bounds(const Graph &g, const SolverConfig &cfg = {});

/// Exact treewidth by subset DP over elimination orderings. Throws SizeError
/// above `exact_limit` vertices (per connected component).
std::pair<int, TreeDecomposition> exact_treewidth(const Graph &g,
                                                  int exact_limit = 18);

/// Independent exact algorithm: branch and bound over elimination orderings
/// with min-fill seeding and minor-min-width pruning. Cross-check oracle for
/// the DP, and the fallback when the DP's table would not fit.
int exact_treewidth_bnb(const Graph &g);

enum class EliminationHeuristic { min_degree, min_fill };

std::pair<int, TreeDecomposition> tw_upper_bound(
    const Graph &g, EliminationHeuristic h = EliminationHeuristic::min_fill);

/// Contraction-based lower bound (minor-min-width); sound, cheap.
int tw_lower_bound_mmd(const Graph &g);

/// max(0, ceil(alpha * t_size / (3 * delta)) - 1).
int tw_lower_bound_from_well_linked(long long t_size, const Rat &alpha,
                                    int delta);

/// (x, 4x) bracket from the size of a verified node-well-linked set.
std::pair<int, int> node_well_linked_bounds(int x_size);

struct DecomposeOrCertify {
  std::optional<TreeDecomposition> decomposition;  // width <= 4w
  struct Certificate {
    enum class Kind { exact, well_linked } kind;
    int bound = 0;             // proven: tw > w means bound >= w+1
    VertexSet witness_set;     // well-linked set (or exact-subgraph vertices)
    Rat alpha{1, 1};
    int delta = 1;
  };
  std::optional<Certificate> certificate;  // tw > w
};

/// Either a tree decomposition of width <= 4w or a certificate that
/// tw(g) > w. Exactly one branch is set.
DecomposeOrCertify decompose_or_certify(const Graph &g, int w,
                                        const SolverConfig &cfg = {});

}  // namespace twd
