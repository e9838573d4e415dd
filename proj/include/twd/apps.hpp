#pragma once

#include <functional>
#include <optional>

#include "twd/decompose.hpp"
#include "twd/graph.hpp"
#include "twd/treewidth.hpp"

namespace twd {

struct EPOutcome {
  enum class Branch { packing, cover };
  Branch branch = Branch::cover;
  /// packing: k vertex-disjoint family members (vertex sets, cycle order)
  std::vector<std::vector<VertexId>> packing;
  VertexSet cover;
  /// the f(k) accounting of the strategy that produced the cover
  std::string bound_rule;
  long long bound_value = 0;
  bool exhaustive_fallback = false;  // packing found by exhaustive search
};

enum class EPStrategy { thomassen, divide_conquer };

struct EPConfig {
  EPStrategy strategy = EPStrategy::thomassen;
  double beta = 4.0;        // divide-conquer constant
  int exhaustive_limit = 20;  // brute-force packing search cap
  std::size_t cycle_budget = 200000;
  SolverConfig solver;
};

/// Erdos-Posa for the family of all cycles: k disjoint cycles or a cover
/// whose removal leaves a forest.
EPOutcome ep_cycles(const Graph &g, int k, const EPConfig &cfg = {});

/// Same for cycles of length 0 mod m; packing is best-effort, the cover
/// branch is always verified sound.
EPOutcome ep_mod_cycles(const Graph &g, int k, int m, const EPConfig &cfg = {});

/// Does g contain any cycle (length 0 mod m when m >= 2)? Bounded search.
bool has_family_cycle(const Graph &g, int m, std::size_t budget = 200000);

struct ParameterPlugin {
  std::string name;
  int threshold_p = 2;  // parameter positive whenever tw >= p
  bool is_sum_over_components = true;
  /// exact parameter value from a tree decomposition
  std::function<int(const TreeDecomposition &, const Graph &)> dp;
};

ParameterPlugin cycle_packing_plugin();

struct FptConfig {
  int kprime_override = 0;  // 0: p*p*(k+1)
  SolverConfig solver;
};

/// Decide P(g) <= k: decompose-or-certify at k' = ~p^2 k, then either the
/// plugin's DP on the returned decomposition or the decomposition argument
/// on the certificate side.
bool fpt_decide(const Graph &g, int k, const ParameterPlugin &plugin,
                const FptConfig &cfg = {});

/// Exact maximum number of vertex-disjoint cycles by bag-state DP over a
/// tree decomposition (width cap 8).
int cycle_packing_dp(const TreeDecomposition &td, const Graph &g);

}  // namespace twd
