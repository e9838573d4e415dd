#pragma once

#include <optional>

#include "twd/cuts.hpp"
#include "twd/graph.hpp"

namespace twd {

struct ConductancePartition {
  struct Part {
    VertexSet vertices;
    std::optional<Rat> psi;  // exact conductance when verified, else estimate
    bool verified_exact = false;
    bool meets_threshold = true;  // against the run's threshold
  };
  std::vector<Part> parts;
  long long boundary_total = 0;  // sum of |out(X_i)| in the host graph
  long long edge_count = 0;      // m of the host
  Rat threshold{0, 1};           // the run's per-part conductance target
  bool default_threshold = true;  // ran at 1/(160*arv*log2 m)
  bool boundary_bound_holds = true;  // boundary_total <= m/10
  bool all_parts_verified = true;
};

/// Partition V(h) so every part keeps conductance above the threshold
/// while the total boundary stays within m/10: subdivide every edge, hang
/// a pendant terminal on each subdivision vertex, and run the well-linked
/// decomposition over the result. Per-part conductance is exact-verified
/// when the part is small, reported (with a failure flag when below the
/// threshold) otherwise. Disconnected inputs are processed per component.
/// threshold_override (num > 0) replaces the default 1/(160*arv*log2 m);
/// the m/10 bound is then only recorded, not asserted.
ConductancePartition decompose_high_conductance(
    const Graph &h, const SolverConfig &cfg,
    const Rat &threshold_override = Rat(0, 1));

struct TrimResult {
  VertexSet kept;
  long long edges_kept = 0;
  long long edges_total = 0;      // m of the intact graph
  long long charge = 0;           // removed edges plus peeled crossings
  bool preconditions_ok = true;   // verified, or at least not refuted
  bool preconditions_checked = false;  // conductance precondition verified
  bool postconditions_ok = true;
  std::optional<Rat> final_psi;   // exact when small enough
  std::vector<VertexSet> peeled;
};

/// Peel low-conductance sides of g_big - removed until every remaining cut
/// clears gamma/4; when the graph had conductance >= gamma and the removal
/// cost at most gamma*m/8 edges, the result keeps >= m/2 edges and the
/// peeled charge stays within gamma*m/4. strict restores the precondition
/// error instead of the warn-and-proceed default.
TrimResult trim_after_removal(const Graph &g_big, const VertexSet &removed,
                              const Rat &gamma, const SolverConfig &cfg,
                              bool strict = false);

}  // namespace twd
