#pragma once

#include <cstdint>
#include <optional>

#include "twd/graph.hpp"

namespace twd {

/// Exact rational, normalized, den > 0. Comparisons cross-multiply in
/// 128 bits; desk-scale counts never overflow that.
struct Rat {
  long long num = 0;
  long long den = 1;
  Rat() = default;
  Rat(long long n, long long d);
  static Rat infinity() { Rat r; r.num = 1, r.den = 0; return r; }
  bool is_infinite() const { return den == 0; }
  double value() const;
  bool operator<(const Rat &o) const;
  bool operator==(const Rat &o) const { return num == o.num && den == o.den; }
  bool operator<=(const Rat &o) const { return *this < o || *this == o; }
  bool operator>(const Rat &o) const { return o < *this; }
  bool operator>=(const Rat &o) const { return o <= *this; }
};

Rat rat_min(const Rat &a, const Rat &b);

struct Cut {
  VertexSet side_a, side_b;
  long long crossing = 0;
  std::optional<Rat> sparsity;     // w.r.t. the operation's terminal set
  std::optional<Rat> conductance;
  bool exact = false;  // solver proved optimality
};

struct SolverConfig {
  enum class Mode { exact, spectral, auto_mode };
  Mode mode = Mode::auto_mode;
  int exact_limit = 18;          // full bipartition enumeration cap
  int terminal_enum_limit = 14;  // terminal-split + min-cut completion cap
  double arv_factor = 1.0;       // assumed approximation factor downstream
  Rat balance_gamma{1, 4};
  int balance_floor = 2;  // minimum |S∩Z| for balanced_cut
  std::uint64_t seed = 0;
  int sample_count = 2000;     // sampled verification budget
  int power_iterations = 300;  // spectral embedding budget
};

/// Metrics of a bipartition (a, complement) of g's vertices.
struct CutMetrics {
  long long crossing = 0;
  long long edges_a = 0, edges_b = 0;
  long long term_a = 0, term_b = 0;
};
CutMetrics cut_metrics(const Graph &g, const VertexSet &a,
                       const VertexSet &terminals = {});

Cut make_cut(const Graph &g, const VertexSet &a, const VertexSet &terminals,
             bool exact);

/// Minimum-sparsity cut w.r.t. `terminals`. Exact (enumeration, or terminal
/// splits completed by min cuts) within the config limits, spectral sweep
/// heuristic beyond them.
Cut sparsest_cut(const Graph &g, const VertexSet &terminals,
                 const SolverConfig &cfg);

/// Minimum-conductance cut; sides without internal edges are excluded.
/// nullopt when every bipartition is degenerate.
std::optional<Cut> min_conductance_cut(const Graph &g, const SolverConfig &cfg);

/// Minimum-crossing γ-balanced bipartition of s w.r.t. z_marks, crossing
/// counted inside g[s].
Cut balanced_cut(const Graph &g, const VertexSet &s, const VertexSet &z_marks,
                 const SolverConfig &cfg);

/// Spectral embedding (Fiedler direction of the normalized Laplacian),
/// deterministic under cfg.seed. Exposed for sweep-style candidate cuts.
std::vector<double> fiedler_embedding(const Graph &g, const SolverConfig &cfg);

/// True when the graph is small enough for exact bipartition enumeration
/// under cfg.
bool exact_enumeration_feasible(const Graph &g, const SolverConfig &cfg);

}  // namespace twd
