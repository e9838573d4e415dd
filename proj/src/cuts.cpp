#include "twd/cuts.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "twd/flow.hpp"

namespace twd {

Rat::Rat(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

double Rat::value() const {
  if (den == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(num) / static_cast<double>(den);
}

bool Rat::operator<(const Rat &o) const {
  if (den == 0) return false;
  if (o.den == 0) return true;
  return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
}

Rat rat_min(const Rat &a, const Rat &b) { return a < b ? a : b; }

CutMetrics cut_metrics(const Graph &g, const VertexSet &a,
                       const VertexSet &terminals) {
  CutMetrics m;
  for (const Edge &e : g.edges()) {
    bool ua = a.contains(e.u), va = a.contains(e.v);
    if (ua && va) ++m.edges_a;
    else if (!ua && !va) ++m.edges_b;
    else ++m.crossing;
  }
  for (VertexId t : terminals)
    (a.contains(t) ? m.term_a : m.term_b)++;
  return m;
}

Cut make_cut(const Graph &g, const VertexSet &a, const VertexSet &terminals,
             bool exact) {
  Cut c;
  c.side_a = a;
  c.side_b = g.vertex_set().minus(a);
  CutMetrics m = cut_metrics(g, a, terminals);
  c.crossing = m.crossing;
  if (!terminals.empty() && std::min(m.term_a, m.term_b) >= 1)
    c.sparsity = Rat(m.crossing, std::min(m.term_a, m.term_b));
  if (std::min(m.edges_a, m.edges_b) >= 1)
    c.conductance = Rat(m.crossing, std::min(m.edges_a, m.edges_b));
  c.exact = exact;
  return c;
}

bool exact_enumeration_feasible(const Graph &g, const SolverConfig &cfg) {
  return static_cast<int>(g.num_vertices()) <= cfg.exact_limit;
}

namespace {

/// Incremental bipartition enumeration: vertices assigned in index order,
/// index 0 pinned to side A. eval sees crossing, per-side internal edges and
/// terminal counts, and the assignment (1 = side A).
template <class F>
void enumerate_bipartitions(const Graph &g, const VertexSet &terminals, F &&eval) {
  int n = static_cast<int>(g.num_vertices());
  if (n == 0) return;
  // per vertex, earlier-indexed neighbors with multiplicity
  std::vector<std::vector<int>> back(n);
  for (const Edge &e : g.edges()) {
    int iu = g.index_of(e.u), iv = g.index_of(e.v);
    back[std::max(iu, iv)].push_back(std::min(iu, iv));
  }
  std::vector<char> is_term(n, 0);
  for (VertexId t : terminals) is_term[g.index_of(t)] = 1;

  std::vector<char> side(n, 0);
  long long cross = 0, ea = 0, eb = 0, ta = 0, tb = 0;

  auto rec = [&](auto &&self, int i) -> void {
    if (i == n) {
      eval(side, cross, ea, eb, ta, tb);
      return;
    }
    for (char s : {char(1), char(0)}) {
      if (i == 0 && s == 0) continue;  // pin index 0 to side A
      long long same = 0;
      for (int j : back[i]) same += (side[j] == s);
      long long diff = static_cast<long long>(back[i].size()) - same;
      side[i] = s;
      cross += diff;
      (s ? ea : eb) += same;
      (s ? ta : tb) += is_term[i];
      self(self, i + 1);
      cross -= diff;
      (s ? ea : eb) -= same;
      (s ? ta : tb) -= is_term[i];
    }
  };
  rec(rec, 0);
}

VertexSet side_from_assignment(const Graph &g, const std::vector<char> &side,
                               char which) {
  std::vector<VertexId> ids;
  for (int i = 0; i < static_cast<int>(side.size()); ++i)
    if (side[i] == which) ids.push_back(g.id_at(i));
  return VertexSet(std::move(ids));
}

enum class Objective { sparsity, conductance };

/// Sweep the spectral order and return the best prefix under the objective;
/// then greedy single-vertex improvement. Also tries component cuts.
VertexSet heuristic_cut_side(const Graph &g, const VertexSet &terminals,
                             Objective obj, const SolverConfig &cfg) {
  int n = static_cast<int>(g.num_vertices());
  auto emb = fiedler_embedding(g, cfg);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return emb[i] < emb[j]; });

  std::vector<char> is_term(n, 0);
  long long tot_t = 0;
  for (VertexId t : terminals) is_term[g.index_of(t)] = 1, ++tot_t;
  long long m = static_cast<long long>(g.num_edges());

  std::vector<char> in_a(n, 0);
  long long cross = 0, ea = 0, ta = 0;
  Rat best = Rat::infinity();
  int best_prefix = -1;

  auto links_a = [&](int i) {
    long long cnt = 0;
    for (auto [nb, ei] : g.incident(g.id_at(i))) {
      (void)ei;
      cnt += in_a[g.index_of(nb)];
    }
    return cnt;
  };
  for (int p = 0; p < n - 1; ++p) {
    int i = order[p];
    long long la = links_a(i);
    long long deg = static_cast<long long>(g.incident(g.id_at(i)).size());
    in_a[i] = 1;
    ea += la;
    cross += deg - 2 * la;
    ta += is_term[i];
    long long eb = m - ea - cross;
    Rat val = Rat::infinity();
    if (obj == Objective::sparsity) {
      long long mt = std::min(ta, tot_t - ta);
      if (mt >= 1) val = Rat(cross, mt);
    } else {
      long long me = std::min(ea, eb);
      if (me >= 1) val = Rat(cross, me);
    }
    if (val < best) {
      best = val;
      best_prefix = p;
    }
  }
  std::fill(in_a.begin(), in_a.end(), 0);
  for (int p = 0; p <= best_prefix; ++p) in_a[order[p]] = 1;

  // component candidates beat any positive-crossing cut when valid
  auto comps = g.connected_components();
  if (comps.size() > 1) {
    for (const auto &c : comps) {
      CutMetrics cm = cut_metrics(g, c, terminals);
      Rat val = Rat::infinity();
      if (obj == Objective::sparsity) {
        if (std::min(cm.term_a, cm.term_b) >= 1)
          val = Rat(cm.crossing, std::min(cm.term_a, cm.term_b));
      } else {
        if (std::min(cm.edges_a, cm.edges_b) >= 1)
          val = Rat(cm.crossing, std::min(cm.edges_a, cm.edges_b));
      }
      if (val < best) {
        best = val;
        std::fill(in_a.begin(), in_a.end(), 0);
        for (VertexId v : c) in_a[g.index_of(v)] = 1;
      }
    }
  }

  // greedy single-vertex improvement
  auto evaluate = [&](const std::vector<char> &assign) -> Rat {
    long long cr = 0, iea = 0, ieb = 0, ita = 0, itb = 0;
    for (const Edge &e : g.edges()) {
      bool ua = assign[g.index_of(e.u)], va = assign[g.index_of(e.v)];
      if (ua && va) ++iea;
      else if (!ua && !va) ++ieb;
      else ++cr;
    }
    for (int i = 0; i < n; ++i)
      if (is_term[i]) (assign[i] ? ita : itb)++;
    if (obj == Objective::sparsity) {
      long long mt = std::min(ita, itb);
      return mt >= 1 ? Rat(cr, mt) : Rat::infinity();
    }
    long long me = std::min(iea, ieb);
    return me >= 1 ? Rat(cr, me) : Rat::infinity();
  };
  Rat cur = evaluate(in_a);
  for (int pass = 0; pass < 3 * n; ++pass) {
    bool improved = false;
    for (int i = 0; i < n && !improved; ++i) {
      in_a[i] ^= 1;
      long long cnt_a = std::count(in_a.begin(), in_a.end(), char(1));
      if (cnt_a == 0 || cnt_a == n) {
        in_a[i] ^= 1;
        continue;
      }
      Rat val = evaluate(in_a);
      if (val < cur) {
        cur = val;
        improved = true;
      } else {
        in_a[i] ^= 1;
      }
    }
    if (!improved) break;
  }
  return side_from_assignment(g, in_a, 1);
}

Cut sparsest_cut_terminal_enum(const Graph &g, const VertexSet &terminals,
                               const SolverConfig &) {
  const auto &tids = terminals.ids();
  int k = static_cast<int>(tids.size());
  Rat best = Rat::infinity();
  VertexSet best_side;
  for (std::uint64_t mask = 0; mask < (1ull << (k - 1)); ++mask) {
    std::vector<VertexId> ta_ids{tids[0]};
    std::vector<VertexId> tb_ids;
    for (int i = 1; i < k; ++i)
      ((mask >> (i - 1)) & 1 ? ta_ids : tb_ids).push_back(tids[i]);
    if (tb_ids.empty()) continue;
    VertexSet ta(ta_ids), tb(tb_ids);
    MinCut mc = min_edge_cut(g, ta, tb);
    Rat val(mc.value, std::min<long long>(ta.size(), tb.size()));
    if (val < best) {
      best = val;
      best_side = mc.side_with_sources;
    }
  }
  return make_cut(g, best_side, terminals, true);
}

}  // namespace

std::vector<double> fiedler_embedding(const Graph &g, const SolverConfig &cfg) {
  int n = static_cast<int>(g.num_vertices());
  std::vector<double> sqden(n);
  for (int i = 0; i < n; ++i) {
    double d = static_cast<double>(g.incident(g.id_at(i)).size());
    sqden[i] = std::sqrt(std::max(1.0, d));
  }
  std::vector<double> top(n);
  double nrm = 0;
  for (int i = 0; i < n; ++i) nrm += sqden[i] * sqden[i];
  nrm = std::sqrt(nrm);
  for (int i = 0; i < n; ++i) top[i] = sqden[i] / nrm;

  std::mt19937_64 rng(cfg.seed ^ 0x5eed5eedULL);
  std::uniform_real_distribution<double> uni(-1, 1);
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = uni(rng);

  auto orth_normalize = [&](std::vector<double> &v) {
    double dot = 0;
    for (int i = 0; i < n; ++i) dot += v[i] * top[i];
    for (int i = 0; i < n; ++i) v[i] -= dot * top[i];
    double s = 0;
    for (int i = 0; i < n; ++i) s += v[i] * v[i];
    s = std::sqrt(s);
    if (s < 1e-12) {
      // collapsed; restart from a deterministic basis direction
      std::fill(v.begin(), v.end(), 0.0);
      v[0] = 1.0;
      double d2 = v[0] * top[0];
      for (int i = 0; i < n; ++i) v[i] -= d2 * top[i];
      s = 0;
      for (int i = 0; i < n; ++i) s += v[i] * v[i];
      s = std::max(std::sqrt(s), 1e-12);
    }
    for (int i = 0; i < n; ++i) v[i] /= s;
  };
  orth_normalize(x);

  std::vector<double> y(n);
  for (int it = 0; it < cfg.power_iterations; ++it) {
    // y = 1/2 (I + D^{-1/2} A D^{-1/2}) x  — lazy walk, top eigenpair is
    // the all-ones direction we deflate away
    for (int i = 0; i < n; ++i) y[i] = 0.5 * x[i];
    for (int i = 0; i < n; ++i) {
      double acc = 0;
      for (auto [nb, ei] : g.incident(g.id_at(i))) {
        (void)ei;
        int j = g.index_of(nb);
        acc += x[j] / (sqden[i] * sqden[j]);
      }
      y[i] += 0.5 * acc;
    }
    orth_normalize(y);
    x.swap(y);
  }
  std::vector<double> emb(n);
  for (int i = 0; i < n; ++i) emb[i] = x[i] / sqden[i];
  return emb;
}

Cut sparsest_cut(const Graph &g, const VertexSet &terminals,
                 const SolverConfig &cfg) {
  if (g.num_vertices() < 2) throw DomainError("sparsest_cut: need at least 2 vertices");
  if (terminals.size() < 2)
    throw PreconditionError("sparsest_cut: need at least 2 terminals");
  for (VertexId t : terminals)
    if (!g.has_vertex(t)) throw DomainError("sparsest_cut: unknown terminal");

  bool can_enum = exact_enumeration_feasible(g, cfg);
  bool can_term = static_cast<int>(terminals.size()) <= cfg.terminal_enum_limit;
  if (cfg.mode == SolverConfig::Mode::exact && !can_enum && !can_term)
    throw SizeError("sparsest_cut: graph too large for exact mode");
  bool exact = cfg.mode != SolverConfig::Mode::spectral && (can_enum || can_term);

  if (exact && can_enum) {
    Rat best = Rat::infinity();
    std::vector<char> best_side;
    enumerate_bipartitions(
        g, terminals,
        [&](const std::vector<char> &side, long long cross, long long, long long,
            long long ta, long long tb) {
          long long mt = std::min(ta, tb);
          if (mt < 1) return;
          Rat val(cross, mt);
          if (val < best) {
            best = val;
            best_side = side;
          }
        });
    if (best_side.empty())
      throw DomainError("sparsest_cut: no valid cut (terminals inseparable)");
    return make_cut(g, side_from_assignment(g, best_side, 1), terminals, true);
  }
  if (exact) return sparsest_cut_terminal_enum(g, terminals, cfg);
  auto side = heuristic_cut_side(g, terminals, Objective::sparsity, cfg);
  return make_cut(g, side, terminals, false);
}

std::optional<Cut> min_conductance_cut(const Graph &g, const SolverConfig &cfg) {
  if (g.num_edges() < 2)
    throw PreconditionError("min_conductance_cut: need at least 2 edges");
  bool can_enum = exact_enumeration_feasible(g, cfg);
  if (cfg.mode == SolverConfig::Mode::exact && !can_enum)
    throw SizeError("min_conductance_cut: graph too large for exact mode");
  bool exact = cfg.mode != SolverConfig::Mode::spectral && can_enum;

  if (exact) {
    Rat best = Rat::infinity();
    std::vector<char> best_side;
    enumerate_bipartitions(
        g, {},
        [&](const std::vector<char> &side, long long cross, long long ea,
            long long eb, long long, long long) {
          long long me = std::min(ea, eb);
          if (me < 1) return;
          Rat val(cross, me);
          if (val < best) {
            best = val;
            best_side = side;
          }
        });
    if (best_side.empty()) return std::nullopt;
    return make_cut(g, side_from_assignment(g, best_side, 1), {}, true);
  }
  auto side = heuristic_cut_side(g, {}, Objective::conductance, cfg);
  Cut c = make_cut(g, side, {}, false);
  if (!c.conductance) return std::nullopt;
  return c;
}

Cut balanced_cut(const Graph &g, const VertexSet &s, const VertexSet &z_marks,
                 const SolverConfig &cfg) {
  VertexSet zs = s.intersect(z_marks);
  long long z = static_cast<long long>(zs.size());
  if (z < std::max(2, cfg.balance_floor))
    throw PreconditionError("balanced_cut: |S∩Z| = " + std::to_string(z) +
                            " below floor " +
                            std::to_string(std::max(2, cfg.balance_floor)));
  Graph h = g.induced(s);
  const Rat &gamma = cfg.balance_gamma;
  // min(|A∩Z|, |B∩Z|) >= gamma * z, integer threshold
  long long need = (gamma.num * z + gamma.den - 1) / gamma.den;

  bool can_enum = exact_enumeration_feasible(h, cfg);
  if (cfg.mode == SolverConfig::Mode::exact && !can_enum)
    throw SizeError("balanced_cut: operand too large for exact mode");
  bool exact = cfg.mode != SolverConfig::Mode::spectral && can_enum;

  if (exact) {
    long long best_cross = -1;
    std::vector<char> best_side;
    enumerate_bipartitions(
        h, zs,
        [&](const std::vector<char> &side, long long cross, long long, long long,
            long long za, long long zb) {
          if (std::min(za, zb) < need) return;
          if (best_cross < 0 || cross < best_cross) {
            best_cross = cross;
            best_side = side;
          }
        });
    if (best_side.empty())
      throw PreconditionError("balanced_cut: no gamma-balanced bipartition exists");
    Cut c = make_cut(h, side_from_assignment(h, best_side, 1), zs, true);
    return c;
  }

  // heuristic: sweep with the balance window, then balance-preserving moves
  int n = static_cast<int>(h.num_vertices());
  auto emb = fiedler_embedding(h, cfg);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return emb[i] < emb[j]; });
  std::vector<char> is_z(n, 0);
  for (VertexId v : zs) is_z[h.index_of(v)] = 1;

  std::vector<char> in_a(n, 0);
  long long cross = 0, za = 0;
  long long best_cross = -1;
  int best_prefix = -1;
  for (int p = 0; p < n - 1; ++p) {
    int i = order[p];
    long long la = 0;
    for (auto [nb, ei] : h.incident(h.id_at(i))) {
      (void)ei;
      la += in_a[h.index_of(nb)];
    }
    long long deg = static_cast<long long>(h.incident(h.id_at(i)).size());
    in_a[i] = 1;
    cross += deg - 2 * la;
    za += is_z[i];
    if (std::min(za, z - za) >= need && (best_cross < 0 || cross < best_cross)) {
      best_cross = cross;
      best_prefix = p;
    }
  }
  if (best_prefix < 0)
    throw PreconditionError("balanced_cut: no gamma-balanced bipartition found");
  std::fill(in_a.begin(), in_a.end(), 0);
  for (int p = 0; p <= best_prefix; ++p) in_a[order[p]] = 1;

  auto crossing_of = [&](const std::vector<char> &assign) {
    long long cr = 0;
    for (const Edge &e : h.edges())
      if (assign[h.index_of(e.u)] != assign[h.index_of(e.v)]) ++cr;
    return cr;
  };
  long long cur = crossing_of(in_a);
  for (int pass = 0; pass < 2 * n; ++pass) {
    bool improved = false;
    for (int i = 0; i < n && !improved; ++i) {
      in_a[i] ^= 1;
      long long za2 = 0;
      for (int j = 0; j < n; ++j)
        if (is_z[j] && in_a[j]) ++za2;
      long long cnt_a = std::count(in_a.begin(), in_a.end(), char(1));
      if (cnt_a == 0 || cnt_a == n || std::min(za2, z - za2) < need) {
        in_a[i] ^= 1;
        continue;
      }
      long long cr = crossing_of(in_a);
      if (cr < cur) {
        cur = cr;
        improved = true;
      } else {
        in_a[i] ^= 1;
      }
    }
    if (!improved) break;
  }
  return make_cut(h, side_from_assignment(h, in_a, 1), zs, false);
}

}  // namespace twd
