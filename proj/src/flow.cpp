#include "twd/flow.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

namespace twd {

namespace {

/// Dinic on a small directed residual graph.
class Dinic {
public:
  explicit Dinic(int n) : head_(n, -1), level_(n), iter_(n) {}

  int add_arc(int from, int to, int cap) {
    int id = static_cast<int>(arcs_.size());
    arcs_.push_back({to, head_[from], cap});
    head_[from] = id;
    arcs_.push_back({from, head_[to], 0});
    head_[to] = id + 1;
    return id;
  }

  int run(int s, int t) {
    int flow = 0;
    while (bfs(s, t)) {
      iter_ = head_;
      int f;
      while ((f = dfs(s, t, std::numeric_limits<int>::max())) > 0) flow += f;
    }
    return flow;
  }

  int cap(int arc_id) const { return arcs_[arc_id].cap; }
  /// Vertices reachable from s in the residual graph (min-cut side).
  std::vector<char> reachable(int s) const {
    std::vector<char> seen(head_.size(), 0);
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int a = head_[v]; a != -1; a = arcs_[a].next)
        if (arcs_[a].cap > 0 && !seen[arcs_[a].to]) {
          seen[arcs_[a].to] = 1;
          q.push(arcs_[a].to);
        }
    }
    return seen;
  }

  struct Arc {
    int to, next, cap;
  };
  std::vector<Arc> arcs_;
  std::vector<int> head_;

private:
  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    q.push(s);
    level_[s] = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int a = head_[v]; a != -1; a = arcs_[a].next)
        if (arcs_[a].cap > 0 && level_[arcs_[a].to] == -1) {
          level_[arcs_[a].to] = level_[v] + 1;
          q.push(arcs_[a].to);
        }
    }
    return level_[t] != -1;
  }

  int dfs(int v, int t, int f) {
    if (v == t) return f;
    for (int &a = iter_[v]; a != -1; a = arcs_[a].next) {
      Arc &arc = arcs_[a];
      if (arc.cap > 0 && level_[arc.to] == level_[v] + 1) {
        int d = dfs(arc.to, t, std::min(f, arc.cap));
        if (d > 0) {
          arc.cap -= d;
          arcs_[a ^ 1].cap += d;
          return d;
        }
      }
    }
    return 0;
  }

  std::vector<int> level_, iter_;
};

}  // namespace

FlowResult max_flow(const Graph &g, const VertexSet &sources,
                    const VertexSet &sinks, CapacityMode mode) {
  if (mode == CapacityMode::vertex) return max_flow_vertex_cap(g, sources, sinks, 1);

  // shared vertices -> empty paths
  VertexSet shared = sources.intersect(sinks);
  VertexSet src = sources.minus(shared), snk = sinks.minus(shared);
  FlowResult res;
  for (VertexId v : shared) res.paths.push_back({v});
  res.value = static_cast<int>(shared.size());
  if (src.empty() || snk.empty()) return res;

  int n = static_cast<int>(g.num_vertices());
  int s = n, t = n + 1;
  Dinic din(n + 2);
  std::vector<std::pair<int, int>> edge_arcs;  // (fwd arc id for u->v, v->u)
  for (const Edge &e : g.edges()) {
    int iu = g.index_of(e.u), iv = g.index_of(e.v);
    int a1 = din.add_arc(iu, iv, 1);
    int a2 = din.add_arc(iv, iu, 1);
    edge_arcs.emplace_back(a1, a2);
  }
  const int inf = std::numeric_limits<int>::max() / 2;
  for (VertexId v : src) din.add_arc(s, g.index_of(v), inf);
  for (VertexId v : snk) din.add_arc(g.index_of(v), t, inf);
  int f = din.run(s, t);
  res.value += f;

  // net flow per undirected edge, then peel unit paths
  std::vector<std::vector<std::pair<int, int>>> fwd(n);  // node -> (next, slot)
  int slot = 0;
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    const Edge &e = g.edges()[i];
    int iu = g.index_of(e.u), iv = g.index_of(e.v);
    int used_uv = 1 - din.cap(edge_arcs[i].first);
    int used_vu = 1 - din.cap(edge_arcs[i].second);
    int net = used_uv - used_vu;
    if (net > 0) fwd[iu].emplace_back(iv, slot++);
    else if (net < 0) fwd[iv].emplace_back(iu, slot++);
  }
  std::vector<char> slot_used(slot, 0);
  std::vector<char> is_snk(n, 0);
  for (VertexId v : snk) is_snk[g.index_of(v)] = 1;
  for (VertexId sv : src) {
    while (true) {
      // walk greedily from sv to any sink along unused flow slots
      std::vector<int> path{g.index_of(sv)};
      std::vector<int> slots;
      int cur = g.index_of(sv);
      bool ok = false;
      while (true) {
        if (is_snk[cur] && !path.empty() && path.size() > 1) {
          ok = true;
          break;
        }
        bool advanced = false;
        for (auto &[nxt, sl] : fwd[cur])
          if (!slot_used[sl]) {
            slot_used[sl] = 1;
            slots.push_back(sl);
            path.push_back(nxt);
            cur = nxt;
            advanced = true;
            break;
          }
        if (!advanced) break;
      }
      if (!ok) {
        for (int sl : slots) slot_used[sl] = 0;
        break;
      }
      std::vector<VertexId> p;
      for (int idx : path) p.push_back(g.id_at(idx));
      res.paths.push_back(std::move(p));
    }
  }
  return res;
}

FlowResult max_flow_vertex_cap(const Graph &g, const VertexSet &sources,
                               const VertexSet &sinks, int vertex_cap) {
  VertexSet shared = sources.intersect(sinks);
  VertexSet src = sources.minus(shared), snk = sinks.minus(shared);
  FlowResult res;
  for (VertexId v : shared) res.paths.push_back({v});
  res.value = static_cast<int>(shared.size());
  if (src.empty() || snk.empty()) return res;

  // split v -> v_in (i), v_out (i + n); every vertex carries vertex_cap.
  // Edges carry vertex_cap too: congestion-c routing reuses edges up to the
  // vertex cap (c = 1 recovers node-disjoint paths).
  int n = static_cast<int>(g.num_vertices());
  int s = 2 * n, t = 2 * n + 1;
  Dinic din(2 * n + 2);
  std::vector<int> split_arc(n);
  for (int i = 0; i < n; ++i) split_arc[i] = din.add_arc(i, i + n, vertex_cap);
  std::vector<std::pair<int, int>> edge_arcs;
  for (const Edge &e : g.edges()) {
    int iu = g.index_of(e.u), iv = g.index_of(e.v);
    edge_arcs.emplace_back(din.add_arc(iu + n, iv, vertex_cap),
                           din.add_arc(iv + n, iu, vertex_cap));
  }
  for (VertexId v : src) din.add_arc(s, g.index_of(v), 1);
  for (VertexId v : snk) din.add_arc(g.index_of(v) + n, t, 1);
  int f = din.run(s, t);
  res.value += f;

  // path decomposition over arcs carrying flow
  int m2 = static_cast<int>(g.edges().size());
  std::vector<std::vector<std::pair<int, int>>> fwd(n);
  std::vector<int> slot_count;
  for (int i = 0; i < m2; ++i) {
    const Edge &e = g.edges()[i];
    int iu = g.index_of(e.u), iv = g.index_of(e.v);
    int used_uv = 1 - din.cap(edge_arcs[i].first);
    int used_vu = 1 - din.cap(edge_arcs[i].second);
    int net = used_uv - used_vu;
    for (int k = 0; k < net; ++k) {
      fwd[iu].emplace_back(iv, static_cast<int>(slot_count.size()));
      slot_count.push_back(0);
    }
    for (int k = 0; k < -net; ++k) {
      fwd[iv].emplace_back(iu, static_cast<int>(slot_count.size()));
      slot_count.push_back(0);
    }
  }
  std::vector<char> slot_used(slot_count.size(), 0);
  std::vector<char> is_snk(n, 0);
  for (VertexId v : snk) is_snk[g.index_of(v)] = 1;
  std::vector<int> src_budget(n, 0);
  for (VertexId v : src) src_budget[g.index_of(v)] = 1;
  for (VertexId sv : src) {
    int start = g.index_of(sv);
    while (src_budget[start] > 0) {
      std::vector<int> path{start};
      std::vector<int> slots;
      int cur = start;
      bool ok = false;
      while (true) {
        if (is_snk[cur] && path.size() > 1) {
          ok = true;
          break;
        }
        bool advanced = false;
        for (auto &[nxt, sl] : fwd[cur])
          if (!slot_used[sl]) {
            slot_used[sl] = 1;
            slots.push_back(sl);
            path.push_back(nxt);
            cur = nxt;
            advanced = true;
            break;
          }
        if (!advanced) break;
      }
      if (!ok) {
        for (int sl : slots) slot_used[sl] = 0;
        break;
      }
      --src_budget[start];
      std::vector<VertexId> p;
      for (int idx : path) p.push_back(g.id_at(idx));
      res.paths.push_back(std::move(p));
    }
  }
  return res;
}

MinCut min_edge_cut(const Graph &g, const VertexSet &sources,
                    const VertexSet &sinks) {
  VertexSet shared = sources.intersect(sinks);
  if (!shared.empty())
    throw DomainError("min_edge_cut: source and sink sets intersect");
  int n = static_cast<int>(g.num_vertices());
  int s = n, t = n + 1;
  Dinic din(n + 2);
  for (const Edge &e : g.edges()) {
    int iu = g.index_of(e.u), iv = g.index_of(e.v);
    din.add_arc(iu, iv, 1);
    din.add_arc(iv, iu, 1);
  }
  const int inf = std::numeric_limits<int>::max() / 2;
  for (VertexId v : sources) din.add_arc(s, g.index_of(v), inf);
  for (VertexId v : sinks) din.add_arc(g.index_of(v), t, inf);
  MinCut res;
  res.value = din.run(s, t);
  auto seen = din.reachable(s);
  std::vector<VertexId> side;
  for (int i = 0; i < n; ++i)
    if (seen[i]) side.push_back(g.id_at(i));
  res.side_with_sources = VertexSet(std::move(side));
  return res;
}

DemandRouting route_demands_in_cluster(
    const Graph &g, const VertexSet &cluster,
    const std::vector<std::tuple<Edge, Edge, double>> &demands,
    double congestion_cap, int quanta) {
  // Work in the subdivided instance: each boundary edge e gets a terminal
  // t_e; demands are routed terminal-to-terminal through g[cluster].
  auto sub = subdivide_boundary(g, cluster);
  const Graph &h = sub.graph;
  std::vector<Edge> boundary = sub.boundary;
  auto term_of = [&](const Edge &e) -> VertexId {
    for (std::size_t i = 0; i < boundary.size(); ++i)
      if (boundary[i] == e) return sub.terminals.ids()[i];
    throw DomainError("route_demands: demand endpoint is not a boundary edge");
  };

  int n = static_cast<int>(h.num_vertices());
  std::map<Edge, double> load;
  for (const Edge &e : h.edges()) load[e] = 0;

  auto dijkstra = [&](VertexId from, VertexId to) {
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<int> prev(n, -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    int si = h.index_of(from), ti = h.index_of(to);
    dist[si] = 0;
    pq.push({0, si});
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (d > dist[v]) continue;
      if (v == ti) break;
      for (auto [nb, ei] : h.incident(h.id_at(v))) {
        (void)ei;
        int ni = h.index_of(nb);
        Edge e(h.id_at(v), nb);
        double w = 1.0 + load[e] * load[e];  // spread over lighter edges
        if (dist[v] + w < dist[ni]) {
          dist[ni] = dist[v] + w;
          prev[ni] = v;
          pq.push({dist[ni], ni});
        }
      }
    }
    std::vector<VertexId> path;
    if (!std::isfinite(dist[ti])) return path;
    for (int cur = ti; cur != -1; cur = prev[cur]) path.push_back(h.id_at(cur));
    std::reverse(path.begin(), path.end());
    return path;
  };

  DemandRouting res;
  res.cap = congestion_cap;
  quanta = std::max(1, quanta);
  for (int q = 0; q < quanta; ++q) {
    for (const auto &[ea, eb, value] : demands) {
      if (value <= 0) continue;
      VertexId ta = term_of(ea), tb = term_of(eb);
      if (ta == tb) continue;
      auto path = dijkstra(ta, tb);
      if (path.empty()) {
        res.feasible = false;
        continue;
      }
      double slice = value / quanta;
      for (std::size_t i = 0; i + 1 < path.size(); ++i)
        load[Edge(path[i], path[i + 1])] += slice;
    }
  }
  for (const auto &[e, f] : load) res.edge_congestion = std::max(res.edge_congestion, f);
  if (congestion_cap > 0 && res.edge_congestion > congestion_cap) res.feasible = false;
  res.edge_flow = std::move(load);
  return res;
}

}  // namespace twd
