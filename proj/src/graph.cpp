#include "twd/graph.hpp"

#include <numeric>
#include <queue>

namespace twd {

Graph::Graph(std::vector<VertexId> vertices, std::vector<Edge> edges)
    : ids_(std::move(vertices)), edges_(std::move(edges)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  adj_.resize(ids_.size());
  for (int ei = 0; ei < static_cast<int>(edges_.size()); ++ei) {
    const Edge &e = edges_[ei];
    if (e.u == e.v) throw DomainError("self-loop rejected: " + std::to_string(e.u));
    int iu = index_of(e.u), iv = index_of(e.v);
    adj_[iu].emplace_back(e.v, ei);
    adj_[iv].emplace_back(e.u, ei);
  }
}

Graph Graph::from_edges(const std::vector<std::pair<VertexId, VertexId>> &es) {
  std::vector<VertexId> vs;
  std::vector<Edge> edges;
  for (auto [a, b] : es) {
    vs.push_back(a);
    vs.push_back(b);
    edges.emplace_back(a, b);
  }
  return Graph(std::move(vs), std::move(edges));
}

int Graph::index_of(VertexId v) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
  if (it == ids_.end() || *it != v)
    throw DomainError("unknown vertex id " + std::to_string(v));
  return static_cast<int>(it - ids_.begin());
}

int Graph::max_degree() const {
  int d = 0;
  for (const auto &a : adj_) d = std::max(d, static_cast<int>(a.size()));
  return d;
}

bool Graph::connected() const {
  if (ids_.empty()) return true;
  return connected_components().size() == 1;
}

std::vector<VertexSet> Graph::connected_components() const {
  return components_within(vertex_set());
}

std::vector<VertexSet> Graph::components_within(const VertexSet &s) const {
  std::vector<VertexSet> comps;
  std::vector<char> seen(ids_.size(), 0);
  for (VertexId start : s) {
    int si = index_of(start);
    if (seen[si]) continue;
    std::vector<VertexId> comp;
    std::queue<int> q;
    q.push(si);
    seen[si] = 1;
    while (!q.empty()) {
      int i = q.front();
      q.pop();
      comp.push_back(ids_[i]);
      for (auto [nb, ei] : adj_[i]) {
        (void)ei;
        if (!s.contains(nb)) continue;
        int ni = index_of(nb);
        if (!seen[ni]) {
          seen[ni] = 1;
          q.push(ni);
        }
      }
    }
    comps.emplace_back(std::move(comp));
  }
  return comps;
}

Graph Graph::induced(const VertexSet &s) const {
  for (VertexId v : s)
    if (!has_vertex(v)) throw DomainError("induced: unknown vertex id " + std::to_string(v));
  std::vector<Edge> es;
  for (const Edge &e : edges_)
    if (s.contains(e.u) && s.contains(e.v)) es.push_back(e);
  return Graph(s.ids(), std::move(es));
}

Graph Graph::simplified() const {
  auto es = sorted_edges();
  es.erase(std::unique(es.begin(), es.end()), es.end());
  return Graph(ids_, std::move(es));
}

std::vector<Edge> out_edges(const Graph &g, const VertexSet &s) {
  for (VertexId v : s)
    if (!g.has_vertex(v)) throw DomainError("out_edges: unknown vertex id " + std::to_string(v));
  std::vector<Edge> out;
  for (const Edge &e : g.edges())
    if (s.contains(e.u) != s.contains(e.v)) out.push_back(e);
  return out;
}

std::vector<Edge> edges_within(const Graph &g, const VertexSet &s) {
  std::vector<Edge> out;
  for (const Edge &e : g.edges())
    if (s.contains(e.u) && s.contains(e.v)) out.push_back(e);
  return out;
}

std::vector<Edge> edges_between(const Graph &g, const VertexSet &a,
                                const VertexSet &b) {
  std::vector<Edge> out;
  for (const Edge &e : g.edges()) {
    bool ua = a.contains(e.u), va = a.contains(e.v);
    bool ub = b.contains(e.u), vb = b.contains(e.v);
    if ((ua && vb) || (ub && va)) out.push_back(e);
  }
  return out;
}

const VertexSet &ContractedGraph::cluster_of(VertexId super_node) const {
  for (const auto &[id, set] : members)
    if (id == super_node) return set;
  throw DomainError("unknown super-node " + std::to_string(super_node));
}

VertexSet ContractedGraph::uncontract(const VertexSet &super_nodes) const {
  VertexSet out;
  for (const auto &[id, set] : members)
    if (super_nodes.contains(id)) out = out.unite(set);
  return out;
}

ContractedGraph contract_clustering(const Graph &g,
                                    const std::vector<VertexSet> &clusters,
                                    ClusterCheck check) {
  std::size_t total = 0;
  for (const auto &c : clusters) {
    if (c.empty()) throw DomainError("contract_clustering: empty cluster");
    total += c.size();
  }
  if (total != g.num_vertices())
    throw DomainError("contract_clustering: clusters do not partition V");
  std::vector<int> owner(g.num_vertices(), -1);
  for (int ci = 0; ci < static_cast<int>(clusters.size()); ++ci)
    for (VertexId v : clusters[ci]) {
      int vi = g.index_of(v);
      if (owner[vi] != -1)
        throw DomainError("contract_clustering: overlapping clusters at vertex " +
                          std::to_string(v));
      owner[vi] = ci;
    }
  if (check == ClusterCheck::connected) {
    for (const auto &c : clusters)
      if (g.components_within(c).size() != 1)
        throw DomainError("contract_clustering: cluster induces a disconnected subgraph");
  }

  ContractedGraph res;
  std::vector<VertexId> super_ids(clusters.size());
  for (int ci = 0; ci < static_cast<int>(clusters.size()); ++ci)
    super_ids[ci] = clusters[ci].ids().front();  // min member id
  std::vector<Edge> hedges;
  for (const Edge &e : g.edges()) {
    int cu = owner[g.index_of(e.u)], cv = owner[g.index_of(e.v)];
    if (cu != cv) hedges.emplace_back(super_ids[cu], super_ids[cv]);
  }
  res.graph = Graph(super_ids, std::move(hedges));
  for (int ci = 0; ci < static_cast<int>(clusters.size()); ++ci)
    res.members.emplace_back(super_ids[ci], clusters[ci]);
  std::sort(res.members.begin(), res.members.end(),
            [](const auto &a, const auto &b) { return a.first < b.first; });
  return res;
}

SubdividedBoundary subdivide_boundary(const Graph &g, const VertexSet &s) {
  auto boundary = out_edges(g, s);
  VertexId next = 0;
  for (VertexId v : g.vertex_ids()) next = std::max(next, v + 1);

  std::vector<VertexId> vs = s.ids();
  std::vector<Edge> es = edges_within(g, s);
  std::vector<VertexId> terms;
  for (const Edge &e : boundary) {
    VertexId te = next++;
    VertexId inner = s.contains(e.u) ? e.u : e.v;
    vs.push_back(te);
    es.emplace_back(inner, te);
    terms.push_back(te);
  }
  SubdividedBoundary res;
  res.graph = Graph(std::move(vs), std::move(es));
  res.terminals = VertexSet(terms);
  res.boundary = std::move(boundary);
  return res;
}

IndexPartition balanced_integer_partition(const std::vector<long long> &xs) {
  long long n_total = 0;
  for (long long x : xs) {
    if (x < 0) throw PreconditionError("balanced_integer_partition: negative value");
    n_total += x;
  }
  for (long long x : xs)
    if (3 * x > 2 * n_total)
      throw PreconditionError("balanced_integer_partition: value " + std::to_string(x) +
                              " exceeds 2N/3");
  std::vector<int> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return xs[i] > xs[j]; });
  IndexPartition p;
  for (int i : order) {
    if (p.sum_a <= p.sum_b) {
      p.a.push_back(i);
      p.sum_a += xs[i];
    } else {
      p.b.push_back(i);
      p.sum_b += xs[i];
    }
  }
  std::sort(p.a.begin(), p.a.end());
  std::sort(p.b.begin(), p.b.end());
  return p;
}

Graph make_grid(int rows, int cols) {
  std::vector<std::pair<VertexId, VertexId>> es;
  std::vector<VertexId> vs;
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      vs.push_back(id(r, c));
      if (c + 1 < cols) es.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < rows) es.emplace_back(id(r, c), id(r + 1, c));
    }
  std::vector<Edge> edges;
  for (auto [a, b] : es) edges.emplace_back(a, b);
  return Graph(std::move(vs), std::move(edges));
}

Graph make_complete(int n) {
  std::vector<VertexId> vs(n);
  std::iota(vs.begin(), vs.end(), 0);
  std::vector<Edge> es;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) es.emplace_back(i, j);
  return Graph(std::move(vs), std::move(es));
}

Graph make_path(int n) {
  std::vector<VertexId> vs(n);
  std::iota(vs.begin(), vs.end(), 0);
  std::vector<Edge> es;
  for (int i = 0; i + 1 < n; ++i) es.emplace_back(i, i + 1);
  return Graph(std::move(vs), std::move(es));
}

Graph make_cycle(int n) {
  std::vector<VertexId> vs(n);
  std::iota(vs.begin(), vs.end(), 0);
  std::vector<Edge> es;
  for (int i = 0; i + 1 < n; ++i) es.emplace_back(i, i + 1);
  if (n > 2) es.emplace_back(n - 1, 0);
  return Graph(std::move(vs), std::move(es));
}

}  // namespace twd
