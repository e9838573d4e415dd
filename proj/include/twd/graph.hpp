#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace twd {

using VertexId = int;

class Error : public std::runtime_error {
public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

class DomainError : public Error {
public:
  explicit DomainError(const std::string &msg) : Error(msg) {}
};

class PreconditionError : public Error {
public:
  explicit PreconditionError(const std::string &msg) : Error(msg) {}
};

class SizeError : public Error {
public:
  explicit SizeError(const std::string &msg) : Error(msg) {}
};

/// Sorted set of stable vertex identifiers.
class VertexSet {
public:
  VertexSet() = default;
  explicit VertexSet(std::vector<VertexId> ids) : ids_(std::move(ids)) {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  }
  VertexSet(std::initializer_list<VertexId> ids)
      : VertexSet(std::vector<VertexId>(ids)) {}

  bool contains(VertexId v) const {
    return std::binary_search(ids_.begin(), ids_.end(), v);
  }
  void insert(VertexId v) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
    if (it == ids_.end() || *it != v) ids_.insert(it, v);
  }
  void erase(VertexId v) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
    if (it != ids_.end() && *it == v) ids_.erase(it);
  }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const std::vector<VertexId> &ids() const { return ids_; }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }

  bool operator==(const VertexSet &o) const { return ids_ == o.ids_; }

  VertexSet intersect(const VertexSet &o) const {
    std::vector<VertexId> out;
    std::set_intersection(ids_.begin(), ids_.end(), o.ids_.begin(),
                          o.ids_.end(), std::back_inserter(out));
    VertexSet r;
    r.ids_ = std::move(out);
    return r;
  }
  VertexSet unite(const VertexSet &o) const {
    std::vector<VertexId> out;
    std::set_union(ids_.begin(), ids_.end(), o.ids_.begin(), o.ids_.end(),
                   std::back_inserter(out));
    VertexSet r;
    r.ids_ = std::move(out);
    return r;
  }
  VertexSet minus(const VertexSet &o) const {
    std::vector<VertexId> out;
    std::set_difference(ids_.begin(), ids_.end(), o.ids_.begin(), o.ids_.end(),
                        std::back_inserter(out));
    VertexSet r;
    r.ids_ = std::move(out);
    return r;
  }
  bool subset_of(const VertexSet &o) const {
    return std::includes(o.ids_.begin(), o.ids_.end(), ids_.begin(),
                         ids_.end());
  }

private:
  std::vector<VertexId> ids_;
};

struct Edge {
  VertexId u, v;  // normalized u <= v
  Edge(VertexId a, VertexId b) : u(std::min(a, b)), v(std::max(a, b)) {}
  bool operator==(const Edge &o) const { return u == o.u && v == o.v; }
  bool operator<(const Edge &o) const {
    return u != o.u ? u < o.u : v < o.v;
  }
};

/// Undirected multigraph over stable vertex ids. Parallel edges are kept,
/// self-loops are rejected at construction. Immutable once built.
class Graph {
public:
  Graph() = default;
  Graph(std::vector<VertexId> vertices, std::vector<Edge> edges);

  static Graph from_edges(const std::vector<std::pair<VertexId, VertexId>> &es);

  std::size_t num_vertices() const { return ids_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<VertexId> &vertex_ids() const { return ids_; }
  VertexSet vertex_set() const { return VertexSet(ids_); }
  const std::vector<Edge> &edges() const { return edges_; }

  bool has_vertex(VertexId v) const {
    return std::binary_search(ids_.begin(), ids_.end(), v);
  }
  int index_of(VertexId v) const;  // throws DomainError on unknown id
  VertexId id_at(int idx) const { return ids_[idx]; }

  int degree(VertexId v) const { return static_cast<int>(adj_[index_of(v)].size()); }
  int max_degree() const;

  /// Incident (neighbor id, edge index) slots, parallel edges repeated.
  const std::vector<std::pair<VertexId, int>> &incident(VertexId v) const {
    return adj_[index_of(v)];
  }

  bool connected() const;
  std::vector<VertexSet> connected_components() const;
  /// Components of the induced subgraph g[s], without materializing it.
  std::vector<VertexSet> components_within(const VertexSet &s) const;

  Graph induced(const VertexSet &s) const;
  Graph simplified() const;  // parallel edges collapsed

  bool operator==(const Graph &o) const {
    return ids_ == o.ids_ && sorted_edges() == o.sorted_edges();
  }
  std::vector<Edge> sorted_edges() const {
    auto es = edges_;
    std::sort(es.begin(), es.end());
    return es;
  }

private:
  std::vector<VertexId> ids_;   // sorted
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<VertexId, int>>> adj_;  // by index
};

// ---- edge-set primitives ----

/// Edges with exactly one endpoint in s.
std::vector<Edge> out_edges(const Graph &g, const VertexSet &s);
/// Edges with both endpoints in s.
std::vector<Edge> edges_within(const Graph &g, const VertexSet &s);
/// Edges with one endpoint in a and the other in b (a, b disjoint).
std::vector<Edge> edges_between(const Graph &g, const VertexSet &a,
                                const VertexSet &b);

// ---- contraction ----

enum class ClusterCheck { none, connected };

struct ContractedGraph {
  Graph graph;  // one super-node per cluster; id = min member id
  std::vector<std::pair<VertexId, VertexSet>> members;  // super-node -> cluster
  long long phi() const { return static_cast<long long>(graph.num_edges()); }
  const VertexSet &cluster_of(VertexId super_node) const;
  /// Union of member clusters for a set of super-nodes.
  VertexSet uncontract(const VertexSet &super_nodes) const;
};

/// Contract every cluster to a super-node; self-loops dropped, parallel
/// edges kept. `check` selects the per-cluster validity rule.
ContractedGraph contract_clustering(const Graph &g,
                                    const std::vector<VertexSet> &clusters,
                                    ClusterCheck check = ClusterCheck::none);

// ---- boundary subdivision ----

struct SubdividedBoundary {
  Graph graph;          // induced by s and the new t_e vertices
  VertexSet terminals;  // one t_e per boundary edge, in out_edges order
  std::vector<Edge> boundary;  // boundary edge per terminal, same order
};

/// Subdivide each edge of out(s) by a fresh vertex t_e and return the
/// subgraph induced by s ∪ {t_e} with the t_e as terminals.
SubdividedBoundary subdivide_boundary(const Graph &g, const VertexSet &s);

// ---- balanced integer partition ----

struct IndexPartition {
  std::vector<int> a, b;
  long long sum_a = 0, sum_b = 0;
};

/// Greedy split (descending, lighter side first): both sides reach N/3
/// whenever every value is at most 2N/3.
IndexPartition balanced_integer_partition(const std::vector<long long> &xs);

// ---- generators used across tests and the CLI ----

Graph make_grid(int rows, int cols);
Graph make_complete(int n);
Graph make_path(int n);
Graph make_cycle(int n);

}  // namespace twd
