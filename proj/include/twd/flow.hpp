#pragma once

#include <map>

#include "twd/graph.hpp"

namespace twd {

enum class CapacityMode { edge, vertex };

struct FlowResult {
  int value = 0;
  /// Vertex sequences, one per unit of flow. Shared source/sink vertices
  /// contribute single-vertex (empty) paths and stay usable as interior
  /// vertices of the remaining paths.
  std::vector<std::vector<VertexId>> paths;
};

/// Integral max flow with unit capacities between vertex sets. Edge mode
/// counts edge-disjoint paths; vertex mode counts node-disjoint paths via
/// vertex splitting.
FlowResult max_flow(const Graph &g, const VertexSet &sources,
                    const VertexSet &sinks, CapacityMode mode);

/// Same, with a uniform vertex capacity (vertex mode only): each vertex may
/// carry up to `vertex_cap` paths.
FlowResult max_flow_vertex_cap(const Graph &g, const VertexSet &sources,
                               const VertexSet &sinks, int vertex_cap);

/// Minimum edge cut between two vertex sets (value + one side).
struct MinCut {
  int value = 0;
  VertexSet side_with_sources;
};
MinCut min_edge_cut(const Graph &g, const VertexSet &sources,
                    const VertexSet &sinks);

// ---- fractional multicommodity routing across a cluster boundary ----

struct DemandRouting {
  double edge_congestion = 0;  // max total flow on an edge
  bool feasible = true;        // congestion within the requested cap
  double cap = 0;              // the cap that was checked
  /// flow per edge (sorted edge -> total routed flow), for replay checks
  std::map<Edge, double> edge_flow;
};

/// Route pairwise demands over out(cluster) fractionally inside
/// g[cluster] ∪ out(cluster), greedily on congestion-penalized shortest
/// paths, splitting each demand into `quanta` slices. Reports the achieved
/// edge congestion against `congestion_cap` (0 = no cap).
DemandRouting route_demands_in_cluster(
    const Graph &g, const VertexSet &cluster,
    const std::vector<std::tuple<Edge, Edge, double>> &demands,
    double congestion_cap = 0, int quanta = 4);

}  // namespace twd
