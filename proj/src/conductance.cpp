#include "twd/conductance.hpp"

#include <cmath>
#include <map>

#include "twd/well_linked.hpp"

namespace twd {

namespace {

struct ConductanceInstance {
  Graph graph;   // h with every edge split by v_e and a pendant t_e on v_e
  VertexSet s;   // original vertices plus all v_e
  std::map<VertexId, Edge> subdiv_of;  // v_e -> original edge
};

ConductanceInstance build_instance(const Graph &h) {
  ConductanceInstance out;
  VertexId next = 0;
  for (VertexId v : h.vertex_ids()) next = std::max(next, v + 1);
  std::vector<VertexId> vs = h.vertex_ids();
  std::vector<VertexId> s_ids = h.vertex_ids();
  std::vector<Edge> es;
  for (const Edge &e : h.edges()) {
    VertexId ve = next++;
    VertexId te = next++;
    vs.push_back(ve);
    vs.push_back(te);
    s_ids.push_back(ve);
    es.emplace_back(e.u, ve);
    es.emplace_back(ve, e.v);
    es.emplace_back(ve, te);
    out.subdiv_of.emplace(ve, e);
  }
  out.graph = Graph(vs, es);
  out.s = VertexSet(s_ids);
  return out;
}

}  // namespace

ConductancePartition decompose_high_conductance(const Graph &h,
                                                const SolverConfig &cfg,
                                                const Rat &threshold_override) {
  if (h.num_edges() < 1)
    throw PreconditionError("decompose_high_conductance: need at least one edge");
  ConductancePartition out;
  out.edge_count = static_cast<long long>(h.num_edges());
  double logm = std::log2(std::max<double>(2, static_cast<double>(out.edge_count)));
  if (threshold_override.num > 0) {
    out.threshold = threshold_override;
    out.default_threshold = false;
  } else {
    long long den = static_cast<long long>(std::ceil(160.0 * cfg.arv_factor * logm));
    out.threshold = Rat(1, std::max<long long>(1, den));
  }

  std::vector<VertexSet> projected;
  for (const auto &comp : h.connected_components()) {
    Graph hc = h.induced(comp);
    if (hc.num_edges() == 0) {
      projected.push_back(comp);
      continue;
    }
    auto inst = build_instance(hc);
    // a low-conductance cut of the projected part lifts to a sparse cut of
    // the instance: v_e follows the side holding both endpoints of e
    ExtraCutFinder lift = [&hc, &inst, &cfg](const Graph &, const VertexSet &part,
                                             const Rat &) -> std::optional<VertexSet> {
      VertexSet proj = part.intersect(hc.vertex_set());
      if (proj.size() < 2) return std::nullopt;
      Graph sub = hc.induced(proj);
      if (sub.num_edges() < 2) return std::nullopt;
      if (static_cast<int>(sub.num_vertices()) > cfg.exact_limit) return std::nullopt;
      auto cut = min_conductance_cut(sub, cfg);
      if (!cut) return std::nullopt;
      VertexSet lifted = cut->side_a;
      for (VertexId v : part) {
        auto it = inst.subdiv_of.find(v);
        if (it != inst.subdiv_of.end() && cut->side_a.contains(it->second.u) &&
            cut->side_a.contains(it->second.v))
          lifted.insert(v);
      }
      return lifted;
    };
    auto wld =
        well_linked_decomposition(inst.graph, inst.s, out.threshold, cfg, false, lift);
    for (const auto &w : wld.parts) {
      VertexSet proj = w.intersect(hc.vertex_set());
      if (!proj.empty()) projected.push_back(proj);
    }
  }

  for (const auto &p : projected)
    out.boundary_total += static_cast<long long>(out_edges(h, p).size());
  out.boundary_bound_holds = 10 * out.boundary_total <= out.edge_count;
  if (out.default_threshold && !out.boundary_bound_holds)
    throw Error("decompose_high_conductance: boundary bound m/10 violated at "
                "the default threshold (bug)");

  for (const auto &p : projected) {
    ConductancePartition::Part part;
    part.vertices = p;
    Graph sub = h.induced(p);
    if (sub.num_edges() < 2) {
      part.verified_exact = true;  // no valid conductance cut: vacuous
      out.parts.push_back(std::move(part));
      continue;
    }
    bool small = static_cast<int>(sub.num_vertices()) <= cfg.exact_limit &&
                 cfg.mode != SolverConfig::Mode::spectral;
    SolverConfig use = cfg;
    if (!small) use.mode = SolverConfig::Mode::spectral;
    auto cut = min_conductance_cut(sub, use);
    part.verified_exact = small;
    if (!small) out.all_parts_verified = false;
    if (cut) {
      part.psi = cut->conductance;
      part.meets_threshold = !(*cut->conductance < out.threshold);
    }
    out.parts.push_back(std::move(part));
  }
  std::sort(out.parts.begin(), out.parts.end(), [](const auto &a, const auto &b) {
    return a.vertices.ids() < b.vertices.ids();
  });
  return out;
}

TrimResult trim_after_removal(const Graph &g_big, const VertexSet &removed,
                              const Rat &gamma, const SolverConfig &cfg,
                              bool strict) {
  if (gamma.num <= 0) throw PreconditionError("trim_after_removal: gamma must be positive");
  if (Rat(1, 10) < gamma)
    throw PreconditionError("trim_after_removal: gamma must be at most 0.1");
  TrimResult out;
  out.edges_total = static_cast<long long>(g_big.num_edges());
  VertexSet keep = g_big.vertex_set().minus(removed);
  Graph h = g_big.induced(keep);
  long long lost = out.edges_total - static_cast<long long>(h.num_edges());

  bool lost_ok = 8 * lost * gamma.den <= gamma.num * out.edges_total;
  bool psi_ok = true;
  if (static_cast<int>(g_big.num_vertices()) <= cfg.exact_limit &&
      g_big.num_edges() >= 2 && cfg.mode != SolverConfig::Mode::spectral) {
    auto cut = min_conductance_cut(g_big, cfg);
    out.preconditions_checked = true;
    if (cut && *cut->conductance < gamma) psi_ok = false;
  }
  out.preconditions_ok = lost_ok && psi_ok;
  if (strict && !out.preconditions_ok)
    throw PreconditionError(
        "trim_after_removal: preconditions violated (removed " +
        std::to_string(lost) + " edges vs budget gamma*m/8); the m/2 "
        "guarantee does not apply");

  out.charge = lost;
  VertexSet s = keep;
  while (true) {
    Graph cur = h.induced(s);
    if (cur.num_edges() < 2) break;
    auto cut = min_conductance_cut(cur, cfg);
    if (!cut) break;
    CutMetrics m = cut_metrics(cur, cut->side_a, {});
    VertexSet small_side = m.edges_a <= m.edges_b ? cut->side_a : cut->side_b;
    long long small_edges = std::min(m.edges_a, m.edges_b);
    // peel when crossing < (gamma/4) * smaller side's internal edges
    if (4 * m.crossing * gamma.den < gamma.num * small_edges) {
      out.charge += m.crossing;
      out.peeled.push_back(small_side);
      s = s.minus(small_side);
      continue;
    }
    break;
  }

  out.kept = s;
  Graph fin = h.induced(s);
  out.edges_kept = static_cast<long long>(fin.num_edges());
  if (fin.num_edges() >= 2) {
    SolverConfig use = cfg;
    if (static_cast<int>(fin.num_vertices()) > cfg.exact_limit)
      use.mode = SolverConfig::Mode::spectral;
    auto cut = min_conductance_cut(fin, use);
    if (cut) out.final_psi = cut->conductance;
  }
  bool edges_ok = 2 * out.edges_kept >= out.edges_total;
  bool charge_ok = 4 * out.charge * gamma.den <= gamma.num * out.edges_total;
  out.postconditions_ok = edges_ok;
  if (out.preconditions_ok && out.preconditions_checked) {
    if (!edges_ok)
      throw Error("trim_after_removal: kept fewer than m/2 edges despite valid "
                  "preconditions (bug)");
    if (!charge_ok)
      throw Error("trim_after_removal: charge exceeded gamma*m/4 despite valid "
                  "preconditions (bug)");
  }
  return out;
}

}  // namespace twd
