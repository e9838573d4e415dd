#include "twd/decompose.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "twd/flow.hpp"

namespace twd {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

/// any cycle in g[sub]: vertex sequence, or a parallel pair (length 2)
std::optional<std::vector<VertexId>> find_cycle(const Graph &g,
                                                const VertexSet &sub) {
  std::map<Edge, int> mult;
  for (const Edge &e : g.edges())
    if (sub.contains(e.u) && sub.contains(e.v))
      if (++mult[e] == 2) return std::vector<VertexId>{e.u, e.v};
  std::map<VertexId, VertexId> parent;
  std::set<VertexId> visited;
  for (VertexId root : sub) {
    if (visited.count(root)) continue;
    std::vector<std::pair<VertexId, int>> stack{{root, -1}};
    parent[root] = root;
    while (!stack.empty()) {
      auto [v, pe] = stack.back();
      stack.pop_back();
      if (visited.count(v)) continue;
      visited.insert(v);
      for (auto [nb, ei] : g.incident(v)) {
        if (!sub.contains(nb) || ei == pe) continue;
        if (!visited.count(nb)) {
          parent[nb] = v;
          stack.push_back({nb, ei});
        } else {
          std::vector<VertexId> path;
          VertexId cur = v;
          while (cur != nb && cur != parent[cur]) {
            path.push_back(cur);
            cur = parent[cur];
          }
          if (cur != nb) continue;
          path.push_back(nb);
          if (path.size() >= 3) return path;
        }
      }
    }
  }
  return std::nullopt;
}

bool cycle_is_valid(const Graph &g, const VertexSet &sub,
                    const std::vector<VertexId> &cyc) {
  if (cyc.size() < 2) return false;
  std::set<VertexId> distinct(cyc.begin(), cyc.end());
  if (distinct.size() != cyc.size()) return false;
  for (VertexId v : cyc)
    if (!sub.contains(v) || !g.has_vertex(v)) return false;
  auto multiplicity = [&](VertexId a, VertexId b) {
    int c = 0;
    for (auto [nb, ei] : g.incident(a)) {
      (void)ei;
      if (nb == b) ++c;
    }
    return c;
  };
  if (cyc.size() == 2) return multiplicity(cyc[0], cyc[1]) >= 2;
  for (std::size_t i = 0; i < cyc.size(); ++i)
    if (multiplicity(cyc[i], cyc[(i + 1) % cyc.size()]) < 1) return false;
  return true;
}

}  // namespace

bool replay_certificate(const Graph &g, const TwCertificate &c, std::string *why) {
  auto fail = [&](const std::string &msg) {
    if (why) *why = msg;
    return false;
  };
  for (VertexId v : c.subgraph)
    if (!g.has_vertex(v)) return fail("subgraph holds unknown vertex");
  switch (c.kind) {
    case TwCertificate::Kind::cycle: {
      if (c.bound > 2) return fail("cycle certificates bound at most 2");
      if (!cycle_is_valid(g, c.subgraph, c.witness_cycle))
        return fail("cycle witness does not replay");
      return true;
    }
    case TwCertificate::Kind::exact_small: {
      if (!c.witness_set.subset_of(c.subgraph))
        return fail("witness outside the subgraph");
      Graph sub = g.induced(c.witness_set);
      int tw;
      try {
        tw = exact_treewidth(sub, 25).first;
      } catch (const SizeError &) {
        tw = exact_treewidth_bnb(sub);
      }
      if (tw < c.bound) return fail("exact witness below the claimed bound");
      return true;
    }
    case TwCertificate::Kind::well_linked: {
      if (!c.witness_set.subset_of(c.subgraph))
        return fail("witness outside the subgraph");
      Graph sub = g.induced(c.subgraph);
      SolverConfig cfg;
      auto check = check_alpha_well_linked(sub, c.witness_set, c.alpha, cfg);
      if (!check.pass) return fail("well-linkedness violated on replay");
      int delta = std::max(1, sub.max_degree());
      int bound = tw_lower_bound_from_well_linked(
          static_cast<long long>(c.witness_set.size()), c.alpha, delta);
      if (bound < c.bound) return fail("lower-bound arithmetic below the claim");
      return true;
    }
  }
  return fail("unknown certificate kind");
}

std::optional<TwCertificate> certify_tw_at_least(const Graph &g,
                                                 const VertexSet &sub, int r,
                                                 const SolverConfig &cfg) {
  TwCertificate cert;
  cert.subgraph = sub;
  if (r <= 0) {
    cert.kind = TwCertificate::Kind::exact_small;
    cert.bound = 0;
    cert.witness_set = sub.empty() ? sub : VertexSet{sub.ids().front()};
    return cert;
  }
  Graph s = g.induced(sub).simplified();
  if (r == 1) {
    if (s.num_edges() == 0) return std::nullopt;
    Edge e = s.edges().front();
    cert.kind = TwCertificate::Kind::exact_small;
    cert.bound = 1;
    cert.witness_set = VertexSet{e.u, e.v};
    return cert;
  }
  bool fits = static_cast<int>(s.num_vertices()) <= std::min(cfg.exact_limit, 25);
  if (fits) {
    auto [tw, td] = exact_treewidth(s, cfg.exact_limit);
    (void)td;
    if (tw < r) return std::nullopt;
    cert.kind = TwCertificate::Kind::exact_small;
    cert.bound = tw;
    cert.witness_set = sub;
    return cert;
  }
  if (r == 2) {
    auto cyc = find_cycle(g, sub);
    if (!cyc) return std::nullopt;  // forest
    cert.kind = TwCertificate::Kind::cycle;
    cert.bound = 2;
    cert.witness_cycle = *cyc;
    return cert;
  }
  // r >= 3 on a large subgraph
  if (s.num_vertices() <= 32 && tw_lower_bound_mmd(s) >= r) {
    int tw = exact_treewidth_bnb(s);
    if (tw >= r) {
      cert.kind = TwCertificate::Kind::exact_small;
      cert.bound = tw;
      cert.witness_set = sub;
      return cert;
    }
  }
  if (s.connected()) {
    auto wl = find_well_linked_set(s, cfg);
    if (wl.verification == WellLinkedCertificate::Verification::exhaustive) {
      int delta = std::max(1, s.max_degree());
      int bound = tw_lower_bound_from_well_linked(
          static_cast<long long>(wl.terminal_set.size()), wl.alpha, delta);
      if (bound >= r) {
        cert.kind = TwCertificate::Kind::well_linked;
        cert.bound = bound;
        cert.witness_set = wl.terminal_set;
        cert.alpha = wl.alpha;
        cert.delta = delta;
        return cert;
      }
    }
  }
  return std::nullopt;
}

Preprocessed preprocess(const Graph &g, const PipelineConfig &cfg) {
  if (g.num_vertices() == 0) throw DomainError("preprocess: empty graph");
  Preprocessed out;
  Graph work = g;
  if (!work.connected()) {
    auto comps = work.connected_components();
    const VertexSet *best = &comps[0];
    for (const auto &c : comps)
      if (c.size() > best->size()) best = &c;
    work = work.induced(*best);
  }
  int delta = work.max_degree();
  double n = static_cast<double>(work.num_vertices());
  double cap = cfg.degree_cap > 0
                   ? static_cast<double>(cfg.degree_cap)
                   : std::pow(std::log2(std::max(4.0, n)), 3.0);
  SolverConfig scfg = cfg.solver_with_seed();

  if (delta > cap && work.num_vertices() >= 4) {
    auto cert = find_well_linked_set(work, scfg);
    int rounds =
        cfg.cmg_rounds > 0
            ? cfg.cmg_rounds
            : static_cast<int>(std::ceil(std::pow(
                  std::log2(std::max<double>(2, cert.terminal_set.size())), 2.0)));
    for (int capv = 0; capv <= (1 << 12); capv = std::max(1, 2 * capv)) {
      try {
        auto red = reduce_degree(work, cert, rounds, scfg, capv);
        if (red.reduced.num_vertices() >= 3 && red.reduced.num_edges() >= 2) {
          auto comps = red.reduced.connected_components();
          const VertexSet *best = &comps[0];
          for (const auto &c : comps)
            if (c.size() > best->size()) best = &c;
          work = red.reduced.induced(*best);
          out.degree_reduced = true;
          out.reduction_cap_used = red.vertex_cap;
        }
        break;
      } catch (const Error &) {
        // escalate the vertex cap and retry
      }
    }
  }

  out.terminals = find_well_linked_set(work, scfg);
  out.working = std::move(work);
  out.max_degree = out.working.max_degree();
  return out;
}

Clustering make_clustering(const Graph &g, std::vector<VertexSet> clusters,
                           Clustering::Mode mode) {
  Clustering c;
  c.mode = mode;
  c.contracted = contract_clustering(g, clusters,
                                     mode == Clustering::Mode::thm2
                                         ? ClusterCheck::connected
                                         : ClusterCheck::none);
  c.clusters = std::move(clusters);
  return c;
}

Clustering singleton_clustering(const Graph &g, Clustering::Mode mode) {
  std::vector<VertexSet> singles;
  for (VertexId v : g.vertex_ids()) singles.push_back(VertexSet{v});
  return make_clustering(g, std::move(singles), mode);
}

namespace {

long long thm1_r_prime(const Graph &work, int r, const PipelineConfig &cfg,
                       long long k) {
  if (cfg.r_prime_override > 0) return cfg.r_prime_override;
  long long delta = std::max(1, work.max_degree());
  if (cfg.faithful_constants) {
    double logk = std::log2(std::max<double>(2, static_cast<double>(k)));
    double v = delta * delta * static_cast<double>(r) * std::pow(logk, 11.0);
    return static_cast<long long>(std::min(v, 1e15));
  }
  return std::max(delta + 1, delta * static_cast<long long>(r));
}

long long thm2_r_prime(const Graph &work, int r, int h, const PipelineConfig &cfg) {
  if (cfg.r_prime_override > 0) return cfg.r_prime_override;
  long long delta = std::max(1, work.max_degree());
  double v = 1048576.0 * r * delta * delta * h * cfg.solver.arv_factor;
  return static_cast<long long>(std::min(v, 1e15));
}

Rat effective_alpha_wl(const PipelineConfig &cfg, long long k, long long k_prime) {
  double arv = cfg.solver.arv_factor;
  double base = cfg.alpha_wl.num > 0
                    ? cfg.alpha_wl.value()
                    : 1.0 / (256.0 * arv *
                             std::log2(std::max<double>(2, static_cast<double>(k))));
  double safe = 0.9 / (8.0 * arv *
                       std::log2(std::max<double>(2, static_cast<double>(k_prime))));
  double a = std::min(base, safe);
  long long den = std::max<long long>(2, static_cast<long long>(std::ceil(1.0 / a)));
  return Rat(1, den);
}

VertexSet boundary_endpoints(const Graph &g, const VertexSet &cluster) {
  std::vector<VertexId> ids;
  for (const Edge &e : out_edges(g, cluster))
    ids.push_back(cluster.contains(e.u) ? e.u : e.v);
  return VertexSet(ids);
}

long long terminal_mass(const VertexSet &set, const VertexSet &terminals) {
  return static_cast<long long>(set.intersect(terminals).size());
}

double conductance_estimate(const Graph &h, const SolverConfig &cfg) {
  if (h.num_edges() < 2) return 0.0;
  SolverConfig use = cfg;
  if (static_cast<int>(h.num_vertices()) > cfg.exact_limit)
    use.mode = SolverConfig::Mode::spectral;
  auto cut = min_conductance_cut(h, use);
  if (!cut || !cut->conductance) return 1.0;
  return cut->conductance->value();
}

DecompositionResult finalize_result(const Graph &g,
                                    std::vector<VertexSet> subgraphs,
                                    std::vector<TwCertificate> certs) {
  DecompositionResult res;
  VertexSet seen;
  for (const auto &s : subgraphs) {
    if (!seen.intersect(s).empty())
      throw PipelineError("result subgraphs are not disjoint (bug)");
    seen = seen.unite(s);
  }
  for (std::size_t i = 0; i < certs.size(); ++i) {
    std::string why;
    if (!replay_certificate(g, certs[i], &why))
      throw PipelineError("certificate " + std::to_string(i) +
                          " does not replay: " + why);
  }
  res.subgraphs = std::move(subgraphs);
  res.certificates = std::move(certs);
  return res;
}

}  // namespace

IterationOutcome case1_balanced_split(const Graph &g, const Preprocessed &pre,
                                      const Clustering &clustering, int h, int r,
                                      const PipelineConfig &cfg) {
  IterationOutcome out;
  out.case_taken = "case1";
  const Graph &H = clustering.contracted.graph;
  const VertexSet &T = pre.terminals.terminal_set;
  long long k = static_cast<long long>(T.size());
  long long r_prime = thm1_r_prime(pre.working, r, cfg, k);
  SolverConfig scfg = cfg.solver_with_seed();
  scfg.balance_gamma = cfg.balance_gamma;

  VertexSet Z = H.vertex_set();  // desk rule: every supernode is a mark
  std::vector<VertexSet> pieces{H.vertex_set()};
  for (int round = 0; round < h; ++round) {
    int pick = 0;
    for (int i = 1; i < static_cast<int>(pieces.size()); ++i)
      if (pieces[i].intersect(Z).size() > pieces[pick].intersect(Z).size()) pick = i;
    VertexSet s = pieces[pick];
    if (static_cast<long long>(s.intersect(Z).size()) <
        std::max(2, scfg.balance_floor))
      throw PipelineError("case1: balance floor unreachable in round " +
                          std::to_string(round));
    Cut cut;
    try {
      cut = balanced_cut(H, s, Z, scfg);
    } catch (const Error &e) {
      throw PipelineError(std::string("case1: balanced cut failed: ") + e.what());
    }
    out.events.push_back("case1 round " + std::to_string(round) + " crossing " +
                         std::to_string(cut.crossing) + " (k^2 diagnostic " +
                         std::to_string(k * k) + ")");
    pieces.erase(pieces.begin() + pick);
    pieces.push_back(cut.side_a);
    pieces.push_back(cut.side_b);
    long long need_num = cfg.balance_gamma.num * static_cast<long long>(Z.size());
    long long need_den = cfg.balance_gamma.den * 2 * h;
    for (const auto &p : pieces)
      if (static_cast<long long>(p.intersect(Z).size()) * need_den < need_num)
        throw PipelineError("case1: balance invariant violated after round " +
                            std::to_string(round));
  }

  // the piece with the terminal majority is ineligible for re-clustering
  // (its parts could not stay acceptable); success branches may still use it
  int majority = 0;
  long long best_mass = -1;
  for (int i = 0; i < static_cast<int>(pieces.size()); ++i) {
    long long mass = terminal_mass(clustering.contracted.uncontract(pieces[i]), T);
    if (mass > best_mass) {
      best_mass = mass;
      majority = i;
    }
  }

  struct PieceInfo {
    VertexSet uncontracted;
    WellLinkedDecomposition wld;
    Rat alpha{1, 2};
    bool majority = false;
  };
  std::vector<PieceInfo> infos;
  for (int i = 0; i < static_cast<int>(pieces.size()); ++i) {
    PieceInfo info;
    info.majority = (i == majority);
    info.uncontracted = clustering.contracted.uncontract(pieces[i]);
    long long kp = static_cast<long long>(out_edges(g, info.uncontracted).size());
    info.alpha = effective_alpha_wl(cfg, k, std::max<long long>(kp, 2));
    info.wld = well_linked_decomposition(g, info.uncontracted, info.alpha, scfg);
    infos.push_back(std::move(info));
  }

  // success route 1: big-boundary parts out of the decompositions, one
  // per piece, verified at r
  {
    std::vector<VertexSet> subgraphs;
    std::vector<TwCertificate> certs;
    long long delta = std::max(1, pre.working.max_degree());
    for (const auto &info : infos) {
      if (static_cast<int>(subgraphs.size()) >= h) break;
      const VertexSet *best = nullptr;
      long long best_out = -1;
      for (const auto &p : info.wld.parts) {
        long long o = static_cast<long long>(out_edges(g, p).size());
        if (o > best_out) {
          best_out = o;
          best = &p;
        }
      }
      if (!best || best_out < r_prime) continue;
      VertexSet gamma = boundary_endpoints(g, *best);
      if (static_cast<long long>(gamma.size()) * delta < best_out)
        throw PipelineError("case1: |Gamma| >= |out(C)|/Delta violated (bug)");
      auto cert = certify_tw_at_least(g, *best, r, scfg);
      if (!cert) continue;
      subgraphs.push_back(*best);
      certs.push_back(std::move(*cert));
    }
    if (static_cast<int>(subgraphs.size()) >= h) {
      subgraphs.resize(h);
      certs.resize(h);
      out.result = finalize_result(g, std::move(subgraphs), std::move(certs));
      out.events.push_back("case1: success via boundary-heavy parts");
      return out;
    }
  }

  // success route 2: whole pieces verified directly
  {
    std::vector<VertexSet> subgraphs;
    std::vector<TwCertificate> certs;
    for (const auto &info : infos) {
      if (static_cast<int>(subgraphs.size()) >= h) break;
      auto cert = certify_tw_at_least(g, info.uncontracted, r, scfg);
      if (!cert) continue;
      subgraphs.push_back(info.uncontracted);
      certs.push_back(std::move(*cert));
    }
    if (static_cast<int>(subgraphs.size()) >= h) {
      subgraphs.resize(h);
      certs.resize(h);
      out.result = finalize_result(g, std::move(subgraphs), std::move(certs));
      out.events.push_back("case1: success by direct piece verification");
      return out;
    }
  }

  // re-cluster branch: a non-majority piece whose parts all stay below r'
  for (const auto &info : infos) {
    if (info.majority) continue;
    long long max_out = 0;
    for (const auto &p : info.wld.parts)
      max_out =
          std::max(max_out, static_cast<long long>(out_edges(g, p).size()));
    if (max_out >= r_prime) continue;
    std::vector<VertexSet> next;
    for (const auto &c : clustering.clusters)
      if (c.intersect(info.uncontracted).empty()) next.push_back(c);
    for (const auto &p : info.wld.parts) {
      if (static_cast<long long>(out_edges(g, p).size()) > r_prime)
        throw PipelineError("case1: re-clustered part exceeds r' (bug)");
      next.push_back(p);
    }
    Clustering nc = make_clustering(g, std::move(next), clustering.mode);
    if (nc.phi() <= clustering.phi() - 1) {
      out.events.push_back("case1: re-clustered, phi " +
                           std::to_string(clustering.phi()) + " -> " +
                           std::to_string(nc.phi()));
      out.next = std::move(nc);
      return out;
    }
    out.events.push_back("case1: re-cluster candidate did not drop phi");
  }
  throw PipelineError("case1: no certified success and no phi-decreasing "
                      "re-cluster");
}

EmbedOutcome embed_expander_witness(const Graph &g, const ContractedGraph &ctx,
                                    const Graph &h_part, int r,
                                    const PipelineConfig &cfg) {
  if (h_part.num_edges() < 1)
    throw PreconditionError("embed_expander_witness: empty part");
  SolverConfig scfg = cfg.solver_with_seed();
  EmbedOutcome out;

  auto split = split_vertices(h_part, mix_seed(cfg.seed, 11));
  int n2 = static_cast<int>(split.graph.num_vertices());
  int r2 = cfg.r_dprime_override > 0 ? cfg.r_dprime_override
                                     : std::min(n2, std::max(4, 2 * (r + 1)));
  if (r2 > n2)
    throw PreconditionError("embed_expander_witness: r'' = " + std::to_string(r2) +
                            " exceeds |V(H'')| = " + std::to_string(n2));
  out.expander_size = r2;

  ExpanderWitness host;
  host.graph = split.graph;
  if (n2 <= scfg.exact_limit + 2) {
    host.expansion = exact_edge_expansion(host.graph, scfg.exact_limit + 2).first;
    host.verification = ExpanderWitness::Verification::exhaustive;
  } else {
    host.expansion = spectral_expansion_lower_bound(host.graph, scfg);
    host.verification = ExpanderWitness::Verification::spectral;
    if (host.expansion.num == 0)
      host.expansion = Rat(1, std::max<long long>(4, n2));  // cap sizing only
  }

  // Gamma': spread over distinct part vertices first (so the touched set
  // spans several of them), staying inside a BFS ball for locality
  std::vector<VertexId> gamma_prime;
  {
    std::vector<VertexId> owner_order;
    std::vector<char> seen(h_part.num_vertices(), 0);
    std::vector<int> q{0};
    seen[0] = 1;
    for (std::size_t qi = 0; qi < q.size(); ++qi) {
      int i = q[qi];
      owner_order.push_back(h_part.id_at(i));
      for (auto [nb, ei] : h_part.incident(h_part.id_at(i))) {
        (void)ei;
        int ni = h_part.index_of(nb);
        if (!seen[ni]) {
          seen[ni] = 1;
          q.push_back(ni);
        }
      }
    }
    std::map<VertexId, std::vector<VertexId>> members_of;
    for (const auto &[v, members] : split.mapping)
      members_of[v] = members.ids();
    for (std::size_t round = 0;
         static_cast<int>(gamma_prime.size()) < r2; ++round) {
      bool advanced = false;
      for (VertexId owner : owner_order) {
        if (static_cast<int>(gamma_prime.size()) >= r2) break;
        const auto &mem = members_of[owner];
        if (round < mem.size()) {
          gamma_prime.push_back(mem[round]);
          advanced = true;
        }
      }
      if (!advanced) break;
    }
    if (static_cast<int>(gamma_prime.size()) < r2)
      throw PreconditionError(
          "embed_expander_witness: part component smaller than r''");
  }

  auto xprime = build_small_expander(r2, Rat(1, 8), mix_seed(cfg.seed, 13));
  std::vector<Matching> matchings;
  {
    std::map<VertexId, std::set<int>> used;
    for (const Edge &e : xprime.graph.sorted_edges()) {
      int color = 0;
      while (used[e.u].count(color) || used[e.v].count(color)) ++color;
      if (color >= static_cast<int>(matchings.size())) matchings.resize(color + 1);
      used[e.u].insert(color);
      used[e.v].insert(color);
      matchings[color].emplace_back(e.u, e.v);
    }
    if (matchings.size() > 5)
      throw PipelineError("embed: greedy coloring exceeded 5 matchings (bug)");
  }
  std::vector<Matching> mapped;
  for (const Matching &m : matchings) {
    Matching mm;
    for (auto [a, b] : m)
      mm.emplace_back(gamma_prime[xprime.graph.index_of(a)],
                      gamma_prime[xprime.graph.index_of(b)]);
    mapped.push_back(mm);
  }
  RoutingCaps caps;
  caps.c_len = cfg.c_len;
  caps.c_cong = cfg.c_cong;
  caps.retries = cfg.retry_budget;
  out.embedding =
      route_matchings_short_paths(host, mapped, caps, mix_seed(cfg.seed, 17));

  std::map<VertexId, VertexId> owner;
  for (const auto &[v, members] : split.mapping)
    for (VertexId m : members) owner[m] = v;
  std::vector<VertexId> touched;
  for (const auto &[e, p] : out.embedding.paths)
    for (VertexId v : p) touched.push_back(owner.at(v));
  out.supernodes = VertexSet(touched);
  out.subgraph = ctx.uncontract(out.supernodes);

  auto cert = certify_tw_at_least(g, out.subgraph, r, scfg);
  if (!cert)
    throw PipelineError(
        "embed_expander_witness: extracted subgraph failed verification at r = " +
        std::to_string(r));
  out.certificate = std::move(*cert);
  return out;
}

IterationOutcome case2_expander_pack(const Graph &g, const Preprocessed &pre,
                                     const Clustering &clustering, int h, int r,
                                     const PipelineConfig &cfg) {
  IterationOutcome out;
  out.case_taken = "case2";
  const Graph &H = clustering.contracted.graph;
  const VertexSet &T = pre.terminals.terminal_set;
  long long k = static_cast<long long>(T.size());
  long long r_prime = thm1_r_prime(pre.working, r, cfg, k);
  SolverConfig scfg = cfg.solver_with_seed();
  if (H.num_edges() < 1) throw PipelineError("case2: contracted graph has no edges");

  auto decomp = decompose_high_conductance(H, scfg);
  struct Kept {
    VertexSet supernodes;
    long long edges;
  };
  std::vector<Kept> kept;
  std::vector<VertexSet> small_parts;
  for (const auto &p : decomp.parts) {
    long long edges = static_cast<long long>(edges_within(H, p.vertices).size());
    long long boundary = static_cast<long long>(out_edges(H, p.vertices).size());
    if (edges == 0) continue;
    if (2 * boundary >= edges) continue;  // discarded cluster
    if (edges <= 2 * r_prime)
      small_parts.push_back(p.vertices);
    else
      kept.push_back({p.vertices, edges});
  }

  for (const auto &sp : small_parts) {
    VertexSet unc = clustering.contracted.uncontract(sp);
    if (2 * terminal_mass(unc, T) > k) {
      out.events.push_back("case2: small part holds a terminal majority; skipped");
      continue;
    }
    long long kp = static_cast<long long>(out_edges(g, unc).size());
    Rat alpha = effective_alpha_wl(cfg, k, std::max<long long>(kp, 2));
    auto wld = well_linked_decomposition(g, unc, alpha, scfg);
    std::vector<VertexSet> next;
    for (const auto &c : clustering.clusters)
      if (c.intersect(unc).empty()) next.push_back(c);
    for (const auto &p : wld.parts) next.push_back(p);
    Clustering nc = make_clustering(g, std::move(next), clustering.mode);
    if (nc.phi() <= clustering.phi() - 1) {
      out.events.push_back("case2: re-clustered a small part, phi " +
                           std::to_string(clustering.phi()) + " -> " +
                           std::to_string(nc.phi()));
      out.next = std::move(nc);
      return out;
    }
    out.events.push_back("case2: small-part re-cluster did not drop phi");
  }
  if (kept.empty()) throw PipelineError("case2: no usable high-conductance part");

  long long total_edges = 0;
  for (const auto &kp : kept) total_edges += kp.edges;
  std::vector<int> alloc(kept.size(), 0);
  int assigned = 0;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    alloc[i] = static_cast<int>((static_cast<long long>(h) * kept[i].edges) /
                                std::max(1LL, total_edges));
    assigned += alloc[i];
  }
  for (std::size_t i = 0; assigned < h; i = (i + 1) % kept.size()) {
    alloc[i] += 1;
    ++assigned;
  }
  double alpha_star = pre.terminals.alpha.value();
  for (std::size_t i = 0; i < kept.size(); ++i) {
    double faithful_cap =
        std::ceil(6.0 * kept[i].edges * h / std::max(1e-9, alpha_star * k));
    out.events.push_back("case2: part " + std::to_string(i) + " h_i=" +
                         std::to_string(alloc[i]) + " (faithful cap " +
                         std::to_string(static_cast<long long>(faithful_cap)) + ")");
  }

  std::vector<VertexSet> subgraphs;
  std::vector<TwCertificate> certs;
  for (std::size_t i = 0;
       i < kept.size() && static_cast<int>(subgraphs.size()) < h; ++i) {
    VertexSet remaining = kept[i].supernodes;
    long long removed_degree_sum = 0;
    double gamma = std::min(0.1, decomp.threshold.value());
    for (int j = 0; j < alloc[i]; ++j) {
      Graph part = H.induced(remaining);
      if (part.num_edges() < 1) break;
      PipelineConfig ecfg = cfg;
      ecfg.seed = mix_seed(cfg.seed, 1000 + 31 * i + j);
      EmbedOutcome emb;
      try {
        emb = embed_expander_witness(g, clustering.contracted, part, r, ecfg);
      } catch (const Error &e) {
        out.events.push_back(std::string("case2: embedding stopped: ") + e.what());
        break;
      }
      subgraphs.push_back(emb.subgraph);
      certs.push_back(emb.certificate);
      for (VertexId v : emb.supernodes) removed_degree_sum += H.degree(v);
      double budget = gamma * kept[i].edges / 8.0;
      bool within = static_cast<double>(removed_degree_sum) <= budget;
      out.events.push_back(
          "case2: degree-sum budget " + std::to_string(removed_degree_sum) +
          " vs gamma*m_i/8 = " + std::to_string(budget) +
          (within ? " (ok)" : " (exceeded, diagnostic)"));
      if (cfg.faithful_constants && !within)
        throw PipelineError("case2: faithful-mode degree-sum budget exceeded");
      remaining = remaining.minus(emb.supernodes);
      if (static_cast<int>(subgraphs.size()) >= h) break;
      Graph next_part = H.induced(remaining);
      if (next_part.num_edges() < 1) break;
      double est = conductance_estimate(next_part, scfg);
      if (est < decomp.threshold.value() / 4.0) {
        long long gnum = std::max<long long>(1, static_cast<long long>(gamma * 10240));
        auto trim = trim_after_removal(part, emb.supernodes, Rat(gnum, 10240), scfg);
        remaining = trim.kept;
        out.events.push_back("case2: trimmed to " + std::to_string(trim.edges_kept) +
                             " edges");
      }
    }
  }
  if (static_cast<int>(subgraphs.size()) < h) {
    std::string detail;
    for (const auto &ev : out.events) detail += "; " + ev;
    throw PipelineError("case2: extracted only " +
                        std::to_string(subgraphs.size()) + " of " +
                        std::to_string(h) + " subgraphs" + detail);
  }
  subgraphs.resize(h);
  certs.resize(h);
  out.result = finalize_result(g, std::move(subgraphs), std::move(certs));
  out.events.push_back("case2: success");
  return out;
}

IterationOutcome iteration_thm1(const Graph &g, const Preprocessed &pre,
                                const Clustering &clustering, int h, int r,
                                const PipelineConfig &cfg) {
  const Graph &H = clustering.contracted.graph;
  long long k = static_cast<long long>(pre.terminals.terminal_set.size());
  bool pick_case1 = true;
  switch (cfg.case_rule) {
    case PipelineConfig::CaseRule::auto_conductance:
      pick_case1 =
          conductance_estimate(H, cfg.solver_with_seed()) < cfg.case_psi_threshold;
      break;
    case PipelineConfig::CaseRule::beta_k2:
      pick_case1 = static_cast<double>(H.num_vertices()) >= cfg.beta_case * k * k;
      break;
    case PipelineConfig::CaseRule::n_at_least_k5:
      pick_case1 =
          static_cast<double>(H.num_vertices()) >= std::pow(static_cast<double>(k), 5.0);
      break;
  }
  auto run = [&](bool case1) {
    return case1 ? case1_balanced_split(g, pre, clustering, h, r, cfg)
                 : case2_expander_pack(g, pre, clustering, h, r, cfg);
  };
  try {
    return run(pick_case1);
  } catch (const Error &primary) {
    try {
      IterationOutcome fallback = run(!pick_case1);
      fallback.events.push_back(std::string("primary case failed: ") +
                                primary.what());
      return fallback;
    } catch (const Error &secondary) {
      // last resort: contract one edge of H into an acceptable merged
      // cluster; always drops phi by at least the edge multiplicity
      long long k2 = static_cast<long long>(pre.terminals.terminal_set.size());
      long long r_prime = thm1_r_prime(pre.working, r, cfg, k2);
      SolverConfig scfg = cfg.solver_with_seed();
      auto hedges = H.sorted_edges();
      hedges.erase(std::unique(hedges.begin(), hedges.end()), hedges.end());
      for (const Edge &e : hedges) {
        VertexSet merged = clustering.contracted.cluster_of(e.u).unite(
            clustering.contracted.cluster_of(e.v));
        if (static_cast<long long>(out_edges(g, merged).size()) > r_prime) continue;
        if (2 * terminal_mass(merged, pre.terminals.terminal_set) > k2) continue;
        if (clustering.mode == Clustering::Mode::thm1 &&
            static_cast<int>(merged.size()) <= scfg.exact_limit) {
          long long kp = static_cast<long long>(out_edges(g, merged).size());
          Rat a = effective_alpha_wl(cfg, k2, std::max<long long>(kp, 2));
          if (!check_alpha_good(g, merged, a, scfg).pass) continue;
        }
        std::vector<VertexSet> next;
        for (const auto &c : clustering.clusters)
          if (c.intersect(merged).empty()) next.push_back(c);
        next.push_back(merged);
        Clustering nc = make_clustering(g, std::move(next), clustering.mode);
        if (nc.phi() > clustering.phi() - 1) continue;
        IterationOutcome out;
        out.case_taken = "merge-fallback";
        out.events.push_back(std::string("both cases failed (") + primary.what() +
                             "; " + secondary.what() +
                             "); merged one contracted edge");
        out.next = std::move(nc);
        return out;
      }
      throw PipelineError(std::string("iteration failed; ") + primary.what() +
                          "; fallback: " + secondary.what());
    }
  }
}

namespace {

void feasibility_gate(const Graph &work, int h, int r, const PipelineConfig &cfg) {
  if (h < 1 || r < 1) throw ParameterError("h and r must be positive");
  auto [ub, td] = tw_upper_bound(work, EliminationHeuristic::min_fill);
  (void)td;
  if (static_cast<double>(h) * r > cfg.gate_slack * std::max(1, ub))
    throw ParameterError("infeasible parameters: h*r = " +
                         std::to_string(static_cast<long long>(h) * r) +
                         " exceeds the treewidth upper bound " + std::to_string(ub));
}

void phi_floor_check(const Preprocessed &pre, const Clustering &c,
                     RunTrace &trace) {
  double alpha = pre.terminals.alpha.value();
  double k = static_cast<double>(pre.terminals.terminal_set.size());
  double bound = alpha * k / 3.0;
  bool holds = static_cast<double>(c.phi()) >= bound - 1e-9;
  if (pre.terminals.verification ==
          WellLinkedCertificate::Verification::exhaustive &&
      !holds)
    throw PipelineError("phi(C) >= alpha* k/3 violated with an exhaustively "
                        "verified terminal set (bug)");
  if (!holds)
    trace.events.push_back("phi >= alpha*k/3 not confirmed (sampled alpha)");
}

}  // namespace

DecompositionResult decompose_thm1(const Graph &g, int h, int r,
                                   const PipelineConfig &cfg,
                                   RunTrace *trace_out) {
  if (!g.connected()) throw DomainError("decompose_thm1: graph must be connected");
  Preprocessed pre = preprocess(g, cfg);
  feasibility_gate(pre.working, h, r, cfg);
  SolverConfig scfg = cfg.solver_with_seed();

  RunTrace trace;
  if (h == 1) {
    auto cert = certify_tw_at_least(pre.working, pre.working.vertex_set(), r, scfg);
    if (cert) {
      DecompositionResult res = finalize_result(
          pre.working, {pre.working.vertex_set()}, {std::move(*cert)});
      res.trace = std::move(trace);
      res.trace.events.push_back("h=1: whole working graph certified");
      res.trace.case_path.push_back("trivial");
      return res;
    }
  }

  Clustering c = singleton_clustering(pre.working, Clustering::Mode::thm1);
  long long budget = static_cast<long long>(pre.working.num_edges()) + 1;
  for (long long it = 0; it < budget; ++it) {
    trace.iterations = static_cast<int>(it + 1);
    trace.phi_history.push_back(c.phi());
    phi_floor_check(pre, c, trace);
    IterationOutcome step;
    try {
      step = iteration_thm1(pre.working, pre, c, h, r, cfg);
    } catch (const Error &e) {
      if (trace_out) *trace_out = trace;
      throw PipelineError("decompose_thm1: iteration " + std::to_string(it) +
                          " failed: " + e.what());
    }
    trace.case_path.push_back(step.case_taken);
    for (auto &ev : step.events) trace.events.push_back(ev);
    if (step.result) {
      step.result->trace = std::move(trace);
      if (trace_out) *trace_out = step.result->trace;
      return std::move(*step.result);
    }
    if (step.next->phi() > c.phi() - 1) {
      if (trace_out) *trace_out = trace;
      throw PipelineError("decompose_thm1: phi did not strictly decrease (bug)");
    }
    c = std::move(*step.next);
  }
  if (trace_out) *trace_out = trace;
  throw PipelineError("decompose_thm1: iteration budget |E| exhausted");
}

DecompositionResult decompose_thm2(const Graph &g, int h, int r,
                                   const PipelineConfig &cfg,
                                   RunTrace *trace_out) {
  if (!g.connected()) throw DomainError("decompose_thm2: graph must be connected");
  Preprocessed pre = preprocess(g, cfg);
  feasibility_gate(pre.working, h, r, cfg);
  SolverConfig scfg = cfg.solver_with_seed();
  const VertexSet &T = pre.terminals.terminal_set;
  long long k = static_cast<long long>(T.size());
  long long r_prime = thm2_r_prime(pre.working, r, h, cfg);
  long long delta = std::max(1, pre.working.max_degree());
  Rat gamma = Rat(6 * delta * delta * r, r_prime);
  if (Rat(1, 1) < gamma) gamma = Rat(1, 1);

  RunTrace trace;
  std::mt19937_64 rng(mix_seed(cfg.seed, 77));
  Clustering c = singleton_clustering(pre.working, Clustering::Mode::thm2);
  long long budget = static_cast<long long>(pre.working.num_edges()) + 1;

  for (long long it = 0; it < budget; ++it) {
    trace.iterations = static_cast<int>(it + 1);
    trace.phi_history.push_back(c.phi());
    phi_floor_check(pre, c, trace);
    const Graph &H = c.contracted.graph;
    long long m = static_cast<long long>(H.num_edges());
    if (m < 1)
      throw PipelineError("decompose_thm2: contracted graph ran out of edges");

    std::vector<VertexSet> parts;
    bool sampled_ok = false;
    for (int attempt = 0; attempt < cfg.resample_budget; ++attempt) {
      std::uniform_int_distribution<int> pick(0, h);
      std::vector<std::vector<VertexId>> buckets(h + 1);
      for (VertexId v : H.vertex_ids()) buckets[pick(rng)].push_back(v);
      std::vector<VertexSet> cand;
      for (auto &b : buckets) cand.emplace_back(b);
      bool ok = true;
      for (const auto &p : cand) {
        long long outp = static_cast<long long>(out_edges(H, p).size());
        long long inp = static_cast<long long>(edges_within(H, p).size());
        // accept only when |out| < 16m/h and |E| >= m/(8h^2) hold
        if (!(outp * h < 16 * m) || !(inp * 8 * h * h >= m)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        parts = std::move(cand);
        sampled_ok = true;
        break;
      }
      ++trace.resamples;
    }
    if (!sampled_ok) {
      if (trace_out) *trace_out = trace;
      throw PipelineError(
          "decompose_thm2: random partition resample budget exhausted");
    }

    int drop = static_cast<int>(parts.size()) - 1;
    for (int i = 0; i < static_cast<int>(parts.size()); ++i)
      if (2 * terminal_mass(c.contracted.uncontract(parts[i]), T) > k) drop = i;
    parts.erase(parts.begin() + drop);

    std::vector<VertexSet> subgraphs;
    std::vector<TwCertificate> certs;
    std::optional<VertexSet> recluster_part;
    for (const auto &p : parts) {
      VertexSet unc = c.contracted.uncontract(p);
      auto cert = certify_tw_at_least(pre.working, unc, r, scfg);
      if (cert) {
        subgraphs.push_back(unc);
        certs.push_back(std::move(*cert));
        continue;
      }
      // split clusters with a large boundary until some boundary set
      // certifies as gamma-well-linked or everything is small
      std::vector<VertexSet> wj{unc};
      std::optional<TwCertificate> found;
      bool progressed = true;
      while (progressed && !found) {
        progressed = false;
        for (std::size_t ci = 0; ci < wj.size(); ++ci) {
          auto boundary = out_edges(pre.working, wj[ci]);
          if (static_cast<long long>(boundary.size()) < r_prime) continue;
          std::vector<Edge> gamma_edges(
              boundary.begin(),
              boundary.begin() + static_cast<std::ptrdiff_t>(r_prime));
          VertexId next_id = 0;
          for (VertexId v : pre.working.vertex_ids())
            next_id = std::max(next_id, v + 1);
          std::vector<VertexId> vs = wj[ci].ids();
          std::vector<Edge> es = edges_within(pre.working, wj[ci]);
          std::vector<VertexId> terms;
          for (const Edge &e : gamma_edges) {
            VertexId te = next_id++;
            VertexId inner = wj[ci].contains(e.u) ? e.u : e.v;
            vs.push_back(te);
            es.emplace_back(inner, te);
            terms.push_back(te);
          }
          Graph inst(vs, es);
          Cut cut = sparsest_cut(inst, VertexSet(terms), scfg);
          bool sparse = cut.sparsity &&
                        cut.sparsity->value() < gamma.value() * scfg.arv_factor;
          if (!sparse) {
            std::vector<VertexId> endpoints;
            for (const Edge &e : gamma_edges)
              endpoints.push_back(wj[ci].contains(e.u) ? e.u : e.v);
            TwCertificate wl;
            wl.kind = TwCertificate::Kind::well_linked;
            wl.subgraph = unc;
            wl.witness_set = VertexSet(endpoints);
            wl.alpha = gamma;
            wl.delta = static_cast<int>(delta);
            wl.bound = tw_lower_bound_from_well_linked(
                static_cast<long long>(wl.witness_set.size()), gamma,
                static_cast<int>(delta));
            if (wl.bound >= r) found = wl;
            break;
          }
          VertexSet a = cut.side_a.intersect(wj[ci]);
          VertexSet b = wj[ci].minus(a);
          if (a.empty() || b.empty()) continue;
          wj.erase(wj.begin() + static_cast<std::ptrdiff_t>(ci));
          wj.push_back(a);
          wj.push_back(b);
          progressed = true;
          break;
        }
      }
      if (found) {
        subgraphs.push_back(unc);
        certs.push_back(std::move(*found));
      } else if (!recluster_part) {
        recluster_part = unc;
      }
    }

    if (static_cast<int>(subgraphs.size()) == h) {
      DecompositionResult res =
          finalize_result(pre.working, std::move(subgraphs), std::move(certs));
      trace.case_path.push_back("thm2");
      res.trace = std::move(trace);
      if (trace_out) *trace_out = res.trace;
      return res;
    }
    if (!recluster_part) {
      if (trace_out) *trace_out = trace;
      throw PipelineError(
          "decompose_thm2: no certified parts and no re-cluster candidate");
    }
    std::vector<VertexSet> next;
    for (const auto &cl : c.clusters)
      if (cl.intersect(*recluster_part).empty()) next.push_back(cl);
    for (auto &comp : pre.working.components_within(*recluster_part))
      next.push_back(std::move(comp));
    Clustering nc =
        make_clustering(pre.working, std::move(next), Clustering::Mode::thm2);
    if (nc.phi() > c.phi() - 1) {
      if (trace_out) *trace_out = trace;
      throw PipelineError("decompose_thm2: phi did not strictly decrease");
    }
    trace.case_path.push_back("thm2-recluster");
    trace.events.push_back("re-clustered, phi " + std::to_string(c.phi()) +
                           " -> " + std::to_string(nc.phi()));
    c = std::move(nc);
  }
  if (trace_out) *trace_out = trace;
  throw PipelineError("decompose_thm2: iteration budget |E| exhausted");
}

}  // namespace twd
