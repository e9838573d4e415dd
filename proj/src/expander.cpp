#include "twd/expander.hpp"

#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "twd/flow.hpp"

namespace twd {

std::pair<Rat, VertexSet> exact_edge_expansion(const Graph &g, int exact_limit) {
  int n = static_cast<int>(g.num_vertices());
  if (n > exact_limit) throw SizeError("exact_edge_expansion: too many vertices");
  if (n < 2) return {Rat(1, 1), {}};
  std::vector<std::vector<int>> back(n);
  for (const Edge &e : g.edges()) {
    int iu = g.index_of(e.u), iv = g.index_of(e.v);
    back[std::max(iu, iv)].push_back(std::min(iu, iv));
  }
  std::vector<char> side(n, 0);
  std::optional<Rat> best;
  std::vector<char> best_side;
  long long cross = 0, na = 0;
  auto rec = [&](auto &&self, int i) -> void {
    if (i == n) {
      long long nb = n - na;
      if (na < 1 || nb < 1) return;
      Rat val(cross, std::min(na, nb));
      if (!best || val < *best) {
        best = val;
        best_side = side;
      }
      return;
    }
    for (char s : {char(1), char(0)}) {
      if (i == 0 && s == 0) continue;
      long long diff = 0;
      for (int j : back[i]) diff += (side[j] != s);
      side[i] = s;
      cross += diff;
      na += s;
      self(self, i + 1);
      cross -= diff;
      na -= s;
    }
  };
  rec(rec, 0);
  std::vector<VertexId> ids;
  for (int i = 0; i < n; ++i)
    if (best_side[i]) ids.push_back(g.id_at(i));
  return {*best, VertexSet(ids)};
}

Rat spectral_expansion_lower_bound(const Graph &g, const SolverConfig &cfg) {
  int n = static_cast<int>(g.num_vertices());
  if (n < 2 || g.num_edges() == 0) return Rat(0, 1);
  // Rayleigh quotient of the converged Fiedler direction gives mu of the
  // lazy walk; lambda2 = 2(1-mu). Cheeger: conductance >= lambda2/2, and
  // expansion >= d_min * conductance. The 0.9 factor absorbs the remaining
  // iteration error.
  auto emb = fiedler_embedding(g, cfg);
  std::vector<double> x(n), sq(n);
  double nrm = 0;
  for (int i = 0; i < n; ++i) {
    sq[i] = std::sqrt(std::max<double>(1, g.incident(g.id_at(i)).size()));
    x[i] = emb[i] * sq[i];
    nrm += x[i] * x[i];
  }
  nrm = std::sqrt(std::max(nrm, 1e-12));
  for (auto &v : x) v /= nrm;
  double mu = 0;
  for (int i = 0; i < n; ++i) {
    double acc = 0.5 * x[i];
    for (auto [nbv, ei] : g.incident(g.id_at(i))) {
      (void)ei;
      int j = g.index_of(nbv);
      acc += 0.5 * x[j] / (sq[i] * sq[j]);
    }
    mu += x[i] * acc;
  }
  double lambda2 = std::max(0.0, 2.0 * (1.0 - mu));
  int dmin = g.degree(g.id_at(0));
  for (VertexId v : g.vertex_ids()) dmin = std::min(dmin, g.degree(v));
  double bound = 0.9 * dmin * lambda2 / 2.0;
  long long num = static_cast<long long>(std::floor(bound * 4096.0));
  return Rat(std::max<long long>(0, num), 4096);
}

namespace {

ExpanderWitness finish_witness(Graph g, ExpanderWitness::Kind kind,
                               int exact_limit, const SolverConfig &cfg) {
  ExpanderWitness w;
  w.kind = kind;
  if (static_cast<int>(g.num_vertices()) <= exact_limit) {
    w.expansion = exact_edge_expansion(g, exact_limit).first;
    w.verification = ExpanderWitness::Verification::exhaustive;
  } else {
    w.expansion = spectral_expansion_lower_bound(g, cfg);
    w.verification = ExpanderWitness::Verification::spectral;
  }
  w.graph = std::move(g);
  return w;
}

/// KRV cut player: random projection through the matchings played so far,
/// median split.
std::pair<std::vector<VertexId>, std::vector<VertexId>> cut_player_halves(
    const std::vector<VertexId> &ids, const std::vector<Matching> &history,
    std::mt19937_64 &rng) {
  int n = static_cast<int>(ids.size());
  std::normal_distribution<double> normal(0, 1);
  std::vector<double> u(n);
  for (auto &v : u) v = normal(rng);
  auto pos_of = [&](VertexId v) {
    return static_cast<int>(std::lower_bound(ids.begin(), ids.end(), v) -
                            ids.begin());
  };
  for (const Matching &m : history)
    for (auto [a, b] : m) {
      int ia = pos_of(a), ib = pos_of(b);
      double avg = 0.5 * (u[ia] + u[ib]);
      u[ia] = u[ib] = avg;
    }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return u[i] < u[j]; });
  std::vector<VertexId> y, z;
  for (int i = 0; i < n / 2; ++i) y.push_back(ids[order[i]]);
  for (int i = n / 2; i < n; ++i) z.push_back(ids[order[i]]);
  std::sort(y.begin(), y.end());
  std::sort(z.begin(), z.end());
  return {y, z};
}

void validate_matching(const Matching &m, const std::vector<VertexId> &y,
                       const std::vector<VertexId> &z) {
  if (m.size() != y.size())
    throw ProtocolError("matching oracle: wrong matching size");
  std::set<VertexId> ys(y.begin(), y.end()), zs(z.begin(), z.end()), seen;
  for (auto [a, b] : m) {
    bool ok = (ys.count(a) && zs.count(b)) || (ys.count(b) && zs.count(a));
    if (!ok) throw ProtocolError("matching oracle: pair not across the halves");
    if (!seen.insert(a).second || !seen.insert(b).second)
      throw ProtocolError("matching oracle: vertex matched twice");
  }
}

}  // namespace

ExpanderWitness cut_matching_game(int n, int rounds, std::uint64_t seed,
                                  const MatchingOracle &oracle, int exact_limit) {
  if (n < 2 || n % 2 != 0)
    throw PreconditionError("cut_matching_game: n must be even and >= 2");
  if (rounds < 1) throw PreconditionError("cut_matching_game: rounds must be >= 1");
  std::vector<VertexId> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::mt19937_64 rng(seed ^ 0xc3a7u);

  std::vector<Matching> history;
  std::vector<Edge> edges;
  for (int r = 0; r < rounds; ++r) {
    auto [y, z] = cut_player_halves(ids, history, rng);
    Matching m;
    if (oracle) {
      m = oracle(y, z);
      validate_matching(m, y, z);
    } else {
      for (std::size_t i = 0; i < y.size(); ++i) m.emplace_back(y[i], z[i]);
    }
    for (auto [a, b] : m) edges.emplace_back(a, b);
    history.push_back(std::move(m));
  }
  SolverConfig cfg;
  cfg.seed = seed;
  return finish_witness(Graph(ids, edges),
                        ExpanderWitness::Kind::union_of_matchings, exact_limit, cfg);
}

ExpanderWitness build_small_expander(int n, const Rat &target_alpha,
                                     std::uint64_t seed, int retry_budget,
                                     int exact_limit) {
  if (n < 1) throw PreconditionError("build_small_expander: n must be positive");
  SolverConfig cfg;
  cfg.seed = seed;
  if (n < 4)
    return finish_witness(make_complete(n), ExpanderWitness::Kind::edge_expander,
                          exact_limit, cfg);
  std::mt19937_64 rng(seed ^ 0xe4bu);
  Rat best_seen(0, 1);
  for (int attempt = 0; attempt < retry_budget; ++attempt) {
    // shuffled cycle plus (near-)perfect matching: (near-)3-regular
    std::vector<VertexId> perm(n), perm2(n), ids(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::iota(perm2.begin(), perm2.end(), 0);
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::shuffle(perm2.begin(), perm2.end(), rng);
    std::vector<Edge> es;
    for (int i = 0; i < n; ++i) es.emplace_back(perm[i], perm[(i + 1) % n]);
    for (int i = 0; i + 1 < n; i += 2) es.emplace_back(perm2[i], perm2[i + 1]);
    auto w = finish_witness(Graph(ids, es), ExpanderWitness::Kind::edge_expander,
                            exact_limit, cfg);
    if (target_alpha <= w.expansion) return w;
    if (best_seen < w.expansion) best_seen = w.expansion;
  }
  std::ostringstream msg;
  msg << "build_small_expander: target " << target_alpha.value()
      << " not reached after " << retry_budget << " attempts; best "
      << best_seen.value();
  throw Error(msg.str());
}

SplitVerticesResult split_vertices(const Graph &h, std::uint64_t seed) {
  SplitVerticesResult res;
  VertexId next = 0;
  for (VertexId v : h.vertex_ids()) next = std::max(next, v + 1);

  std::vector<VertexId> end_u(h.num_edges()), end_v(h.num_edges());
  for (std::size_t ei = 0; ei < h.num_edges(); ++ei) {
    end_u[ei] = h.edges()[ei].u;
    end_v[ei] = h.edges()[ei].v;
  }
  std::vector<Edge> new_edges;
  std::vector<VertexId> new_vertices;

  for (VertexId v : h.vertex_ids()) {
    int d = h.degree(v);
    if (d <= 3) {
      new_vertices.push_back(v);
      res.mapping.emplace_back(v, VertexSet{v});
      continue;
    }
    auto xw = build_small_expander(d, Rat(1, 8), seed ^ (0x51ee * (v + 1)));
    std::vector<VertexId> members(d);
    for (int k = 0; k < d; ++k) members[k] = next++;
    for (const Edge &e : xw.graph.edges())
      new_edges.emplace_back(members[xw.graph.index_of(e.u)],
                             members[xw.graph.index_of(e.v)]);
    int slot = 0;
    for (auto [nb, ei] : h.incident(v)) {
      (void)nb;
      if (h.edges()[ei].u == v)
        end_u[ei] = members[slot];
      else
        end_v[ei] = members[slot];
      ++slot;
    }
    for (VertexId m : members) new_vertices.push_back(m);
    res.mapping.emplace_back(v, VertexSet(members));
  }
  for (std::size_t ei = 0; ei < h.num_edges(); ++ei) {
    new_edges.emplace_back(end_u[ei], end_v[ei]);
    res.edge_images.emplace_back(end_u[ei], end_v[ei]);
  }
  res.graph = Graph(new_vertices, new_edges);
  return res;
}

EmbeddingPaths route_matchings_short_paths(const ExpanderWitness &host,
                                           const std::vector<Matching> &matchings,
                                           const RoutingCaps &caps,
                                           std::uint64_t seed) {
  const Graph &g = host.graph;
  double alpha = host.expansion.value();
  if (!(alpha > 0))
    throw PreconditionError("route_matchings_short_paths: host expansion must be > 0");
  int n = static_cast<int>(g.num_vertices());
  double logn = std::log2(std::max(2, n));
  int dmax = g.max_degree();
  int len_cap =
      std::max(1, static_cast<int>(std::ceil(caps.c_len * dmax * logn / alpha)));
  int cong_cap = std::max(
      1, static_cast<int>(std::ceil(caps.c_cong * logn * logn * logn / alpha)));

  std::vector<std::pair<Edge, std::pair<VertexId, VertexId>>> pairs;
  for (const Matching &m : matchings)
    for (auto [a, b] : m) pairs.push_back({Edge(a, b), {a, b}});

  std::mt19937_64 rng(seed ^ 0x70a7u);
  EmbeddingPaths best;
  bool have_best = false;

  for (int attempt = 0; attempt < std::max(1, caps.retries); ++attempt) {
    std::vector<int> order(pairs.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    std::map<Edge, int> load;
    EmbeddingPaths emb;
    bool routed_all = true;
    for (int pi : order) {
      auto [edge, uv] = pairs[pi];
      std::vector<double> dist(n, std::numeric_limits<double>::infinity());
      std::vector<int> prev(n, -1);
      using Item = std::pair<double, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      int si = g.index_of(uv.first), ti = g.index_of(uv.second);
      dist[si] = 0;
      pq.push({0, si});
      while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d > dist[v]) continue;
        if (v == ti) break;
        for (auto [nb, ei] : g.incident(g.id_at(v))) {
          (void)ei;
          int nbi = g.index_of(nb);
          Edge he(g.id_at(v), nb);
          auto it = load.find(he);
          double l = it == load.end() ? 0 : it->second;
          double w = 1.0 + l * l * l;
          if (dist[v] + w < dist[nbi]) {
            dist[nbi] = dist[v] + w;
            prev[nbi] = v;
            pq.push({dist[nbi], nbi});
          }
        }
      }
      if (!std::isfinite(dist[ti])) {
        routed_all = false;
        break;
      }
      std::vector<VertexId> path;
      for (int cur = ti; cur != -1; cur = prev[cur]) path.push_back(g.id_at(cur));
      std::reverse(path.begin(), path.end());
      for (std::size_t i = 0; i + 1 < path.size(); ++i)
        load[Edge(path[i], path[i + 1])] += 1;
      emb.paths.push_back({edge, std::move(path)});
    }
    if (!routed_all) continue;
    for (const auto &[e, p] : emb.paths)
      emb.max_length = std::max(emb.max_length, static_cast<int>(p.size()) - 1);
    for (const auto &[e, l] : load)
      emb.edge_congestion = std::max(emb.edge_congestion, l);
    std::map<VertexId, int> vload;
    for (const auto &[e, p] : emb.paths)
      for (VertexId v : p) vload[v] += 1;
    for (const auto &[v, l] : vload)
      emb.vertex_congestion = std::max(emb.vertex_congestion, l);
    emb.within_caps = emb.max_length <= len_cap && emb.edge_congestion <= cong_cap;
    if (emb.within_caps) return emb;
    if (!have_best || emb.edge_congestion < best.edge_congestion) {
      best = emb;
      have_best = true;
    }
  }
  std::ostringstream msg;
  msg << "route_matchings_short_paths: caps exceeded after " << caps.retries
      << " attempts";
  if (have_best)
    msg << " (best length " << best.max_length << " vs cap " << len_cap
        << ", congestion " << best.edge_congestion << " vs cap " << cong_cap
        << ")";
  throw Error(msg.str());
}

DegreeReduction reduce_degree(const Graph &g, const WellLinkedCertificate &x,
                              int rounds, const SolverConfig &cfg,
                              int cap_override) {
  if (rounds < 0) throw PreconditionError("reduce_degree: negative rounds");
  DegreeReduction out;
  out.rounds = rounds;
  if (x.alpha.num <= 0)
    throw PreconditionError("reduce_degree: certificate alpha must be positive");
  out.vertex_cap =
      cap_override > 0
          ? cap_override
          : static_cast<int>((x.alpha.den + x.alpha.num - 1) / x.alpha.num);

  std::vector<VertexId> ids = x.terminal_set.ids();
  if (ids.size() % 2 == 1) ids.pop_back();  // drop one vertex if odd
  if (rounds == 0 || ids.size() < 2) {
    out.reduced = Graph({}, {});
    out.witness_over_x.graph = Graph(ids, {});
    out.witness_over_x.kind = ExpanderWitness::Kind::union_of_matchings;
    return out;
  }
  Graph host = g.induced(x.host);

  std::mt19937_64 rng(cfg.seed ^ 0xd290bu);
  std::vector<Matching> history;
  std::set<Edge> union_edges;
  for (int r = 0; r < rounds; ++r) {
    auto [y, z] = cut_player_halves(ids, history, rng);
    auto flow = max_flow_vertex_cap(host, VertexSet(y), VertexSet(z), out.vertex_cap);
    if (flow.value < static_cast<int>(y.size()))
      throw Error("reduce_degree: round " + std::to_string(r) +
                  " flow infeasible at vertex cap " +
                  std::to_string(out.vertex_cap) +
                  " (certificate alpha overstated)");
    Matching m;
    std::map<VertexId, int> round_cong;
    for (const auto &p : flow.paths) {
      m.emplace_back(p.front(), p.back());
      for (VertexId v : p) round_cong[v] += 1;
      for (std::size_t i = 0; i + 1 < p.size(); ++i)
        union_edges.insert(Edge(p[i], p[i + 1]));
    }
    for (const auto &[v, c] : round_cong)
      out.max_observed_round_congestion =
          std::max(out.max_observed_round_congestion, c);
    if (out.max_observed_round_congestion > out.vertex_cap)
      throw Error("reduce_degree: per-round vertex congestion exceeded the cap");
    history.push_back(std::move(m));
  }

  std::vector<VertexId> used;
  for (const Edge &e : union_edges) {
    used.push_back(e.u);
    used.push_back(e.v);
  }
  out.reduced =
      Graph(used, std::vector<Edge>(union_edges.begin(), union_edges.end()));
  if (out.reduced.num_vertices() > 0 &&
      out.reduced.max_degree() > 2 * rounds * out.vertex_cap)
    throw Error("reduce_degree: degree bound 2*rounds*ceil(1/alpha) violated");

  std::vector<Edge> wedges;
  for (const Matching &m : history)
    for (auto [a, b] : m) wedges.emplace_back(a, b);
  Graph wg(ids, wedges);
  ExpanderWitness w;
  w.kind = ExpanderWitness::Kind::union_of_matchings;
  if (static_cast<int>(wg.num_vertices()) <= 20) {
    w.expansion = exact_edge_expansion(wg, 20).first;
    w.verification = ExpanderWitness::Verification::exhaustive;
  } else {
    w.expansion = spectral_expansion_lower_bound(wg, cfg);
    w.verification = ExpanderWitness::Verification::spectral;
  }
  w.graph = std::move(wg);
  out.witness_over_x = std::move(w);
  return out;
}

}  // namespace twd
