#include "twd/report.hpp"

#include <sstream>

namespace twd {

namespace {

std::string kind_name(TwCertificate::Kind k) {
  switch (k) {
    case TwCertificate::Kind::exact_small: return "exact-small";
    case TwCertificate::Kind::cycle: return "cycle";
    case TwCertificate::Kind::well_linked: return "well-linked";
  }
  return "?";
}

TwCertificate::Kind kind_from(const std::string &s) {
  if (s == "exact-small") return TwCertificate::Kind::exact_small;
  if (s == "cycle") return TwCertificate::Kind::cycle;
  if (s == "well-linked") return TwCertificate::Kind::well_linked;
  throw DomainError("unknown certificate kind '" + s + "'");
}

ordered_json ids_json(const VertexSet &s) {
  ordered_json a = ordered_json::array();
  for (VertexId v : s) a.push_back(v);
  return a;
}

VertexSet ids_from(const ordered_json &a) {
  std::vector<VertexId> ids;
  for (const auto &v : a) ids.push_back(v.get<VertexId>());
  return VertexSet(ids);
}

}  // namespace

ordered_json certificate_to_json(const TwCertificate &c) {
  ordered_json j;
  j["kind"] = kind_name(c.kind);
  j["bound"] = c.bound;
  j["subgraph"] = ids_json(c.subgraph);
  switch (c.kind) {
    case TwCertificate::Kind::exact_small:
      j["witness"] = ids_json(c.witness_set);
      break;
    case TwCertificate::Kind::cycle: {
      ordered_json cyc = ordered_json::array();
      for (VertexId v : c.witness_cycle) cyc.push_back(v);
      j["cycle"] = cyc;
      break;
    }
    case TwCertificate::Kind::well_linked:
      j["witness"] = ids_json(c.witness_set);
      j["alpha"] = {c.alpha.num, c.alpha.den};
      j["delta"] = c.delta;
      break;
  }
  return j;
}

TwCertificate certificate_from_json(const ordered_json &j) {
  TwCertificate c;
  c.kind = kind_from(j.at("kind").get<std::string>());
  c.bound = j.at("bound").get<int>();
  c.subgraph = ids_from(j.at("subgraph"));
  if (c.kind == TwCertificate::Kind::cycle) {
    for (const auto &v : j.at("cycle")) c.witness_cycle.push_back(v.get<VertexId>());
  } else {
    c.witness_set = ids_from(j.at("witness"));
  }
  if (c.kind == TwCertificate::Kind::well_linked) {
    c.alpha = Rat(j.at("alpha")[0].get<long long>(), j.at("alpha")[1].get<long long>());
    c.delta = j.at("delta").get<int>();
  }
  return c;
}

ordered_json well_linked_certificate_to_json(const WellLinkedCertificate &c) {
  ordered_json j;
  j["terminals"] = ids_json(c.terminal_set);
  j["host"] = ids_json(c.host);
  j["alpha"] = {c.alpha.num, c.alpha.den};
  j["kind"] = c.kind == WellLinkedCertificate::Kind::edge_well_linked
                  ? "edge-well-linked"
                  : c.kind == WellLinkedCertificate::Kind::alpha_good
                        ? "alpha-good"
                        : "node-well-linked";
  j["mode"] = c.verification == WellLinkedCertificate::Verification::exhaustive
                  ? "exhaustive"
                  : "sampled";
  // FNV-1a digest over the sampled witness sides
  std::uint64_t digest = 1469598103934665603ull;
  auto mix = [&](std::uint64_t x) {
    digest ^= x;
    digest *= 1099511628211ull;
  };
  for (const auto &side : c.sampled_sides) {
    for (VertexId v : side) mix(static_cast<std::uint64_t>(v) + 1);
    mix(0);
  }
  std::ostringstream hex;
  hex << std::hex << digest;
  j["witness_digest"] = hex.str();
  j["witness_samples"] = c.sampled_sides.size();
  return j;
}

ordered_json decomposition_to_json(const DecompositionResult &res) {
  ordered_json j;
  ordered_json subs = ordered_json::array();
  for (const auto &s : res.subgraphs) subs.push_back(ids_json(s));
  j["subgraphs"] = subs;
  ordered_json certs = ordered_json::array();
  for (const auto &c : res.certificates) certs.push_back(certificate_to_json(c));
  j["certificates"] = certs;
  ordered_json phi = ordered_json::array();
  for (long long p : res.trace.phi_history) phi.push_back(p);
  j["phi_trace"] = phi;
  j["case_path"] = res.trace.case_path;
  j["iterations"] = res.trace.iterations;
  j["resamples"] = res.trace.resamples;
  j["events"] = res.trace.events;
  return j;
}

ordered_json ep_outcome_to_json(const EPOutcome &out) {
  ordered_json j;
  j["kind"] = out.branch == EPOutcome::Branch::packing ? "packing" : "cover";
  if (out.branch == EPOutcome::Branch::packing) {
    ordered_json p = ordered_json::array();
    for (const auto &cyc : out.packing) {
      ordered_json c = ordered_json::array();
      for (VertexId v : cyc) c.push_back(v);
      p.push_back(c);
    }
    j["packing"] = p;
    j["exhaustive_fallback"] = out.exhaustive_fallback;
  } else {
    j["cover"] = ids_json(out.cover);
    j["bound_rule"] = out.bound_rule;
    j["bound_value"] = out.bound_value;
  }
  return j;
}

VerifyOutcome verify_report(const Graph &g, const ordered_json &report) {
  VerifyOutcome out;
  auto complain = [&](const std::string &msg) {
    out.ok = false;
    out.problems.push_back(msg);
  };
  std::string command = report.value("command", "");
  if (command == "decompose") {
    if (report.value("outcome", "") != "success") {
      complain("report outcome is not success");
      return out;
    }
    const auto &body = report.at("result");
    int r = report.at("params").at("r").get<int>();
    std::size_t h = report.at("params").at("h").get<std::size_t>();
    const auto &subs = body.at("subgraphs");
    if (subs.size() != h) complain("subgraph count differs from h");
    VertexSet seen;
    std::vector<VertexSet> subsets;
    for (const auto &sj : subs) {
      VertexSet s = ids_from(sj);
      for (VertexId v : s)
        if (!g.has_vertex(v)) complain("subgraph vertex missing from the graph");
      if (!seen.intersect(s).empty()) complain("subgraphs overlap");
      seen = seen.unite(s);
      subsets.push_back(std::move(s));
    }
    const auto &certs = body.at("certificates");
    if (certs.size() != subs.size()) complain("certificate count differs");
    for (std::size_t i = 0; i < certs.size(); ++i) {
      TwCertificate c = certificate_from_json(certs[i]);
      if (i < subsets.size() && !(c.subgraph == subsets[i]))
        complain("certificate " + std::to_string(i) + " subgraph mismatch");
      std::string why;
      if (!replay_certificate(g, c, &why))
        complain("certificate " + std::to_string(i) + ": " + why);
      if (c.bound < r)
        complain("certificate " + std::to_string(i) + " bound below r");
    }
    const auto &phi = body.at("phi_trace");
    for (std::size_t i = 1; i < phi.size(); ++i)
      if (!(phi[i].get<long long>() < phi[i - 1].get<long long>()))
        complain("phi trace is not strictly decreasing");
  } else if (command == "ep") {
    const auto &body = report.at("result");
    int m = report.at("params").value("mod", 0);
    if (body.at("kind") == "packing") {
      VertexSet used;
      for (const auto &cj : body.at("packing")) {
        std::vector<VertexId> cyc;
        for (const auto &v : cj) cyc.push_back(v.get<VertexId>());
        VertexSet vs(cyc);
        if (vs.size() != cyc.size()) complain("packing cycle repeats a vertex");
        if (!used.intersect(vs).empty()) complain("packing cycles overlap");
        used = used.unite(vs);
        if (m >= 2 && static_cast<int>(cyc.size()) % m != 0)
          complain("packing cycle outside the family");
        if (cyc.size() == 2) {
          int mult = 0;
          for (auto [nb, ei] : g.incident(cyc[0])) {
            (void)ei;
            if (nb == cyc[1]) ++mult;
          }
          if (mult < 2) complain("2-cycle without parallel edges");
        } else if (cyc.size() < 3) {
          complain("cycle too short");
        } else {
          for (std::size_t i = 0; i < cyc.size(); ++i) {
            bool adj = false;
            for (auto [nb, ei] : g.incident(cyc[i])) {
              (void)ei;
              if (nb == cyc[(i + 1) % cyc.size()]) adj = true;
            }
            if (!adj) complain("packing cycle edge missing");
          }
        }
      }
    } else {
      VertexSet cover = ids_from(body.at("cover"));
      Graph rest = g.induced(g.vertex_set().minus(cover));
      if (has_family_cycle(rest, m))
        complain("cover leaves a family member behind");
    }
  } else {
    complain("report command '" + command + "' is not verifiable");
  }
  return out;
}

}  // namespace twd
