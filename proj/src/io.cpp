#include "twd/io.hpp"

#include <fstream>
#include <sstream>

namespace twd {

namespace {

constexpr long long kMaxVertices = 10'000'000;
constexpr long long kMaxEdges = 50'000'000;

bool split_ints(const std::string &s, std::vector<long long> &out) {
  out.clear();
  std::istringstream is(s);
  long long x;
  while (is >> x) out.push_back(x);
  std::string rest;
  return !(is.bad()) && !(is.clear(), is >> rest);
}

}  // namespace

Graph parse_graph(const std::string &text, GraphFormat fmt, bool zero_indexed) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  long long n = -1, m = -1;
  std::vector<std::pair<VertexId, VertexId>> edges;
  bool header_seen = false;
  const int base = zero_indexed ? 0 : 1;

  while (std::getline(in, line)) {
    ++lineno;
    // strip comments and blank lines
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#' || (fmt == GraphFormat::dimacs && line[first] == 'c'))
      continue;

    if (fmt == GraphFormat::dimacs) {
      std::istringstream is(line);
      std::string tag;
      is >> tag;
      if (tag == "p") {
        std::string kind;
        if (!(is >> kind >> n >> m) || n < 0 || m < 0)
          throw ParseError("malformed problem line", lineno);
        if (n > kMaxVertices || m > kMaxEdges)
          throw ParseError("graph too large", lineno);
        if (header_seen) throw ParseError("duplicate problem line", lineno);
        header_seen = true;
      } else if (tag == "e") {
        long long u, v;
        if (!(is >> u >> v)) throw ParseError("malformed edge line", lineno);
        if (!header_seen) throw ParseError("edge before problem line", lineno);
        if (u < 1 || u > n || v < 1 || v > n)
          throw ParseError("vertex out of range", lineno);
        if (u == v) throw ParseError("self-loop", lineno);
        edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
      } else {
        throw ParseError("unknown line tag '" + tag + "'", lineno);
      }
    } else {
      std::vector<long long> nums;
      if (!split_ints(line, nums)) throw ParseError("malformed line", lineno);
      if (!header_seen) {
        if (nums.size() != 2 && nums.size() != 1)
          throw ParseError("expected 'n m' header", lineno);
        n = nums[0];
        m = nums.size() == 2 ? nums[1] : 0;
        if (n < 0 || m < 0) throw ParseError("negative header value", lineno);
        if (n > kMaxVertices || m > kMaxEdges)
          throw ParseError("graph too large", lineno);
        header_seen = true;
      } else {
        if (nums.size() != 2) throw ParseError("expected 'u v' edge line", lineno);
        long long u = nums[0], v = nums[1];
        long long lo = base, hi = n - 1 + base;
        if (u < lo || u > hi || v < lo || v > hi)
          throw ParseError("vertex out of range", lineno);
        if (u == v) throw ParseError("self-loop", lineno);
        edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
      }
    }
  }
  if (!header_seen) throw ParseError("missing header", lineno == 0 ? 1 : lineno);
  if (m >= 0 && static_cast<long long>(edges.size()) != m)
    throw ParseError("edge count mismatch: header says " + std::to_string(m) +
                         ", found " + std::to_string(edges.size()),
                     lineno);

  std::vector<VertexId> vs;
  for (long long i = 0; i < n; ++i) vs.push_back(static_cast<VertexId>(i + base));
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (auto [a, b] : edges) es.emplace_back(a, b);
  return Graph(std::move(vs), std::move(es));
}

std::string write_graph(const Graph &g, GraphFormat fmt, bool zero_indexed) {
  // renumber by sorted id
  const int base = zero_indexed ? 0 : 1;
  auto num = [&](VertexId v) { return g.index_of(v) + base; };
  std::vector<std::pair<int, int>> es;
  for (const Edge &e : g.edges()) {
    int a = num(e.u), b = num(e.v);
    es.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(es.begin(), es.end());
  std::ostringstream out;
  if (fmt == GraphFormat::dimacs) {
    out << "p edge " << g.num_vertices() << " " << g.num_edges() << "\n";
    for (auto [a, b] : es) out << "e " << a << " " << b << "\n";
  } else {
    out << g.num_vertices() << " " << g.num_edges() << "\n";
    for (auto [a, b] : es) out << a << " " << b << "\n";
  }
  return out.str();
}

GraphFormat format_for_path(const std::string &path) {
  auto dot = path.find_last_of('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "col" || ext == "dimacs" || ext == "edge") return GraphFormat::dimacs;
  return GraphFormat::edgelist;
}

Graph load_graph_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_graph(ss.str(), format_for_path(path));
}

}  // namespace twd
