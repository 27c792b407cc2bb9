#include "sclab/graph_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace sclab {

namespace {

/// Splits off comments and returns the whitespace-separated fields.
std::vector<std::string> fields(const std::string& line) {
  const auto hash = line.find('#');
  std::istringstream s(hash == std::string::npos ? line : line.substr(0, hash));
  std::vector<std::string> out;
  std::string tok;
  while (s >> tok) out.push_back(tok);
  return out;
}

VertexId parse_id(const std::string& tok, std::size_t line) {
  try {
    std::size_t used = 0;
    if (!tok.empty() && tok.front() == '-') throw std::invalid_argument("negative");
    const auto v = std::stoull(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "bad vertex id '" + tok + "'");
  }
}

double parse_positive(const std::string& tok, std::size_t line, const char* what) {
  double v = 0.0;
  try {
    std::size_t used = 0;
    v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ParseError(line, std::string("bad ") + what + " '" + tok + "'");
  }
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ParseError(line, std::string(what) + " must be positive, got " + tok);
  }
  return v;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

}  // namespace

WeightedGraph read_graph(std::istream& in) {
  GraphBuilder b;
  std::set<VertexId> declared;
  std::set<std::pair<VertexId, VertexId>> seen_edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto f = fields(line);
    if (f.empty()) continue;
    if (f[0] == "vertex") {
      if (f.size() != 3) throw ParseError(lineno, "expected 'vertex <id> <mu>'");
      const VertexId id = parse_id(f[1], lineno);
      if (!declared.insert(id).second) {
        throw ParseError(lineno, "vertex " + f[1] + " declared twice");
      }
      b.add_vertex(id, parse_positive(f[2], lineno, "mu"));
    } else if (f[0] == "edge") {
      if (f.size() != 4) throw ParseError(lineno, "expected 'edge <id1> <id2> <omega>'");
      const VertexId a = parse_id(f[1], lineno);
      const VertexId c = parse_id(f[2], lineno);
      if (a == c) throw ParseError(lineno, "loop at vertex " + f[1]);
      if (!seen_edges.insert({std::min(a, c), std::max(a, c)}).second) {
        throw ParseError(lineno, "edge (" + f[1] + "," + f[2] + ") listed twice");
      }
      b.add_edge(a, c, parse_positive(f[3], lineno, "omega"));
    } else {
      throw ParseError(lineno, "unknown record '" + f[0] + "'");
    }
  }
  return b.build();
}

WeightedGraph read_graph_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_graph(in);
}

void write_graph(std::ostream& out, const WeightedGraph& g, const std::vector<VertexId>& vertices) {
  const std::set<VertexId> inside(vertices.begin(), vertices.end());
  out.precision(17);
  for (const VertexId x : vertices) out << "vertex " << x << ' ' << g.measure(x) << '\n';
  for (const VertexId x : vertices) {
    for (const auto& n : g.neighbors(x)) {
      if (n.id > x && inside.count(n.id) != 0) {
        out << "edge " << x << ' ' << n.id << ' ' << n.weight << '\n';
      }
    }
  }
}

EdgeLengths MetricFile::edge_lengths(double default_c0) const {
  return table_lengths(lengths, c0.value_or(default_c0));
}

MetricFile read_metric(std::istream& in) {
  MetricFile m;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto f = fields(line);
    if (f.empty()) continue;
    if (f[0] == "len") {
      if (f.size() != 4) throw ParseError(lineno, "expected 'len <id1> <id2> <length>'");
      const VertexId a = parse_id(f[1], lineno);
      const VertexId c = parse_id(f[2], lineno);
      if (a == c) throw ParseError(lineno, "length given for a loop");
      const auto key = std::pair{std::min(a, c), std::max(a, c)};
      if (!m.lengths.emplace(key, parse_positive(f[3], lineno, "length")).second) {
        throw ParseError(lineno, "length for (" + f[1] + "," + f[2] + ") given twice");
      }
    } else if (f[0] == "c0") {
      if (f.size() != 2) throw ParseError(lineno, "expected 'c0 <value>'");
      if (m.c0) throw ParseError(lineno, "c0 given twice");
      m.c0 = parse_positive(f[1], lineno, "c0");
    } else {
      throw ParseError(lineno, "unknown record '" + f[0] + "'");
    }
  }
  return m;
}

MetricFile read_metric_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_metric(in);
}

void write_metric(std::ostream& out, const WeightedGraph& g, const std::vector<VertexId>& vertices,
                  const EdgeLengths& lengths) {
  const std::set<VertexId> inside(vertices.begin(), vertices.end());
  out.precision(17);
  out << "c0 " << lengths.c0 << '\n';
  for (const VertexId x : vertices) {
    for (const auto& n : g.neighbors(x)) {
      if (n.id > x && inside.count(n.id) != 0) {
        out << "len " << x << ' ' << n.id << ' ' << lengths.sigma(x, n.id) << '\n';
      }
    }
  }
}

}  // namespace sclab
