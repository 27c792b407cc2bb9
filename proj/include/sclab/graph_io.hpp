#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

#include "sclab/graph.hpp"
#include "sclab/metric.hpp"

namespace sclab {

/// Malformed input; the message starts with "line N:".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/**
 * Reads `vertex <id> <mu>` and `edge <id1> <id2> <omega>` records; `#`
 * starts a comment. Each undirected edge appears once and is symmetrized.
 * Vertices mentioned only by edges get mu = 1.
 */
WeightedGraph read_graph(std::istream& in);
WeightedGraph read_graph_file(const std::string& path);

/// Writes the given vertices and every edge among them, each edge once.
void write_graph(std::ostream& out, const WeightedGraph& g, const std::vector<VertexId>& vertices);

struct MetricFile {
  std::map<std::pair<VertexId, VertexId>, double> lengths;
  std::optional<double> c0;

  EdgeLengths edge_lengths(double default_c0 = 1.0) const;
};

/// Reads `len <id1> <id2> <length>` records and at most one `c0 <value>` line.
MetricFile read_metric(std::istream& in);
MetricFile read_metric_file(const std::string& path);

void write_metric(std::ostream& out, const WeightedGraph& g, const std::vector<VertexId>& vertices,
                  const EdgeLengths& lengths);

}  // namespace sclab
