#include <doctest.h>

#include <sstream>

#include "sclab/families.hpp"
#include "sclab/graph_io.hpp"

using namespace sclab;

namespace {

std::string parse_error(const std::string& text) {
  std::istringstream in(text);
  try {
    read_graph(in);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

std::string metric_error(const std::string& text) {
  std::istringstream in(text);
  try {
    read_metric(in);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("read a graph with comments") {
  std::istringstream in(
      "# triangle\n"
      "vertex 0 2.5\n"
      "vertex 1 1\n"
      "\n"
      "edge 0 1 3   # heavy\n"
      "edge 1 2 0.5\n");
  const auto g = read_graph(in);
  CHECK(g.vertices().size() == 3);
  CHECK(g.measure(0) == 2.5);
  CHECK(g.measure(2) == 1.0);
  CHECK(g.weight(1, 0) == 3.0);
  CHECK(g.degree(1) == 3.5);
}

TEST_CASE("malformed graph records name the line") {
  CHECK(parse_error("vertex 0 1\nedge 0 1\n").rfind("line 2:", 0) == 0);
  CHECK(parse_error("vertex 0 1\nvertex 0 2\n").rfind("line 2:", 0) == 0);
  CHECK(parse_error("edge 0 0 1\n").rfind("line 1:", 0) == 0);
  CHECK(parse_error("edge 0 1 1\nedge 1 0 2\n").rfind("line 2:", 0) == 0);
  CHECK(parse_error("vertex 0 -1\n").rfind("line 1:", 0) == 0);
  CHECK(parse_error("vertex x 1\n").rfind("line 1:", 0) == 0);
  CHECK(parse_error("edge 0 1 2x\n").rfind("line 1:", 0) == 0);
  CHECK(parse_error("\n\nnode 1\n").rfind("line 3:", 0) == 0);
  CHECK(parse_error("edge 0 1 0\n").rfind("line 1:", 0) == 0);
}

TEST_CASE("graph round trip") {
  RandomGraphSpec spec;
  spec.n = 30;
  spec.edge_prob = 0.2;
  spec.seed = 4;
  const auto g = random_graph(spec);
  std::ostringstream out;
  write_graph(out, g, g.vertices());
  std::istringstream in(out.str());
  const auto h = read_graph(in);
  REQUIRE(h.vertices() == g.vertices());
  for (const VertexId x : g.vertices()) {
    CHECK(h.measure(x) == g.measure(x));
    CHECK(h.neighbors(x).size() == g.neighbors(x).size());
    for (const auto& n : g.neighbors(x)) CHECK(h.weight(x, n.id) == n.weight);
  }
  std::ostringstream again;
  write_graph(again, h, h.vertices());
  CHECK(again.str() == out.str());
}

TEST_CASE("metric files") {
  std::istringstream in("c0 0.5\nlen 0 1 0.25\nlen 2 1 0.4\n");
  const auto m = read_metric(in);
  REQUIRE(m.c0.has_value());
  CHECK(*m.c0 == 0.5);
  const auto l = m.edge_lengths(1.0);
  CHECK(l.c0 == 0.5);
  CHECK(l.sigma(1, 0) == 0.25);
  CHECK(l.sigma(1, 2) == 0.4);

  std::istringstream no_c0("len 0 1 0.25\n");
  CHECK(read_metric(no_c0).edge_lengths(2.0).c0 == 2.0);

  CHECK(metric_error("c0 1\nc0 2\n").rfind("line 2:", 0) == 0);
  CHECK(metric_error("len 0 1\n").rfind("line 1:", 0) == 0);
  CHECK(metric_error("len 0 1 1\nlen 1 0 1\n").rfind("line 2:", 0) == 0);
  CHECK(metric_error("len 3 3 1\n").rfind("line 1:", 0) == 0);
  CHECK(metric_error("edge 0 1 1\n").rfind("line 1:", 0) == 0);
}

TEST_CASE("metric round trip") {
  const auto g = birth_death(2.0);
  const std::vector<VertexId> vs{0, 1, 2, 3, 4};
  const auto sub = make_window(g, vs);
  (void)sub;
  const auto lengths = degree_metric(g, 0.8);
  std::ostringstream out;
  write_metric(out, g, vs, lengths);
  std::istringstream in(out.str());
  const auto back = read_metric(in).edge_lengths();
  CHECK(back.c0 == 0.8);
  for (VertexId x = 0; x < 4; ++x) CHECK(back.sigma(x, x + 1) == lengths.sigma(x, x + 1));
}

TEST_CASE("missing files") {
  CHECK_THROWS_AS(read_graph_file("/nonexistent/graph.txt"), std::runtime_error);
  CHECK_THROWS_AS(read_metric_file("/nonexistent/metric.txt"), std::runtime_error);
}
