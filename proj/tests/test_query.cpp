#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "sgq/query.hpp"
#include "support.hpp"

using namespace sgq;

TEST_CASE("parse asymmetric triangle") {
  QueryGraph q = QueryGraph::parse("(a1)-[:E]->(a2),(a2)-[:E]->(a3),(a1)-[:E]->(a3)");
  CHECK(q.size() == 3);
  CHECK(q.edges().size() == 3);
  CHECK(q.vertices()[0].name == "a1");
  CHECK(q.vertices()[0].label == kDefaultQueryLabel);
}

TEST_CASE("parse diamond-x") {
  QueryGraph q = QueryGraph::parse(test::diamond_x_text());
  CHECK(q.size() == 4);
  CHECK(q.edges().size() == 5);
  CHECK(q.has_edge(*q.find_vertex("a2"), *q.find_vertex("a3"), "E"));
}

TEST_CASE("disconnected pattern rejected") {
  CHECK_THROWS_AS(QueryGraph::parse("(a1)-[:E]->(a2),(a3)-[:E]->(a4)"), ValidationError);
}

TEST_CASE("duplicate edge rejected") {
  CHECK_THROWS_AS(QueryGraph::parse("(a)-[:E]->(b),(a)-[:E]->(b)"), ValidationError);
}

TEST_CASE("syntax errors carry 1-based offsets") {
  try {
    QueryGraph::parse("(a)-[:E]>(b)");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position == 9);
  }
}

TEST_CASE("projection is the induced subgraph") {
  QueryGraph q = QueryGraph::parse(test::diamond_x_text());
  auto idx = [&](const char* n) { return *q.find_vertex(n); };

  QueryGraph tri = q.project({idx("a1"), idx("a2"), idx("a3")});
  CHECK(tri.size() == 3);
  CHECK(tri.edges().size() == 3);

  QueryGraph none = q.project({idx("a1"), idx("a4")});
  CHECK(none.size() == 2);
  CHECK(none.edges().empty());
  CHECK(!none.connected());

  QueryGraph all = q.project({0, 1, 2, 3});
  CHECK(all.size() == q.size());
  CHECK(all.edges().size() == q.edges().size());
}

TEST_CASE("nested projection composes") {
  QueryGraph q = QueryGraph::parse(test::diamond_x_text());
  QueryGraph a = q.project({0, 1, 2}).project({0, 1});
  QueryGraph b = q.project({0, 1});
  CHECK(a.canonicalize() == b.canonicalize());
}

TEST_CASE("canonicalization is renaming-invariant") {
  QueryGraph a = QueryGraph::parse("(a1)-[:E]->(a2),(a2)-[:E]->(a3),(a1)-[:E]->(a3)");
  QueryGraph b = QueryGraph::parse("(z)-[:E]->(x),(y)-[:E]->(z),(y)-[:E]->(x)");
  CHECK(a.canonicalize() == b.canonicalize());
}

TEST_CASE("asymmetric vs symmetric triangle differ") {
  QueryGraph asym = QueryGraph::parse("(a1)-[:E]->(a2),(a2)-[:E]->(a3),(a1)-[:E]->(a3)");
  QueryGraph sym = QueryGraph::parse("(a1)-[:E]->(a2),(a2)-[:E]->(a3),(a3)-[:E]->(a1)");
  CHECK(asym.canonicalize() != sym.canonicalize());
}

TEST_CASE("labels break single-edge symmetry") {
  QueryGraph a = QueryGraph::parse("(u:la)-[:lx]->(v:lb)");
  QueryGraph b = QueryGraph::parse("(u:lb)-[:lx]->(v:la)");
  CHECK(a.canonicalize() != b.canonicalize());
}

TEST_CASE("canonicalization is a congruence under random relabelings") {
  QueryGraph q = QueryGraph::parse(test::diamond_x_text());
  CanonicalKey base = q.canonicalize();
  std::mt19937_64 rng(11);
  std::vector<uint32_t> perm{0, 1, 2, 3};
  for (int round = 0; round < 10; ++round) {
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<QueryVertex> vs(4);
    for (uint32_t i = 0; i < 4; ++i) vs[perm[i]] = q.vertices()[i];
    std::vector<QueryEdge> es;
    for (const auto& e : q.edges()) es.push_back({perm[e.src], perm[e.dst], e.label});
    QueryGraph shuffled(vs, es);
    CHECK(shuffled.canonicalize() == base);
  }
}

TEST_CASE("distinguished vertex is preserved by the canonical form") {
  QueryGraph q = QueryGraph::parse("(a)-[:E]->(b),(b)-[:E]->(c),(a)-[:E]->(c)");
  CanonicalKey with_c = q.canonicalize(*q.find_vertex("c"));
  CanonicalKey with_a = q.canonicalize(*q.find_vertex("a"));
  CHECK(with_c != with_a);
  CHECK(with_c.permutation[*q.find_vertex("c")] == q.size() - 1);
}
