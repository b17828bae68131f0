#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sgq/oracle.hpp"
#include "support.hpp"

using namespace sgq;

TEST_CASE("triangle and diamond-x counts on g0") {
  Graph g = test::g0();
  CHECK(brute_force_count(QueryGraph::parse(test::triangle_text()), g) == 2);
  CHECK(brute_force_count(QueryGraph::parse(test::diamond_x_text()), g) == 1);
}

TEST_CASE("homomorphic vs injective") {
  // square query on a graph with one undirected-style 2-cycle
  Graph g = test::graph_from_csv("0,P\n1,P\n", "0,1,E\n1,0,E\n");
  QueryGraph sq = QueryGraph::parse(
      "(a:P)-[:E]->(b:P),(b:P)-[:E]->(c:P),(c:P)-[:E]->(d:P),(d:P)-[:E]->(a:P)");
  CHECK(brute_force_count(sq, g, Semantics::Homomorphic) == 2);
  CHECK(brute_force_count(sq, g, Semantics::Injective) == 0);
}

TEST_CASE("empty graph yields zero") {
  Graph g = test::graph_from_csv("0,P\n1,P\n", "");
  CHECK(brute_force_count(QueryGraph::parse("(a:P)-[:E]->(b:P)"), g) == 0);
}

TEST_CASE("self loops are ordinary edges") {
  Graph g = test::graph_from_csv("0,P\n", "0,0,E\n");
  CHECK(brute_force_count(QueryGraph::parse("(a:P)-[:E]->(b:P)"), g) == 1);
  CHECK(brute_force_count(QueryGraph::parse(test::triangle_text()), g) == 1);
}

TEST_CASE("size guard refuses large patterns unless forced") {
  Graph g = test::g0();
  QueryGraph path9 = QueryGraph::parse(
      "(v1)-[:E]->(v2),(v2)-[:E]->(v3),(v3)-[:E]->(v4),(v4)-[:E]->(v5),"
      "(v5)-[:E]->(v6),(v6)-[:E]->(v7),(v7)-[:E]->(v8),(v8)-[:E]->(v9)");
  CHECK_THROWS_AS(brute_force_count(path9, g), GuardError);
  CHECK_NOTHROW(brute_force_count(path9, g, Semantics::Homomorphic, true));
}

TEST_CASE("q-error basics") {
  CHECK(q_error(10, 5) == 2.0);
  CHECK(q_error(5, 10) == 2.0);
  CHECK(q_error(7, 7) == 1.0);
  CHECK(q_error(0, 0) == 1.0);
  CHECK(q_error(0, 3) == kQErrorInfinite);
  CHECK(q_error(3, 0) == kQErrorInfinite);
}
