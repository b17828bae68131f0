#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "sgq/executor.hpp"
#include "sgq/generators.hpp"
#include "sgq/oracle.hpp"
#include "sgq/planner.hpp"
#include "support.hpp"

using namespace sgq;

namespace {

Plan wco_plan(const QueryGraph& q, uint32_t scan_edge, const std::vector<uint32_t>& targets) {
  auto node = make_scan(q, scan_edge);
  for (uint32_t t : targets) node = make_extend(q, std::move(node), t);
  return Plan(std::move(node));
}

}  // namespace

TEST_CASE("triangle and diamond-X counts on the four-vertex fixture") {
  Graph g = test::g0();
  QueryGraph tri = QueryGraph::parse(test::triangle_text());
  QueryGraph dia = QueryGraph::parse(test::diamond_x_text());
  Catalogue cat = Catalogue::build(g, 3, 1000, 0);
  for (const auto& cp : enumerate_spectrum(tri, cat, CostWeights{})) {
    ExecStats s = execute(cp.plan, tri, g);
    CHECK(s.output_count == 2);
  }
  for (const auto& cp : enumerate_spectrum(dia, cat, CostWeights{})) {
    ExecStats s = execute(cp.plan, dia, g);
    CHECK(s.output_count == 1);
  }
}

TEST_CASE("stream mode yields the exact matches in plan order") {
  Graph g = test::g0();
  QueryGraph tri = QueryGraph::parse(test::triangle_text());
  // scan a1->a2, close a3 by intersecting both forward lists
  Plan p = wco_plan(tri, 0, {2});
  std::set<std::vector<VertexId>> got;
  ExecStats s = execute(p, tri, g, {}, nullptr,
                        [&](const std::vector<VertexId>& t) { got.insert(t); });
  CHECK(s.output_count == 2);
  CHECK(got == std::set<std::vector<VertexId>>{{0, 1, 2}, {1, 2, 3}});
}

TEST_CASE("profiled i-cost matches the hand-derived accounting") {
  // fwd list sizes on the fixture: v0:2 v1:2 v2:1 v3:0. Scanning all five
  // edges and intersecting fwd(src) with fwd(dst), charging accessed lists
  // and skipping after an empty running result: 4+3+3+2+1 = 13
  Graph g = test::g0();
  QueryGraph tri = QueryGraph::parse(test::triangle_text());
  Plan p = wco_plan(tri, 0, {2});
  ExecOptions off;
  off.use_cache = false;
  ExecStats s = execute(p, tri, g, off);
  CHECK(s.icost_actual == doctest::Approx(13.0));
  CHECK(s.per_operator_matches.size() == 2);
  CHECK(s.per_operator_matches[1] == 5);  // the scan, pre-order position 1
  CHECK(s.per_operator_matches[0] == 2);
  CHECK(s.cache_hits == 0);
  CHECK(s.cache_misses == 0);  // accounting is off together with the cache
}

TEST_CASE("spectrum plans all agree with the brute-force count") {
  std::vector<QueryGraph> queries;
  queries.push_back(QueryGraph::parse(test::triangle_text()));
  queries.push_back(QueryGraph::parse(test::diamond_x_text()));
  queries.push_back(QueryGraph::parse("(a:L0)-[:T0]->(b:L0),(b:L0)-[:T0]->(c:L1)"));
  for (uint64_t seed : {1u, 2u, 3u}) {
    Graph g = random_graph({24, 90, 2, 1, seed});
    Catalogue cat = Catalogue::build(g, 3, 500, seed);
    for (const auto& q : queries) {
      for (Semantics sem : {Semantics::Homomorphic, Semantics::Injective}) {
        uint64_t truth = brute_force_count(q, g, sem);
        for (const auto& cp : enumerate_spectrum(q, cat, CostWeights{})) {
          ExecOptions opts;
          opts.semantics = sem;
          CHECK(execute(cp.plan, q, g, opts).output_count == truth);
        }
      }
    }
  }
}

TEST_CASE("cache changes stats but never output") {
  Graph g = planted_triangle_graph(300, 3000, 7);
  Catalogue cat = Catalogue::build(g, 3, 500, 7);
  QueryGraph dia = QueryGraph::parse(test::diamond_x_text());
  // scan a2->a3, extend a4 (fwd lists), then a1 (bwd lists keyed on the
  // first two positions, so consecutive a4 siblings reuse the cached set)
  Plan p = wco_plan(dia, 2, {3, 0});
  ExecOptions on, off;
  off.use_cache = false;
  ExecStats son = execute(p, dia, g, on);
  ExecStats soff = execute(p, dia, g, off);
  CHECK(son.output_count == soff.output_count);
  CHECK(son.cache_hits > 0);
  CHECK(son.icost_actual < soff.icost_actual);
  CHECK(soff.cache_hits == 0);
}

TEST_CASE("scan enforces every induced query edge between its two vertices") {
  Graph loop = test::graph_from_csv("0,P\n1,P\n", "0,1,E\n1,0,E\n");
  Graph one = test::graph_from_csv("0,P\n1,P\n", "0,1,E\n");
  QueryGraph q = QueryGraph::parse("(a:P)-[:E]->(b:P),(b:P)-[:E]->(a:P)");
  Plan p(make_scan(q, 0));
  CHECK(execute(p, q, loop).output_count == 2);
  CHECK(execute(p, q, one).output_count == 0);
}

TEST_CASE("injective semantics excludes repeated vertices") {
  Graph g = test::graph_from_csv("0,P\n1,P\n", "0,1,E\n1,0,E\n");
  QueryGraph path3 = QueryGraph::parse("(a:P)-[:E]->(b:P),(b:P)-[:E]->(c:P)");
  Plan p = wco_plan(path3, 0, {2});
  CHECK(execute(p, path3, g).output_count == 2);  // (0,1,0) and (1,0,1)
  ExecOptions inj;
  inj.semantics = Semantics::Injective;
  CHECK(execute(p, path3, g, inj).output_count == 0);
}

TEST_CASE("unknown labels simply match nothing") {
  Graph g = test::g0();
  QueryGraph q = QueryGraph::parse("(a:P)-[:X]->(b:P)");
  CHECK(execute(Plan(make_scan(q, 0)), q, g).output_count == 0);
}

TEST_CASE("hash join plans, with and without symmetric reuse") {
  Graph g = random_graph({30, 140, 1, 1, 11});
  QueryGraph dia = QueryGraph::parse(test::diamond_x_text());
  Catalogue cat = Catalogue::build(g, 3, 500, 11);
  uint64_t truth = brute_force_count(dia, g);
  size_t reused = 0, plain = 0;
  for (const auto& cp : enumerate_spectrum(dia, cat, CostWeights{})) {
    if (cp.plan.root->kind != OpKind::HashJoin) continue;
    ExecStats s = execute(cp.plan, dia, g);
    CHECK(s.output_count == truth);
    if (cp.plan.root->symmetric_reuse) {
      // the probe subtree never runs: its operators report zero tuples
      size_t probe_ops = cp.plan.root->probe->operator_count();
      uint64_t probe_tuples = 0;
      for (size_t i = s.per_operator_matches.size() - probe_ops;
           i < s.per_operator_matches.size(); ++i)
        probe_tuples += s.per_operator_matches[i];
      CHECK(probe_tuples == 0);
      ++reused;
    } else {
      ++plain;
    }
  }
  CHECK(reused > 0);
  CHECK(plain + reused > 0);
}

TEST_CASE("adaptive re-estimation arithmetic is exact") {
  StepReestimate r = reestimate_step(1.0, {100.0, 2000.0}, {50.0, 200.0}, 10.0);
  CHECK(r.icost == 250.0);
  CHECK(r.mu == 0.5);
  // unknown actuals keep the averages and do not rescale mu
  StepReestimate u = reestimate_step(2.0, {100.0, 2000.0}, {-1.0, 200.0}, 10.0);
  CHECK(u.icost == 2.0 * (100.0 + 200.0));
  CHECK(u.mu == 1.0);
}

TEST_CASE("make_adaptive annotates exactly the long extend chains") {
  Graph g = test::g0();
  QueryGraph tri = QueryGraph::parse(test::triangle_text());
  QueryGraph dia = QueryGraph::parse(test::diamond_x_text());

  Plan tp = make_adaptive(wco_plan(tri, 0, {2}), tri);
  CHECK(tp.root->adaptive_orders.empty());  // single extend, nothing to adapt

  Plan dp = make_adaptive(wco_plan(dia, 2, {3, 0}), dia);
  REQUIRE(dp.root->adaptive_orders.size() == 2);
  CHECK(dp.root->adaptive_orders[0] == std::vector<uint32_t>{0, 3});
  CHECK(dp.root->adaptive_orders[1] == std::vector<uint32_t>{3, 0});
}

TEST_CASE("triad family: fixed order pays 6n, adaptive routing pays n") {
  const size_t n = 50;
  Graph g = triad_graph(n);
  Catalogue cat = Catalogue::build(g, 3, 4096, 0);
  QueryGraph dia = QueryGraph::parse(test::diamond_x_text());
  Plan fixed = wco_plan(dia, 2, {3, 0});  // scan a2a3, extend a4 then a1
  ExecOptions off;
  off.use_cache = false;
  ExecStats fs = execute(fixed, dia, g, off);
  CHECK(fs.output_count == 0);
  CHECK(fs.icost_actual == doctest::Approx(6.0 * n));

  Plan adaptive = make_adaptive(fixed, dia);
  ExecStats as = execute(adaptive, dia, g, off, &cat);
  CHECK(as.output_count == 0);
  CHECK(as.icost_actual == doctest::Approx(1.0 * n));
}

TEST_CASE("adaptive execution is output-transparent") {
  for (uint64_t seed : {3u, 4u}) {
    Graph g = random_graph({25, 110, 1, 1, seed});
    Catalogue cat = Catalogue::build(g, 3, 500, seed);
    QueryGraph dia = QueryGraph::parse(test::diamond_x_text());
    uint64_t truth = brute_force_count(dia, g);
    for (const auto& cp : enumerate_wco_plans(dia, cat, CostWeights{})) {
      Plan a = make_adaptive(cp.plan, dia);
      CHECK(execute(a, dia, g, {}, &cat).output_count == truth);
    }
  }
}

TEST_CASE("parallel execution matches serial counts") {
  Graph g = random_graph({60, 420, 1, 1, 21});
  Catalogue cat = Catalogue::build(g, 3, 500, 21);
  QueryGraph tri = QueryGraph::parse(test::triangle_text());
  QueryGraph dia = QueryGraph::parse(test::diamond_x_text());
  for (const QueryGraph* q : {&tri, &dia}) {
    uint64_t serial = execute(optimize(*q, cat, CostWeights{}), *q, g).output_count;
    for (size_t workers : {1u, 2u, 4u}) {
      ExecStats s = execute_parallel(optimize(*q, cat, CostWeights{}), *q, g, workers);
      CHECK(s.output_count == serial);
    }
  }
  // a symmetric-reuse join plan under parallelism
  for (const auto& cp : enumerate_spectrum(dia, cat, CostWeights{})) {
    if (!cp.plan.root->symmetric_reuse) continue;
    uint64_t serial = execute(cp.plan, dia, g).output_count;
    for (size_t workers : {2u, 4u})
      CHECK(execute_parallel(cp.plan, dia, g, workers).output_count == serial);
    break;
  }
}

TEST_CASE("empty graph yields zero everywhere") {
  Graph g = test::graph_from_csv("0,P\n", "");
  QueryGraph tri = QueryGraph::parse(test::triangle_text());
  Plan p = wco_plan(tri, 0, {2});
  CHECK(execute(p, tri, g).output_count == 0);
  CHECK(execute_parallel(p, tri, g, 4).output_count == 0);
}
