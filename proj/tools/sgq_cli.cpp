#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "sgq/executor.hpp"
#include "sgq/generators.hpp"
#include "sgq/oracle.hpp"
#include "sgq/planner.hpp"

using namespace sgq;

namespace {

// exit codes: 0 success, 1 usage, 2 I/O, 3 validation, 4 guard refusal
constexpr int kOk = 0, kUsage = 1, kIo = 2, kInvalid = 3, kGuard = 4;

struct Options {
  std::string vertices, edges;
  bool header = false;
  std::string catalogue;  // load when set, else build in-process
  std::string out;
  std::string query;
  std::string queries_file;
  size_t h = 3, z = 1000;
  uint64_t seed = 0;
  double w1 = 3.0, w2 = 1.0;
  size_t workers = 1;
  bool adaptive = false;
  bool no_cache = false;
  std::string semantics = "homomorphic";
  std::string mode = "count";
  bool stats = false;
  bool explain = false;
  bool force = false;
  size_t guard = kSpectrumGuard;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Graph load_graph(const Options& o) {
  return Graph::load_files(o.vertices, o.edges, o.header);
}

Catalogue get_catalogue(const Options& o, const Graph& g) {
  if (!o.catalogue.empty()) return Catalogue::load_file(o.catalogue);
  return Catalogue::build(g, o.h, o.z, o.seed);
}

ExecOptions exec_options(const Options& o) {
  ExecOptions e;
  e.use_cache = !o.no_cache;
  e.semantics = o.semantics == "injective" ? Semantics::Injective : Semantics::Homomorphic;
  return e;
}

Plan plan_query(const QueryGraph& q, const Catalogue& cat, const Options& o) {
  return optimize(q, cat, {o.w1, o.w2});
}

void print_stats(const ExecStats& s) {
  std::cout << "icost_actual=" << s.icost_actual << "\n"
            << "cache_hits=" << s.cache_hits << "\n"
            << "cache_misses=" << s.cache_misses << "\n"
            << "output_count=" << s.output_count << "\n";
  std::cout << "operator_matches=";
  for (size_t i = 0; i < s.per_operator_matches.size(); ++i)
    std::cout << (i ? "," : "") << s.per_operator_matches[i];
  std::cout << "\n";
}

int cmd_catalogue(const Options& o) {
  Graph g = load_graph(o);
  auto t0 = std::chrono::steady_clock::now();
  Catalogue cat = Catalogue::build(g, o.h, o.z, o.seed);
  double secs = seconds_since(t0);
  if (!o.out.empty()) cat.save_file(o.out);
  std::cout << "entries=" << cat.entry_count() << "\n"
            << "build_seconds=" << secs << "\n";
  return kOk;
}

int cmd_run(const Options& o) {
  Graph g = load_graph(o);
  Catalogue cat = get_catalogue(o, g);
  QueryGraph q = QueryGraph::parse(o.query);
  Plan p = plan_query(q, cat, o);
  if (o.adaptive) p = make_adaptive(p, q);
  if (o.explain) {
    std::cout << p.explain(q);
    return kOk;
  }
  ExecOptions eo = exec_options(o);
  ExecStats s;
  if (o.workers > 1) {
    s = execute_parallel(p, q, g, o.workers, eo, &cat);
    std::cout << s.output_count << "\n";
  } else if (o.mode == "stream") {
    s = execute(p, q, g, eo, &cat, [&](const std::vector<VertexId>& t) {
      for (size_t i = 0; i < t.size(); ++i) std::cout << (i ? "\t" : "") << t[i];
      std::cout << "\n";
    });
  } else {
    s = execute(p, q, g, eo, &cat);
    std::cout << s.output_count << "\n";
  }
  if (o.stats) print_stats(s);
  return kOk;
}

int cmd_spectrum(const Options& o) {
  Graph g = load_graph(o);
  Catalogue cat = get_catalogue(o, g);
  QueryGraph q = QueryGraph::parse(o.query);
  CostWeights w{o.w1, o.w2};
  auto plans = enumerate_spectrum(q, cat, w, o.force, o.guard);
  Plan chosen = optimize(q, cat, w);
  std::string chosen_sig = chosen.signature();
  ExecOptions eo = exec_options(o);
  std::cout << "id,plan,est_cost,seconds,icost,outputs,chosen\n";
  for (size_t i = 0; i < plans.size(); ++i) {
    const auto& cp = plans[i];
    execute(cp.plan, q, g, eo, nullptr);  // warm-up
    auto t0 = std::chrono::steady_clock::now();
    ExecStats s = execute(cp.plan, q, g, eo, nullptr);
    double secs = seconds_since(t0);
    std::cout << i << "," << cp.plan.signature() << "," << cp.cost.total << "," << secs << ","
              << s.icost_actual << "," << s.output_count << ","
              << (cp.plan.signature() == chosen_sig ? 1 : 0) << "\n";
  }
  return kOk;
}

int cmd_qerror(const Options& o) {
  Graph g = load_graph(o);
  Catalogue cat = get_catalogue(o, g);
  std::vector<QueryGraph> queries;
  if (!o.queries_file.empty()) {
    std::ifstream in(o.queries_file);
    if (!in) throw IoError("cannot open queries file: " + o.queries_file);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      queries.push_back(QueryGraph::parse(line));
    }
  } else {
    queries = random_walk_queries(g, 100, 5, o.seed);
  }
  std::cout << "query,true,estimate,qerror\n";
  std::vector<double> errors;
  for (const auto& q : queries) {
    uint64_t truth = brute_force_count(q, g, Semantics::Homomorphic, o.force);
    double est = cat.estimate_cardinality(q).value;
    double qe = q_error(est, static_cast<double>(truth));
    errors.push_back(qe);
    std::cout << q.pattern_text() << "," << truth << "," << est << "," << qe << "\n";
  }
  size_t le2 = 0, le3 = 0, le5 = 0, le10 = 0, gt20 = 0;
  for (double e : errors) {
    if (e <= 2) ++le2;
    if (e <= 3) ++le3;
    if (e <= 5) ++le5;
    if (e <= 10) ++le10;
    if (e > 20) ++gt20;
  }
  std::cout << "bucket,<=2,<=3,<=5,<=10,>20\n"
            << "count," << le2 << "," << le3 << "," << le5 << "," << le10 << "," << gt20 << "\n";
  return kOk;
}

void add_graph_flags(CLI::App* c, Options& o) {
  c->add_option("--vertices", o.vertices, "vertex CSV: id,label")->required();
  c->add_option("--edges", o.edges, "edge CSV: src,dst,label")->required();
  c->add_flag("--header", o.header, "skip the first CSV row");
}

void add_catalogue_flags(CLI::App* c, Options& o) {
  c->add_option("--catalogue", o.catalogue, "load a saved catalogue instead of building one");
  c->add_option("--h", o.h, "max catalogued subgraph size")->check(CLI::Range(2u, 6u));
  c->add_option("--z", o.z, "sample size per base edge class")->check(CLI::PositiveNumber);
  c->add_option("--seed", o.seed, "sampling seed");
}

void add_run_flags(CLI::App* c, Options& o) {
  c->add_option("--query", o.query, "pattern, e.g. (a:P)-[:E]->(b:P)")->required();
  c->add_option("--w1", o.w1, "hash build weight");
  c->add_option("--w2", o.w2, "probe weight");
  c->add_option("--workers", o.workers, "parallel workers")->check(CLI::PositiveNumber);
  c->add_flag("--adaptive", o.adaptive, "route long extend chains per tuple");
  c->add_flag("--no-cache", o.no_cache, "disable the intersection cache");
  c->add_option("--semantics", o.semantics, "homomorphic or injective")
      ->check(CLI::IsMember({"homomorphic", "injective"}));
  c->add_option("--mode", o.mode, "count or stream")->check(CLI::IsMember({"count", "stream"}));
  c->add_flag("--stats", o.stats, "print the profiling block");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"labeled subgraph query engine"};
  app.require_subcommand(1);
  Options o;

  // --h is a real option below, so drop the default -h help shortcut
  app.set_help_flag("--help", "print usage");
  auto sub = [&](const char* name, const char* desc) {
    CLI::App* c = app.add_subcommand(name, desc);
    c->set_help_flag("--help", "print usage");
    return c;
  };

  CLI::App* c_cat = sub("catalogue", "build and save sampled statistics");
  add_graph_flags(c_cat, o);
  c_cat->add_option("--out", o.out, "output path for the catalogue");
  c_cat->add_option("--h", o.h)->check(CLI::Range(2u, 6u));
  c_cat->add_option("--z", o.z)->check(CLI::PositiveNumber);
  c_cat->add_option("--seed", o.seed);

  CLI::App* c_run = sub("run", "plan and execute a query");
  add_graph_flags(c_run, o);
  add_catalogue_flags(c_run, o);
  add_run_flags(c_run, o);
  c_run->add_flag("--explain", o.explain, "print the plan instead of executing");

  CLI::App* c_explain = sub("explain", "print the chosen plan");
  add_graph_flags(c_explain, o);
  add_catalogue_flags(c_explain, o);
  add_run_flags(c_explain, o);

  CLI::App* c_spec = sub("spectrum", "time every plan in the space");
  add_graph_flags(c_spec, o);
  add_catalogue_flags(c_spec, o);
  c_spec->add_option("--query", o.query)->required();
  c_spec->add_option("--w1", o.w1);
  c_spec->add_option("--w2", o.w2);
  c_spec->add_flag("--no-cache", o.no_cache);
  c_spec->add_option("--semantics", o.semantics)
      ->check(CLI::IsMember({"homomorphic", "injective"}));
  c_spec->add_flag("--force", o.force, "override the enumeration size guard");
  c_spec->add_option("--guard", o.guard, "max query vertices without --force");

  CLI::App* c_qe = sub("qerror", "estimate vs truth over a query suite");
  add_graph_flags(c_qe, o);
  add_catalogue_flags(c_qe, o);
  c_qe->add_option("--queries", o.queries_file, "file with one pattern per line");
  c_qe->add_flag("--force", o.force, "lift the oracle size guard");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (c_cat->parsed()) return cmd_catalogue(o);
    if (c_run->parsed()) return cmd_run(o);
    if (c_explain->parsed()) {
      o.explain = true;
      return cmd_run(o);
    }
    if (c_spec->parsed()) return cmd_spectrum(o);
    if (c_qe->parsed()) return cmd_qerror(o);
  } catch (const GuardError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kGuard;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const ValidationError& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kInvalid;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kUsage;
}
