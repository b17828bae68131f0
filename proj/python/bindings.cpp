#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sgq/executor.hpp"
#include "sgq/generators.hpp"
#include "sgq/oracle.hpp"
#include "sgq/planner.hpp"

namespace py = pybind11;
using namespace sgq;

namespace {

py::dict stats_dict(const ExecStats& s) {
  py::dict d;
  d["icost_actual"] = s.icost_actual;
  d["cache_hits"] = s.cache_hits;
  d["cache_misses"] = s.cache_misses;
  d["output_count"] = s.output_count;
  d["per_operator_matches"] = s.per_operator_matches;
  return d;
}

ExecOptions make_options(bool use_cache, const std::string& semantics) {
  if (semantics != "homomorphic" && semantics != "injective")
    throw ValidationError("semantics must be 'homomorphic' or 'injective'");
  ExecOptions o;
  o.use_cache = use_cache;
  o.semantics = semantics == "injective" ? Semantics::Injective : Semantics::Homomorphic;
  return o;
}

}  // namespace

PYBIND11_MODULE(pysgq, m) {
  m.doc() = "in-memory labeled subgraph query engine";

  py::register_exception<GuardError>(m, "GuardError");
  py::register_exception<IoError>(m, "IoError");
  py::register_exception<ParseError>(m, "QueryParseError");
  py::register_exception<ValidationError>(m, "InvalidError");

  py::class_<Graph>(m, "Graph")
      .def_static("load", &Graph::load_files, py::arg("vertices_path"), py::arg("edges_path"),
                  py::arg("skip_header") = false)
      .def_static(
          "random",
          [](size_t vertices, size_t edges, size_t vertex_labels, size_t edge_labels,
             uint64_t seed) {
            return random_graph({vertices, edges, vertex_labels, edge_labels, seed});
          },
          py::arg("vertices"), py::arg("edges"), py::arg("vertex_labels") = 1,
          py::arg("edge_labels") = 1, py::arg("seed") = 0)
      .def_property_readonly("vertex_count", &Graph::vertex_count)
      .def_property_readonly("edge_count", &Graph::edge_count);

  py::class_<QueryGraph>(m, "Query")
      .def_static("parse", &QueryGraph::parse, py::arg("pattern"))
      .def_property_readonly("vertex_count", &QueryGraph::size)
      .def("__str__", &QueryGraph::pattern_text);

  py::class_<Catalogue>(m, "Catalogue")
      .def_static("build", &Catalogue::build, py::arg("graph"), py::arg("h") = 3,
                  py::arg("z") = 1000, py::arg("seed") = 0)
      .def_static("load", &Catalogue::load_file, py::arg("path"))
      .def("save", &Catalogue::save_file, py::arg("path"))
      .def_property_readonly("entry_count", &Catalogue::entry_count)
      .def(
          "estimate",
          [](const Catalogue& c, const QueryGraph& q) {
            auto e = c.estimate_cardinality(q);
            return py::make_tuple(e.value, e.low_confidence);
          },
          py::arg("query"), "returns (estimated cardinality, low_confidence)");

  py::class_<Plan>(m, "Plan")
      .def_property_readonly("cost", [](const Plan& p) { return p.est_cost; })
      .def_property_readonly("cardinality", [](const Plan& p) { return p.est_card; })
      .def("signature", &Plan::signature)
      .def("explain", &Plan::explain, py::arg("query"));

  m.def(
      "optimize",
      [](const QueryGraph& q, const Catalogue& cat, double w1, double w2, bool adaptive) {
        Plan p = optimize(q, cat, {w1, w2});
        return adaptive ? make_adaptive(p, q) : std::move(p);
      },
      py::arg("query"), py::arg("catalogue"), py::arg("w1") = 3.0, py::arg("w2") = 1.0,
      py::arg("adaptive") = false);

  m.def(
      "execute",
      [](const Plan& p, const QueryGraph& q, const Graph& g, const Catalogue* cat,
         bool use_cache, const std::string& semantics, size_t workers) {
        ExecOptions o = make_options(use_cache, semantics);
        ExecStats s = workers > 1 ? execute_parallel(p, q, g, workers, o, cat)
                                  : execute(p, q, g, o, cat);
        return stats_dict(s);
      },
      py::arg("plan"), py::arg("query"), py::arg("graph"), py::arg("catalogue") = nullptr,
      py::arg("use_cache") = true, py::arg("semantics") = "homomorphic", py::arg("workers") = 1,
      "run the plan and return the stats dict (adaptive plans need a catalogue)");

  m.def(
      "matches",
      [](const Plan& p, const QueryGraph& q, const Graph& g, bool use_cache,
         const std::string& semantics) {
        std::vector<std::vector<VertexId>> out;
        execute(p, q, g, make_options(use_cache, semantics), nullptr,
                [&](const std::vector<VertexId>& t) { out.push_back(t); });
        return out;
      },
      py::arg("plan"), py::arg("query"), py::arg("graph"), py::arg("use_cache") = true,
      py::arg("semantics") = "homomorphic",
      "materialize all matches, ordered like the plan's output columns");

  m.def(
      "spectrum",
      [](const QueryGraph& q, const Catalogue& cat, double w1, double w2, bool force,
         size_t guard) {
        py::list out;
        for (const auto& cp : enumerate_spectrum(q, cat, {w1, w2}, force, guard)) {
          py::dict d;
          d["signature"] = cp.plan.signature();
          d["cost"] = cp.cost.total;
          d["cardinality"] = cp.plan.est_card;
          out.append(d);
        }
        return out;
      },
      py::arg("query"), py::arg("catalogue"), py::arg("w1") = 3.0, py::arg("w2") = 1.0,
      py::arg("force") = false, py::arg("guard") = kSpectrumGuard);

  m.def(
      "brute_force_count",
      [](const QueryGraph& q, const Graph& g, const std::string& semantics, bool force) {
        return brute_force_count(
            q, g, semantics == "injective" ? Semantics::Injective : Semantics::Homomorphic,
            force);
      },
      py::arg("query"), py::arg("graph"), py::arg("semantics") = "homomorphic",
      py::arg("force") = false, "planner-independent exhaustive count, small graphs only");

  m.def("q_error", &q_error, py::arg("estimate"), py::arg("truth"));
}
