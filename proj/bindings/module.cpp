#include <pybind11/pybind11.h>

#include <json.hpp>

#include "oddpack/gen.hpp"
#include "oddpack/io.hpp"
#include "oddpack/oracle.hpp"
#include "oddpack/trail_pipeline.hpp"

namespace py = pybind11;
using nlohmann::json;
using namespace oddpack;

namespace {

// Same routing rule as the command line front end: the integer construction
// needs integral cover capacities with even degree sums off the terminals.
bool integer_route(const DoubleCover& dc) {
  for (const Rational& c : dc.cover.cap)
    if (!c.is_integer()) return false;
  for (int v = 0; v < dc.cover.g.n_vertices(); ++v) {
    if (dc.cover.is_terminal[v]) continue;
    Rational sum;
    for (int e : dc.cover.g.incident(v)) sum += dc.cover.cap[e];
    if (!sum.is_even_integer()) return false;
  }
  return true;
}

CommodityGraph commodity_or_degenerate(const DoubleCover& dc) {
  if ((int)dc.base.terminals.size() >= 2) return build_commodity_graph(dc).first;
  CommodityGraph h;
  for (int t : dc.base.terminals) h.pairs.emplace_back(t, dc.primed(t));
  return h;
}

std::string pack_walks(const std::string& instance) {
  Network n = parse_instance(instance);
  OddWalkResult res = max_odd_walk_packing(n);
  json j;
  j["value"] = res.value.to_string();
  j["packing"] = json::parse(emit_packing(n, res.packing));
  j["barrier"] = json::parse(emit_barrier(n, res.barrier));
  return j.dump(2);
}

std::string pack_trails(const std::string& instance, bool trace) {
  Network n = parse_instance(instance);
  PipelineResult res = run_pipeline(n);
  json j;
  j["value"] = std::to_string(res.value);
  j["packing"] = json::parse(emit_packing(n, res.packing));
  if (trace) j["trace"] = json::parse(emit_trace(res.trace));
  return j.dump(2);
}

std::string min_barrier(const std::string& instance) {
  Network n = parse_instance(instance);
  OddWalkResult res = max_odd_walk_packing(n);
  json j;
  j["capacity"] = barrier_capacity(n, res.barrier).to_string();
  j["barrier"] = json::parse(emit_barrier(n, res.barrier));
  return j.dump(2);
}

std::string multiflow(const std::string& instance) {
  Network n = parse_instance(instance);
  DoubleCover dc = build_double_cover(n);
  CommodityGraph h = commodity_or_degenerate(dc);
  MultiflowResult res;
  if ((int)n.terminals.size() < 2) {
    res.certificate = min_proper_partition(dc, dc.cover.cap, h);
    if (!res.certificate.capacity.is_zero())
      throw invariant_error("degenerate instance must have a zero certificate");
  } else if (integer_route(dc)) {
    res = max_multiflow_integer(dc, dc.cover.cap, h);
  } else {
    res = max_multiflow_fractional(dc, dc.cover.cap, h);
  }
  json j;
  j["value"] = res.packing.value().to_string();
  j["packing"] = json::parse(emit_packing(dc.cover, res.packing));
  j["partition"] = json::parse(emit_partition(dc, res.certificate));
  return j.dump(2);
}

std::string verify(const std::string& instance, const std::string& packing,
                   const std::string& barrier) {
  Network n = parse_instance(instance);
  Packing p = parse_packing(n, packing);

  std::vector<std::string> failures;
  for (const auto& viol : validate_packing(n, p))
    failures.push_back("edge '" + n.g.edges[viol.edge].id + "' load " + viol.load.to_string() +
                       " exceeds capacity " + viol.cap.to_string());
  for (size_t i = 0; i < p.items.size(); ++i) {
    WalkClass cls = classify_walk(n, p.items[i].walk);
    if (!cls.is_t_walk || !cls.is_odd)
      failures.push_back("item " + std::to_string(i) + " is not an odd T-walk");
  }
  if (!barrier.empty()) {
    Subgraph b = parse_barrier(n, barrier);
    CertifyReport rep = certify(n, p, b);
    for (const std::string& f : rep.failures) failures.push_back(f);
  }
  json j;
  j["ok"] = failures.empty();
  j["failures"] = failures;
  return j.dump(2);
}

std::string certify_packing(const std::string& instance, const std::string& packing,
                            const std::string& barrier) {
  Network n = parse_instance(instance);
  Packing p = parse_packing(n, packing);
  Subgraph b = parse_barrier(n, barrier);
  CertifyReport rep = certify(n, p, b);
  json j;
  j["pass"] = rep.pass;
  j["failures"] = rep.failures;
  return j.dump(2);
}

std::string generate(unsigned long long seed, int max_vertices, int max_edges, bool eulerian,
                     bool even_caps, bool cap2) {
  GenOptions opt;
  opt.seed = seed;
  opt.max_vertices = max_vertices;
  opt.max_edges = max_edges;
  opt.eulerian = eulerian;
  opt.even_caps = even_caps;
  opt.cap2 = cap2;
  return emit_instance(generate_instance(opt));
}

std::string to_dot(const std::string& instance, const std::string& barrier,
                   const std::string& packing) {
  Network n = parse_instance(instance);
  Subgraph b;
  Packing p;
  bool have_b = !barrier.empty(), have_p = !packing.empty();
  if (have_b) b = parse_barrier(n, barrier);
  if (have_p) p = parse_packing(n, packing);
  return export_dot(n, have_b ? &b : nullptr, have_p ? &p : nullptr);
}

std::string oracle_min_barrier(const std::string& instance) {
  Network n = parse_instance(instance);
  BarrierOracleResult res = min_barrier_exhaustive(n, OracleBudget::from_env());
  json j;
  j["capacity"] = res.capacity.to_string();
  j["barrier"] = json::parse(emit_barrier(n, res.barrier));
  return j.dump(2);
}

std::string oracle_pack_trails(const std::string& instance, const std::string& parity,
                               const std::string& family) {
  Network n = parse_instance(instance);
  TrailParity tp = parity == "odd"    ? TrailParity::odd
                   : parity == "even" ? TrailParity::even
                   : parity == "any"  ? TrailParity::any
                                      : throw input_error("parity must be odd, even or any");
  TrailFamily tf = family == "base"      ? TrailFamily::base_graph
                   : family == "valence" ? TrailFamily::valence_graph
                                         : throw input_error("family must be base or valence");
  Packing p = max_trail_packing_exhaustive(n, tp, tf, OracleBudget::from_env());
  json j;
  j["value"] = p.value().to_string();
  if (tf == TrailFamily::base_graph) j["packing"] = json::parse(emit_packing(n, p));
  return j.dump(2);
}

std::string oracle_multiflow(const std::string& instance) {
  Network n = parse_instance(instance);
  DoubleCover dc = build_double_cover(n);
  CommodityGraph h = commodity_or_degenerate(dc);
  Packing p = max_multiflow_exhaustive(dc, h, OracleBudget::from_env());
  json j;
  j["value"] = p.value().to_string();
  j["packing"] = json::parse(emit_packing(dc.cover, p));
  return j.dump(2);
}

}  // namespace

PYBIND11_MODULE(_oddpack, m) {
  m.doc() = "maximum odd T-walk / odd T-trail packings with exact certificates";

  py::register_exception<input_error>(m, "InputError", PyExc_ValueError);
  py::register_exception<invariant_error>(m, "InvariantError", PyExc_RuntimeError);

  m.def("pack_walks", &pack_walks, py::arg("instance"),
        "Maximum fractional odd T-walk packing with a minimum barrier, as JSON.");
  m.def("pack_trails", &pack_trails, py::arg("instance"), py::arg("trace") = false,
        "Maximum integer odd T-trail packing for capacity-2 instances, as JSON.");
  m.def("min_barrier", &min_barrier, py::arg("instance"),
        "Minimum odd T-walk barrier with its capacity, as JSON.");
  m.def("multiflow", &multiflow, py::arg("instance"),
        "Maximum multiflow on the double cover with its partition certificate, as JSON.");
  m.def("verify", &verify, py::arg("instance"), py::arg("packing"), py::arg("barrier") = "",
        "Check a packing (and optionally a barrier certificate), as JSON.");
  m.def("certify", &certify_packing, py::arg("instance"), py::arg("packing"), py::arg("barrier"),
        "Check packing feasibility, barrier validity and exact value match, as JSON.");
  m.def("generate", &generate, py::arg("seed") = 1, py::arg("max_vertices") = 6,
        py::arg("max_edges") = 12, py::arg("eulerian") = false, py::arg("even_caps") = false,
        py::arg("cap2") = false, "Seeded random instance, as JSON.");
  m.def("export_dot", &to_dot, py::arg("instance"), py::arg("barrier") = "",
        py::arg("packing") = "", "Graphviz rendering with optional overlays.");
  m.def("oracle_min_barrier", &oracle_min_barrier, py::arg("instance"),
        "Exhaustive minimum barrier (budgeted), as JSON.");
  m.def("oracle_pack_trails", &oracle_pack_trails, py::arg("instance"), py::arg("parity") = "odd",
        py::arg("family") = "base", "Exhaustive T-trail packing (budgeted), as JSON.");
  m.def("oracle_multiflow", &oracle_multiflow, py::arg("instance"),
        "Exhaustive cover multiflow (budgeted), as JSON.");
}
