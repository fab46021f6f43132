#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "oddpack/gen.hpp"
#include "oddpack/io.hpp"
#include "oddpack/oracle.hpp"
#include "oddpack/trail_pipeline.hpp"

using nlohmann::json;
using namespace oddpack;

namespace {

void write_output(const std::string& path, std::string text) {
  if (text.empty() || text.back() != '\n') text += '\n';
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write '" + path + "'");
  out << text;
}

// Route the multiflow the same way the walk packer does: the integer
// construction needs integral cover capacities with even degree sums off
// the terminals.
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

int cmd_pack_walks(const std::string& in_path, const std::string& out_path) {
  Network n = parse_instance(read_file(in_path));
  OddWalkResult res = max_odd_walk_packing(n);
  json j;
  j["value"] = res.value.to_string();
  j["packing"] = json::parse(emit_packing(n, res.packing));
  j["barrier"] = json::parse(emit_barrier(n, res.barrier));
  write_output(out_path, j.dump(2));
  return 0;
}

int cmd_pack_trails(const std::string& in_path, const std::string& out_path, bool trace) {
  Network n = parse_instance(read_file(in_path));
  PipelineResult res = run_pipeline(n);
  json j;
  j["value"] = std::to_string(res.value);
  j["packing"] = json::parse(emit_packing(n, res.packing));
  if (trace) j["trace"] = json::parse(emit_trace(res.trace));
  write_output(out_path, j.dump(2));
  return 0;
}

int cmd_min_barrier(const std::string& in_path, const std::string& out_path) {
  Network n = parse_instance(read_file(in_path));
  OddWalkResult res = max_odd_walk_packing(n);
  json j;
  j["capacity"] = barrier_capacity(n, res.barrier).to_string();
  j["barrier"] = json::parse(emit_barrier(n, res.barrier));
  write_output(out_path, j.dump(2));
  return 0;
}

int cmd_multiflow(const std::string& in_path, const std::string& out_path) {
  Network n = parse_instance(read_file(in_path));
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
  write_output(out_path, j.dump(2));
  return 0;
}

int cmd_verify(const std::string& in_path, const std::string& pack_path,
               const std::string& barrier_path, const std::string& out_path) {
  Network n = parse_instance(read_file(in_path));
  Packing p = parse_packing(n, read_file(pack_path));

  std::vector<std::string> failures;
  for (const auto& viol : validate_packing(n, p))
    failures.push_back("edge '" + n.g.edges[viol.edge].id + "' load " + viol.load.to_string() +
                       " exceeds capacity " + viol.cap.to_string());
  for (size_t i = 0; i < p.items.size(); ++i) {
    WalkClass cls = classify_walk(n, p.items[i].walk);
    if (!cls.is_t_walk || !cls.is_odd)
      failures.push_back("item " + std::to_string(i) + " is not an odd T-walk");
  }
  if (!barrier_path.empty()) {
    Subgraph b = parse_barrier(n, read_file(barrier_path));
    CertifyReport rep = certify(n, p, b);
    for (const std::string& f : rep.failures) failures.push_back(f);
  }

  json j;
  j["ok"] = failures.empty();
  j["failures"] = failures;
  write_output(out_path, j.dump(2));
  return failures.empty() ? 0 : 1;
}

int cmd_gen(const GenOptions& opt, const std::string& out_path) {
  Network n = generate_instance(opt);
  write_output(out_path, emit_instance(n));
  return 0;
}

int cmd_export_dot(const std::string& in_path, const std::string& barrier_path,
                   const std::string& pack_path, const std::string& out_path) {
  Network n = parse_instance(read_file(in_path));
  Subgraph barrier;
  Packing packing;
  bool have_b = !barrier_path.empty(), have_p = !pack_path.empty();
  if (have_b) barrier = parse_barrier(n, read_file(barrier_path));
  if (have_p) packing = parse_packing(n, read_file(pack_path));
  write_output(out_path, export_dot(n, have_b ? &barrier : nullptr, have_p ? &packing : nullptr));
  return 0;
}

int cmd_oracle_min_barrier(const std::string& in_path, const std::string& out_path) {
  Network n = parse_instance(read_file(in_path));
  BarrierOracleResult res = min_barrier_exhaustive(n, OracleBudget::from_env());
  json j;
  j["capacity"] = res.capacity.to_string();
  j["barrier"] = json::parse(emit_barrier(n, res.barrier));
  write_output(out_path, j.dump(2));
  return 0;
}

int cmd_oracle_pack_trails(const std::string& in_path, const std::string& out_path,
                           const std::string& parity, const std::string& family) {
  Network n = parse_instance(read_file(in_path));
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
  if (tf == TrailFamily::base_graph)
    j["packing"] = json::parse(emit_packing(n, p));
  write_output(out_path, j.dump(2));
  return 0;
}

int cmd_oracle_multiflow(const std::string& in_path, const std::string& out_path) {
  Network n = parse_instance(read_file(in_path));
  DoubleCover dc = build_double_cover(n);
  CommodityGraph h = commodity_or_degenerate(dc);
  Packing p = max_multiflow_exhaustive(dc, h, OracleBudget::from_env());
  json j;
  j["value"] = p.value().to_string();
  j["packing"] = json::parse(emit_packing(dc.cover, p));
  write_output(out_path, j.dump(2));
  return 0;
}

int cmd_oracle_certify(const std::string& in_path, const std::string& pack_path,
                       const std::string& barrier_path, const std::string& out_path) {
  Network n = parse_instance(read_file(in_path));
  Packing p = parse_packing(n, read_file(pack_path));
  Subgraph b = parse_barrier(n, read_file(barrier_path));
  CertifyReport rep = certify(n, p, b);
  json j;
  j["pass"] = rep.pass;
  j["failures"] = rep.failures;
  write_output(out_path, j.dump(2));
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maximum odd T-walk / odd T-trail packings with exact certificates"};
  app.require_subcommand(1);
  std::string in_path, out_path, pack_path, barrier_path;
  bool trace = false;

  auto* walks = app.add_subcommand("pack-walks", "maximum fractional odd T-walk packing");
  walks->add_option("instance", in_path, "instance JSON")->required();
  walks->add_option("-o,--output", out_path, "output file (default stdout)");

  auto* trails = app.add_subcommand("pack-trails", "maximum integer odd T-trail packing");
  trails->add_option("instance", in_path, "instance JSON")->required();
  trails->add_option("-o,--output", out_path, "output file (default stdout)");
  trails->add_flag("--trace", trace, "include the pipeline trace");

  auto* minb = app.add_subcommand("min-barrier", "minimum odd T-walk barrier");
  minb->add_option("instance", in_path, "instance JSON")->required();
  minb->add_option("-o,--output", out_path, "output file (default stdout)");

  auto* mflow = app.add_subcommand("multiflow", "maximum multiflow on the double cover");
  mflow->add_option("instance", in_path, "instance JSON")->required();
  mflow->add_option("-o,--output", out_path, "output file (default stdout)");

  auto* verify = app.add_subcommand("verify", "check a packing (and optional barrier)");
  verify->add_option("instance", in_path, "instance JSON")->required();
  verify->add_option("packing", pack_path, "packing JSON")->required();
  verify->add_option("barrier", barrier_path, "barrier JSON (optional)");
  verify->add_option("-o,--output", out_path, "output file (default stdout)");

  GenOptions gopt;
  auto* gen = app.add_subcommand("gen", "generate a random instance");
  gen->add_option("--seed", gopt.seed, "random seed");
  gen->add_option("--max-vertices", gopt.max_vertices, "vertex budget");
  gen->add_option("--max-edges", gopt.max_edges, "edge budget");
  gen->add_flag("--eulerian", gopt.eulerian, "force even degrees off the terminals");
  gen->add_flag("--even-caps", gopt.even_caps, "capacities from {2, 4}");
  gen->add_flag("--cap2", gopt.cap2, "capacities identically 2");
  gen->add_option("-o,--output", out_path, "output file (default stdout)");

  auto* dot = app.add_subcommand("export-dot", "Graphviz rendering");
  dot->add_option("instance", in_path, "instance JSON")->required();
  dot->add_option("--barrier", barrier_path, "barrier JSON overlay");
  dot->add_option("--packing", pack_path, "packing JSON overlay");
  dot->add_option("-o,--output", out_path, "output file (default stdout)");

  auto* oracle = app.add_subcommand("oracle", "exhaustive ground truth (budgeted)");
  oracle->require_subcommand(1);
  std::string parity = "odd", family = "base";

  auto* ominb = oracle->add_subcommand("min-barrier", "exhaustive minimum barrier");
  ominb->add_option("instance", in_path, "instance JSON")->required();
  ominb->add_option("-o,--output", out_path, "output file (default stdout)");

  auto* otrails = oracle->add_subcommand("pack-trails", "exhaustive trail packing");
  otrails->add_option("instance", in_path, "instance JSON")->required();
  otrails->add_option("--parity", parity, "odd, even or any (default odd)");
  otrails->add_option("--family", family, "base or valence (default base)");
  otrails->add_option("-o,--output", out_path, "output file (default stdout)");

  auto* omflow = oracle->add_subcommand("multiflow", "exhaustive cover multiflow");
  omflow->add_option("instance", in_path, "instance JSON")->required();
  omflow->add_option("-o,--output", out_path, "output file (default stdout)");

  auto* ocert = oracle->add_subcommand("certify", "check packing against barrier");
  ocert->add_option("instance", in_path, "instance JSON")->required();
  ocert->add_option("packing", pack_path, "packing JSON")->required();
  ocert->add_option("barrier", barrier_path, "barrier JSON")->required();
  ocert->add_option("-o,--output", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (walks->parsed()) return cmd_pack_walks(in_path, out_path);
    if (trails->parsed()) return cmd_pack_trails(in_path, out_path, trace);
    if (minb->parsed()) return cmd_min_barrier(in_path, out_path);
    if (mflow->parsed()) return cmd_multiflow(in_path, out_path);
    if (verify->parsed()) return cmd_verify(in_path, pack_path, barrier_path, out_path);
    if (gen->parsed()) return cmd_gen(gopt, out_path);
    if (dot->parsed()) return cmd_export_dot(in_path, barrier_path, pack_path, out_path);
    if (oracle->parsed()) {
      if (ominb->parsed()) return cmd_oracle_min_barrier(in_path, out_path);
      if (otrails->parsed()) return cmd_oracle_pack_trails(in_path, out_path, parity, family);
      if (omflow->parsed()) return cmd_oracle_multiflow(in_path, out_path);
      if (ocert->parsed()) return cmd_oracle_certify(in_path, pack_path, barrier_path, out_path);
    }
    std::cerr << "error: no command selected\n";
    return 2;
  } catch (const input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const invariant_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
