#include "oddpack/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace oddpack {

namespace {

using nlohmann::json;

// nlohmann reports byte offsets; turn them into line/column.
[[noreturn]] void rethrow_with_position(const std::string& text, const json::parse_error& e) {
  size_t byte = e.byte > 0 ? e.byte - 1 : 0;
  if (byte > text.size()) byte = text.size();
  int line = 1, col = 1;
  for (size_t i = 0; i < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  throw input_error("JSON parse error at line " + std::to_string(line) + ", column " +
                    std::to_string(col) + ": " + e.what());
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    rethrow_with_position(text, e);
  }
}

const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw input_error(std::string("missing field '") + name + "'");
  return *it;
}

std::string str_of(const json& j, const char* what) {
  if (!j.is_string()) throw input_error(std::string(what) + " must be a string");
  return j.get<std::string>();
}

Rational rational_of(const json& j, const char* what) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  throw input_error(std::string(what) + " must be an integer or a 'p/q' string");
}

}  // namespace

Network parse_instance(const std::string& text) {
  json j = parse_json(text);
  Network n;
  for (const json& v : field(j, "vertices")) n.g.add_vertex(str_of(v, "vertex"));
  for (const json& e : field(j, "edges")) {
    int u = n.g.vertex(str_of(field(e, "u"), "edge endpoint"));
    int v = n.g.vertex(str_of(field(e, "v"), "edge endpoint"));
    n.g.add_edge(str_of(field(e, "id"), "edge id"), u, v);
    Rational cap = rational_of(field(e, "cap"), "capacity");
    if (cap < Rational(0)) throw input_error("capacity must be nonnegative");
    n.cap.push_back(cap);
  }
  std::vector<int> ts;
  for (const json& t : field(j, "terminals")) ts.push_back(n.g.vertex(str_of(t, "terminal")));
  n.finalize_terminals(std::move(ts));
  return n;
}

std::string emit_instance(const Network& n) {
  json j;
  j["vertices"] = n.g.vertex_names;
  json ts = json::array();
  for (int t : n.terminals) ts.push_back(n.g.vertex_names[t]);
  j["terminals"] = std::move(ts);
  json es = json::array();
  for (int e = 0; e < n.g.n_edges(); ++e) {
    const auto& ed = n.g.edges[e];
    es.push_back({{"id", ed.id},
                  {"u", n.g.vertex_names[ed.u]},
                  {"v", n.g.vertex_names[ed.v]},
                  {"cap", n.cap[e].to_string()}});
  }
  j["edges"] = std::move(es);
  return j.dump(2);
}

Packing parse_packing(const Network& n, const std::string& text) {
  json j = parse_json(text);
  Packing p;
  for (const json& item : field(j, "items")) {
    Rational w = rational_of(field(item, "weight"), "weight");
    if (!(w > Rational(0))) throw input_error("weights must be positive");
    Walk walk;
    for (const json& step : field(item, "edges")) {
      if (!step.is_array() || step.size() != 3)
        throw input_error("each step must be [edge, from, to]");
      int e = n.g.edge(str_of(step[0], "edge id"));
      int a = n.g.vertex(str_of(step[1], "step endpoint"));
      int b = n.g.vertex(str_of(step[2], "step endpoint"));
      const auto& ed = n.g.edges[e];
      if (a == ed.u && b == ed.v)
        walk.push_back(Step{e, true});
      else if (a == ed.v && b == ed.u)
        walk.push_back(Step{e, false});
      else
        throw input_error("step endpoints do not match edge '" + ed.id + "'");
    }
    if (walk.empty()) throw input_error("empty walk in packing");
    if (auto bad = walk_defect(n.g, walk))
      throw input_error("steps " + std::to_string(*bad - 1) + " and " + std::to_string(*bad) +
                        " of a walk do not chain");
    p.items.push_back(WeightedWalk{w, std::move(walk)});
  }
  return p;
}

std::string emit_packing(const Network& n, const Packing& p) {
  json items = json::array();
  for (const auto& it : p.items) {
    json steps = json::array();
    for (const Step& s : it.walk) {
      const auto& ed = n.g.edges[s.edge];
      steps.push_back({ed.id, n.g.vertex_names[s.forward ? ed.u : ed.v],
                       n.g.vertex_names[s.forward ? ed.v : ed.u]});
    }
    items.push_back({{"weight", it.weight.to_string()}, {"edges", std::move(steps)}});
  }
  json j;
  j["items"] = std::move(items);
  return j.dump(2);
}

Subgraph parse_barrier(const Network& n, const std::string& text) {
  json j = parse_json(text);
  Subgraph b;
  b.vmask.assign(n.g.n_vertices(), 0);
  b.emask.assign(n.g.n_edges(), 0);
  for (const json& v : field(j, "vertices")) b.vmask[n.g.vertex(str_of(v, "vertex"))] = 1;
  for (const json& e : field(j, "edges")) b.emask[n.g.edge(str_of(e, "edge"))] = 1;
  return b;
}

std::string emit_barrier(const Network& n, const Subgraph& b) {
  json vs = json::array(), es = json::array();
  for (int v = 0; v < n.g.n_vertices(); ++v)
    if (b.vmask[v]) vs.push_back(n.g.vertex_names[v]);
  for (int e = 0; e < n.g.n_edges(); ++e)
    if (b.emask[e]) es.push_back(n.g.edges[e].id);
  json j;
  j["vertices"] = std::move(vs);
  j["edges"] = std::move(es);
  return j.dump(2);
}

ProperPartition parse_partition(const DoubleCover& dc, const std::string& text) {
  json j = parse_json(text);
  ProperPartition p;
  auto vset = [&](const json& arr, const char* what) {
    std::set<int> out;
    for (const json& v : arr) out.insert(dc.cover.g.vertex(str_of(v, what)));
    return out;
  };
  for (const json& part : field(j, "parts")) p.parts.push_back(vset(part, "part vertex"));
  for (const json& cut : field(j, "cuts")) p.cuts.push_back(vset(cut, "cut vertex"));
  p.capacity = rational_of(field(j, "capacity"), "capacity");
  return p;
}

std::string emit_partition(const DoubleCover& dc, const ProperPartition& p) {
  auto names = [&](const std::set<int>& s) {
    json arr = json::array();
    for (int v : s) arr.push_back(dc.cover.g.vertex_names[v]);
    return arr;
  };
  json parts = json::array(), cuts = json::array();
  for (const auto& s : p.parts) parts.push_back(names(s));
  for (const auto& s : p.cuts) cuts.push_back(names(s));
  json j;
  j["parts"] = std::move(parts);
  j["cuts"] = std::move(cuts);
  j["capacity"] = p.capacity.to_string();
  return j.dump(2);
}

std::string emit_trace(const PipelineTrace& t) {
  json j;
  j["p"] = t.p;
  j["q"] = t.q;
  j["r"] = t.r;
  j["e"] = t.e;
  json evs = json::array();
  for (const auto& r : t.evacuations)
    evs.push_back({{"old_vertex", r.old_vertex}, {"new_vertex", r.new_vertex}, {"edges", r.edges}});
  j["evacuations"] = std::move(evs);
  json subs = json::array();
  for (const auto& r : t.subcubizations)
    subs.push_back({{"v", r.v},
                    {"u", r.u},
                    {"vm", r.vm},
                    {"w", r.w},
                    {"n1", r.n1},
                    {"n2", r.n2},
                    {"left", r.left},
                    {"split_pairs", r.split_pairs}});
  j["subcubizations"] = std::move(subs);
  json rws = json::array();
  for (const auto& r : t.rewrites)
    rws.push_back({{"trail", r.trail}, {"case", r.case_id}, {"edge", r.edge}});
  j["rewrites"] = std::move(rws);
  json rms = json::array();
  for (const auto& r : t.removals)
    rms.push_back({{"edge", r.removed_edge}, {"subcase", r.subcase}, {"trail", r.trail}});
  j["removals"] = std::move(rms);
  return j.dump(2);
}

std::string export_dot(const Network& n, const Subgraph* barrier, const Packing* packing) {
  std::ostringstream out;
  out << "graph oddpack {\n";

  for (int v = 0; v < n.g.n_vertices(); ++v) {
    out << "  \"" << n.g.vertex_names[v] << "\" [shape=" << (n.is_terminal[v] ? "box" : "ellipse");
    if (barrier && barrier->vmask[v]) out << ", peripheries=2";
    out << "];\n";
  }

  // Which items pass through each edge, for the overlay labels.
  std::vector<std::string> uses(n.g.n_edges());
  if (packing) {
    for (size_t i = 0; i < packing->items.size(); ++i)
      for (const Step& s : packing->items[i].walk) {
        if (!uses[s.edge].empty()) uses[s.edge] += ",";
        uses[s.edge] += "P" + std::to_string(i);
      }
  }

  for (int e = 0; e < n.g.n_edges(); ++e) {
    const auto& ed = n.g.edges[e];
    std::string label = ed.id + " cap " + n.cap[e].to_string();
    if (!uses[e].empty()) label += " [" + uses[e] + "]";
    std::string style;
    if (barrier) {
      bool in_u = barrier->vmask[ed.u], in_v = barrier->vmask[ed.v];
      if (barrier->emask[e])
        style = ", style=solid, penwidth=2";
      else if (in_u && in_v)
        style = ", style=bold, color=red";  // U(B)
      else if (in_u != in_v)
        style = ", style=dashed, color=blue";  // I(B)
      else
        style = ", style=dotted, color=gray";
    }
    out << "  \"" << n.g.vertex_names[ed.u] << "\" -- \"" << n.g.vertex_names[ed.v]
        << "\" [label=\"" << label << "\"" << style << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace oddpack
