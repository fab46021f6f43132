#include "oddpack/double_cover.hpp"

#include <algorithm>

namespace oddpack {

DoubleCover build_double_cover(const Network& n) {
  DoubleCover dc;
  dc.base = n;
  dc.n_base = n.g.n_vertices();

  for (const std::string& name : n.g.vertex_names) dc.cover.g.add_vertex(name);
  for (const std::string& name : n.g.vertex_names) dc.cover.g.add_vertex(name + "'");
  for (int e = 0; e < n.g.n_edges(); ++e) {
    const auto& ed = n.g.edges[e];
    dc.cover.g.add_edge(ed.id + "#0", ed.u, ed.v + dc.n_base);
    dc.cover.g.add_edge(ed.id + "#1", ed.u + dc.n_base, ed.v);
    Rational half = n.cap[e] / Rational(2);
    dc.cover.cap.push_back(half);
    dc.cover.cap.push_back(half);
  }
  std::vector<int> ts;
  for (int t : n.terminals) {
    ts.push_back(t);
    ts.push_back(t + dc.n_base);
  }
  dc.cover.finalize_terminals(std::move(ts));

  // The cover is bipartite between the two sides by construction; check it
  // anyway since everything downstream leans on walk parities.
  for (const auto& ed : dc.cover.g.edges)
    if (dc.is_primed(ed.u) == dc.is_primed(ed.v))
      throw invariant_error("double cover is not bipartite");
  return dc;
}

std::pair<CommodityGraph, AnticliqueFamilies> build_commodity_graph(const DoubleCover& dc) {
  const auto& T = dc.base.terminals;
  if (T.size() < 2) throw input_error("commodity graph needs at least 2 terminals");
  CommodityGraph h;
  for (int t : T) h.pairs.emplace_back(t, dc.primed(t));
  for (int ti : T)
    for (int tj : T)
      if (ti != tj) h.edges.emplace_back(ti, dc.primed(tj));

  AnticliqueFamilies fam;
  std::set<int> unprimed, primed;
  for (int t : T) {
    unprimed.insert(t);
    primed.insert(dc.primed(t));
    fam.a2.push_back({t, dc.primed(t)});
  }
  fam.a1 = {unprimed, primed};
  return {h, fam};
}

Walk sym_walk(const DoubleCover& dc, const Walk& w) {
  Walk out;
  out.reserve(w.size());
  for (const Step& s : w) out.push_back(Step{dc.sym_edge(s.edge), s.forward});
  return out;
}

Walk lift_walk(const DoubleCover& dc, const Walk& w) {
  if (w.empty()) throw input_error("cannot lift an empty walk");
  if (auto bad = walk_defect(dc.base.g, w))
    throw input_error("walk is malformed at step " + std::to_string(*bad));
  if (!walk_is_odd(w)) throw input_error("only odd walks lift to t-t' cover walks");

  Walk out;
  int cur = walk_start(dc.base.g, w);  // unprimed start
  for (const Step& s : w) {
    const auto& ed = dc.base.g.edges[s.edge];
    int from = step_from(dc.base.g, s);
    if (cur == from) {
      // unprimed side -> primed side
      out.push_back(from == ed.u ? Step{2 * s.edge, true} : Step{2 * s.edge + 1, false});
    } else {
      // primed side -> unprimed side
      out.push_back(from == ed.u ? Step{2 * s.edge + 1, true} : Step{2 * s.edge, false});
    }
    cur = step_to(dc.cover.g, out.back());
  }
  return out;
}

Walk project_walk(const DoubleCover& dc, const Walk& w) {
  Walk out;
  out.reserve(w.size());
  for (const Step& s : w) out.push_back(Step{dc.base_edge(s.edge), s.forward});
  if (auto bad = walk_defect(dc.base.g, out))
    throw invariant_error("projected walk broke at step " + std::to_string(*bad));
  return out;
}

Packing project_packing(const DoubleCover& dc, const Packing& q) {
  Packing out;
  for (const auto& item : q.items) {
    if (item.walk.empty()) throw input_error("cover packing contains an empty walk");
    if (auto bad = walk_defect(dc.cover.g, item.walk))
      throw input_error("cover walk is malformed at step " + std::to_string(*bad));
    int a = walk_start(dc.cover.g, item.walk);
    int b = walk_end(dc.cover.g, item.walk);
    if (dc.is_primed(a) == dc.is_primed(b))
      throw input_error("cover walk endpoints are on one side of the cover");
    int ta = dc.base_vertex(a), tb = dc.base_vertex(b);
    if (!dc.base.is_terminal[ta] || !dc.base.is_terminal[tb])
      throw input_error("cover walk endpoint is not a terminal");
    if (ta == tb)
      throw input_error("cover walk endpoints lie inside one anticlique {t,t'}");
    out.items.push_back(WeightedWalk{item.weight, project_walk(dc, item.walk)});
  }
  return merge_packing(out);
}

Packing symmetrize(const DoubleCover& dc, const Packing& p) {
  std::vector<Rational> load = packing_loads(dc.cover.g, p);
  for (int e = 0; e < dc.base.g.n_edges(); ++e) {
    Rational pair_load = load[2 * e] + load[2 * e + 1];
    if (pair_load > dc.cover.cap[2 * e] * Rational(2))
      throw input_error("packing pair-load exceeds 2*cap~ on edge " + dc.base.g.edges[e].id);
  }
  Packing out;
  Rational half(1, 2);
  for (const auto& item : p.items) {
    out.items.push_back(WeightedWalk{item.weight * half, item.walk});
    out.items.push_back(WeightedWalk{item.weight * half, sym_walk(dc, item.walk)});
  }
  return merge_packing(out);
}

}  // namespace oddpack
