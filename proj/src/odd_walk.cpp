#include "oddpack/odd_walk.hpp"

#include <algorithm>

namespace oddpack {

namespace {

Rational cover_cut_capacity(const Multigraph& g, const std::vector<Rational>& cap,
                            const std::set<int>& y) {
  Rational s;
  for (int e = 0; e < g.n_edges(); ++e) {
    bool iu = y.count(g.edges[e].u) > 0;
    bool iv = y.count(g.edges[e].v) > 0;
    if (iu != iv) s += cap[e];
  }
  return s;
}

void check_subgraph_shape(const Network& n, const Subgraph& b) {
  if (static_cast<int>(b.vmask.size()) != n.g.n_vertices() ||
      static_cast<int>(b.emask.size()) != n.g.n_edges())
    throw input_error("subgraph masks do not match the graph");
  for (int e = 0; e < n.g.n_edges(); ++e)
    if (b.emask[e] && (!b.vmask[n.g.edges[e].u] || !b.vmask[n.g.edges[e].v]))
      throw input_error("subgraph edge " + n.g.edges[e].id +
                        " has an endpoint outside the vertex set");
}

struct CompInfo {
  std::vector<int> comp;   // per vertex: component id, -1 outside
  std::vector<char> color;  // BFS 2-coloring attempt
  std::vector<std::vector<int>> members;
  std::vector<std::vector<int>> terms;
  std::vector<char> bipartite;
};

CompInfo analyze_components(const Network& n, const Subgraph& b) {
  CompInfo ci;
  int nv = n.g.n_vertices();
  ci.comp.assign(nv, -1);
  ci.color.assign(nv, 0);
  std::vector<std::vector<std::pair<int, int>>> adj(nv);
  for (int e = 0; e < n.g.n_edges(); ++e)
    if (b.emask[e]) {
      adj[n.g.edges[e].u].push_back({e, n.g.edges[e].v});
      adj[n.g.edges[e].v].push_back({e, n.g.edges[e].u});
    }
  for (int v0 = 0; v0 < nv; ++v0) {
    if (!b.vmask[v0] || ci.comp[v0] >= 0) continue;
    int id = static_cast<int>(ci.members.size());
    ci.members.push_back({});
    ci.terms.push_back({});
    ci.bipartite.push_back(1);
    std::vector<int> queue{v0};
    ci.comp[v0] = id;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      int v = queue[qi];
      ci.members[id].push_back(v);
      if (n.is_terminal[v]) ci.terms[id].push_back(v);
      for (auto [e, w] : adj[v]) {
        (void)e;
        if (ci.comp[w] < 0) {
          ci.comp[w] = id;
          ci.color[w] = !ci.color[v];
          queue.push_back(w);
        } else if (ci.color[w] == ci.color[v]) {
          ci.bipartite[id] = 0;
        }
      }
    }
    std::sort(ci.members[id].begin(), ci.members[id].end());
    std::sort(ci.terms[id].begin(), ci.terms[id].end());
  }
  return ci;
}

std::pair<bool, bool> capacity_parity_conditions(const Network& n) {
  bool even = true;
  for (const Rational& c : n.cap)
    if (!c.is_even_integer()) even = false;
  bool mod4 = even;
  for (int v = 0; v < n.g.n_vertices() && mod4; ++v) {
    if (n.is_terminal[v]) continue;
    Rational s;
    for (int e : n.g.incident(v)) s += n.cap[e];
    mod4 = s.is_integer() && s.numerator() % 4 == 0;
  }
  return {even, mod4};
}

}  // namespace

Subgraph full_subgraph(const Multigraph& g) {
  return Subgraph{std::vector<char>(g.n_vertices(), 1), std::vector<char>(g.n_edges(), 1)};
}

BarrierSides barrier_sides(const Network& n, const Subgraph& b) {
  check_subgraph_shape(n, b);
  BarrierSides out;
  for (int e = 0; e < n.g.n_edges(); ++e) {
    if (b.emask[e]) continue;
    bool iu = b.vmask[n.g.edges[e].u] != 0;
    bool iv = b.vmask[n.g.edges[e].v] != 0;
    if (iu && iv)
      out.uturn.push_back(e);
    else if (iu || iv)
      out.boundary.push_back(e);
  }
  return out;
}

bool barrier_check(const Network& n, const Subgraph& b) {
  check_subgraph_shape(n, b);
  for (int t : n.terminals)
    if (!b.vmask[t])
      throw input_error("terminal " + n.g.vertex_names[t] + " lies outside the subgraph");
  CompInfo ci = analyze_components(n, b);
  for (size_t c = 0; c < ci.members.size(); ++c) {
    if (ci.terms[c].size() <= 1) continue;  // terminal-free or singular
    if (!ci.bipartite[c]) return false;
    char side = ci.color[ci.terms[c][0]];
    for (int t : ci.terms[c])
      if (ci.color[t] != side) return false;
  }
  return true;
}

std::vector<Rational> slice(const Network& n, const Subgraph& h) {
  check_subgraph_shape(n, h);
  std::vector<Rational> s(n.g.n_edges(), Rational(0));
  BarrierSides sides = barrier_sides(n, h);
  for (int e : sides.boundary) s[e] = Rational(1, 2);
  for (int e : sides.uturn) s[e] = Rational(1);
  return s;
}

Rational barrier_capacity(const Network& n, const Subgraph& b) {
  BarrierSides sides = barrier_sides(n, b);
  Rational c;
  for (int e : sides.boundary) c += n.cap[e] / Rational(2);
  for (int e : sides.uturn) c += n.cap[e];
  std::vector<Rational> s = slice(n, b);
  Rational dot;
  for (int e = 0; e < n.g.n_edges(); ++e) dot += n.cap[e] * s[e];
  if (dot != c) throw invariant_error("slice product disagrees with the barrier capacity");
  return c;
}

Subgraph partition_to_barrier(const DoubleCover& dc, const ProperPartition& x) {
  const Network& base = dc.base;
  const Multigraph& cg = dc.cover.g;
  auto sym_set = [&](const std::set<int>& s) {
    std::set<int> o;
    for (int v : s) o.insert(dc.sym_vertex(v));
    return o;
  };

  if (x.parts.size() != x.cuts.size()) throw input_error("partition parts and cuts differ in length");
  Rational cut_sum;
  for (size_t i = 0; i < x.parts.size(); ++i) {
    if (x.parts[i].empty()) throw input_error("empty partition part");
    for (int t : x.parts[i])
      if (!x.cuts[i].count(t)) throw input_error("partition cut does not contain its part");
    for (size_t j = i + 1; j < x.cuts.size(); ++j)
      for (int v : x.cuts[i])
        if (x.cuts[j].count(v)) throw input_error("partition cuts are not disjoint");
    cut_sum += cover_cut_capacity(cg, dc.cover.cap, x.cuts[i]);
  }
  if (cut_sum / Rational(2) != x.capacity)
    throw input_error("partition capacity field does not match its cuts");

  Subgraph b;
  b.vmask.assign(base.g.n_vertices(), 0);
  b.emask.assign(base.g.n_edges(), 0);
  auto claim_vertex = [&](int v) {
    if (b.vmask[v]) throw invariant_error("barrier pieces overlap at " + base.g.vertex_names[v]);
    b.vmask[v] = 1;
  };

  std::vector<char> done(x.parts.size(), 0);
  for (size_t i = 0; i < x.parts.size(); ++i) {
    if (done[i]) continue;
    if (sym_set(x.parts[i]) == x.parts[i]) {
      // singular part {t, t'}: induced subgraph on the cut's base preimage
      if (x.parts[i].size() != 2) throw input_error("self-symmetric part is not a terminal pair");
      if (sym_set(x.cuts[i]) != x.cuts[i]) throw input_error("singular part has an asymmetric cut");
      std::vector<int> cbase;
      for (int v : x.cuts[i])
        if (!dc.is_primed(v)) cbase.push_back(v);
      for (int v : cbase) claim_vertex(v);
      for (int e = 0; e < base.g.n_edges(); ++e)
        if (b.vmask[base.g.edges[e].u] && b.vmask[base.g.edges[e].v] &&
            std::binary_search(cbase.begin(), cbase.end(), base.g.edges[e].u) &&
            std::binary_search(cbase.begin(), cbase.end(), base.g.edges[e].v))
          b.emask[e] = 1;
      done[i] = 1;
    } else {
      size_t j = i + 1;
      for (; j < x.parts.size(); ++j)
        if (!done[j] && x.parts[j] == sym_set(x.parts[i])) break;
      if (j == x.parts.size()) throw input_error("partition part lacks its symmetric mate");
      if (x.cuts[j] != sym_set(x.cuts[i])) throw input_error("pair parts have asymmetric cuts");
      if (x.parts[i].size() < 2) throw input_error("non-singular pair with fewer than two terminals");
      bool i_unprimed = true, i_primed = true;
      for (int t : x.parts[i]) {
        if (dc.is_primed(t)) i_unprimed = false;
        else i_primed = false;
      }
      if (!i_unprimed && !i_primed) throw input_error("pair part mixes primed and unprimed terminals");
      const std::set<int>& y1 = i_unprimed ? x.cuts[i] : x.cuts[j];
      // Y1 = L + R': bipartite piece on (L, R) with only the L-R edges
      std::set<int> lset, rset;
      for (int v : y1) {
        if (dc.is_primed(v))
          rset.insert(dc.base_vertex(v));
        else
          lset.insert(v);
      }
      for (int v : lset) claim_vertex(v);
      for (int v : rset) claim_vertex(v);
      for (int e = 0; e < base.g.n_edges(); ++e) {
        int eu = base.g.edges[e].u, ev = base.g.edges[e].v;
        if ((lset.count(eu) && rset.count(ev)) || (lset.count(ev) && rset.count(eu)))
          b.emask[e] = 1;
      }
      done[i] = done[j] = 1;
    }
  }

  // The Appendix identity: before dropping redundant components, the barrier
  // capacity equals the partition capacity exactly.
  if (barrier_capacity(base, b) != x.capacity)
    throw invariant_error("barrier construction lost the partition capacity");

  CompInfo ci = analyze_components(base, b);
  for (size_t c = 0; c < ci.members.size(); ++c) {
    if (!ci.terms[c].empty()) continue;
    for (int v : ci.members[c]) b.vmask[v] = 0;
  }
  for (int e = 0; e < base.g.n_edges(); ++e)
    if (b.emask[e] && (!b.vmask[base.g.edges[e].u] || !b.vmask[base.g.edges[e].v]))
      b.emask[e] = 0;

  if (!barrier_check(base, b)) throw invariant_error("constructed subgraph admits an odd T-walk");
  if (barrier_capacity(base, b) > x.capacity)
    throw invariant_error("barrier normalization raised the capacity");
  return b;
}

ProperPartition barrier_to_partition(const DoubleCover& dc, const Subgraph& b) {
  const Network& base = dc.base;
  if (!barrier_check(base, b)) throw input_error("subgraph is not a barrier");
  CompInfo ci = analyze_components(base, b);

  ProperPartition p;
  std::vector<std::set<int>> feas;  // feasible (not necessarily minimum) cuts
  for (size_t c = 0; c < ci.members.size(); ++c) {
    if (ci.terms[c].empty()) continue;  // redundant component
    if (ci.terms[c].size() == 1) {
      int t = ci.terms[c][0];
      p.parts.push_back({t, dc.primed(t)});
      std::set<int> f;
      for (int v : ci.members[c]) {
        f.insert(v);
        f.insert(dc.primed(v));
      }
      feas.push_back(std::move(f));
    } else {
      char side = ci.color[ci.terms[c][0]];
      std::set<int> xs, xps, f1, f2;
      for (int t : ci.terms[c]) {
        xs.insert(t);
        xps.insert(dc.primed(t));
      }
      for (int v : ci.members[c]) {
        if (ci.color[v] == side) {
          f1.insert(v);
          f2.insert(dc.primed(v));
        } else {
          f1.insert(dc.primed(v));
          f2.insert(v);
        }
      }
      p.parts.push_back(std::move(xs));
      feas.push_back(std::move(f1));
      p.parts.push_back(std::move(xps));
      feas.push_back(std::move(f2));
    }
  }

  std::set<int> tall;
  for (const auto& part : p.parts) tall.insert(part.begin(), part.end());
  Rational lam_sum, feas_sum;
  for (size_t i = 0; i < p.parts.size(); ++i) {
    std::set<int> rest;
    std::set_difference(tall.begin(), tall.end(), p.parts[i].begin(), p.parts[i].end(),
                        std::inserter(rest, rest.begin()));
    CutResult cr = max_flow_min_cut(dc.cover.g, dc.cover.cap, p.parts[i], rest);
    p.cuts.push_back(cr.cut);
    lam_sum += cr.value;
    feas_sum += cover_cut_capacity(dc.cover.g, dc.cover.cap, feas[i]);
  }
  p.capacity = lam_sum / Rational(2);
  if (p.capacity > feas_sum / Rational(2))
    throw invariant_error("minimum cuts exceed the feasible component cuts");
  if (feas_sum / Rational(2) > barrier_capacity(base, b))
    throw invariant_error("component cuts exceed the barrier capacity");
  normalize_partition_cuts(dc, dc.cover.cap, p);
  return p;
}

ParityReport value_parity_check(const Network& n, const Rational& value) {
  auto [even, mod4] = capacity_parity_conditions(n);
  ParityReport r;
  r.even_caps = even;
  r.deltas_mod_4 = mod4;
  r.value_integral = value.is_integer();
  r.value_even = value.is_even_integer();
  r.holds = (!even || r.value_integral) && (!mod4 || r.value_even);
  return r;
}

OddWalkResult max_odd_walk_packing(const Network& n) {
  DoubleCover dc = build_double_cover(n);
  CommodityGraph h;
  if (n.terminals.size() >= 2) {
    h = build_commodity_graph(dc).first;
  } else {
    for (int t : n.terminals) h.pairs.push_back({t, dc.primed(t)});
  }

  OddWalkResult res;
  if (n.terminals.size() < 2) {
    res.partition = min_proper_partition(dc, dc.cover.cap, h);
  } else {
    auto [even, mod4] = capacity_parity_conditions(n);
    MultiflowResult mf = (even && mod4) ? max_multiflow_integer(dc, dc.cover.cap, h)
                                        : max_multiflow_fractional(dc, dc.cover.cap, h);
    Packing symmetric = symmetrize(dc, mf.packing);
    res.packing = project_packing(dc, symmetric);
    res.partition = std::move(mf.certificate);
  }
  res.value = res.packing.value();
  res.barrier = partition_to_barrier(dc, res.partition);

  if (res.value != res.partition.capacity)
    throw invariant_error("packing value misses the partition capacity");
  if (res.value != barrier_capacity(n, res.barrier))
    throw invariant_error("packing value misses the barrier capacity");

  ParityReport pr = value_parity_check(n, res.value);
  if (!pr.holds) throw invariant_error("value parity promise failed");
  for (const auto& item : res.packing.items) {
    WalkClass wc = classify_walk(n, item.walk);
    if (!wc.is_t_walk || !wc.is_odd) throw invariant_error("packed walk is not an odd T-walk");
    if (pr.even_caps && !item.weight.is_half_integer())
      throw invariant_error("weight is not half-integer under even capacities");
    if (pr.deltas_mod_4 && !item.weight.is_integer())
      throw invariant_error("weight is not integer under the mod-4 degree condition");
  }
  if (!validate_packing(n, res.packing).empty())
    throw invariant_error("packing overloads a capacity");
  return res;
}

}  // namespace oddpack
