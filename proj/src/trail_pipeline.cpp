#include "oddpack/trail_pipeline.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "oddpack/double_cover.hpp"
#include "oddpack/multiflow.hpp"

namespace oddpack {

namespace {

int alive_degree(const SignedValenceNetwork& svn, int v) {
  int d = 0;
  for (int e = 0; e < svn.g.n_edges(); ++e)
    if (svn.alive[e] && (svn.g.edges[e].u == v || svn.g.edges[e].v == v)) ++d;
  return d;
}

std::vector<int> alive_incident(const SignedValenceNetwork& svn, int v) {
  std::vector<int> out;
  for (int e = 0; e < svn.g.n_edges(); ++e)
    if (svn.alive[e] && (svn.g.edges[e].u == v || svn.g.edges[e].v == v)) out.push_back(e);
  return out;
}

std::string fresh_vertex_name(const Multigraph& g, std::string base) {
  while (g.vertex_index.count(base)) base += "~";
  return base;
}

std::string fresh_edge_id(const Multigraph& g, std::string base) {
  while (g.edge_index.count(base)) base += "~";
  return base;
}

void pop_last_edge(Multigraph& g, int expect) {
  if (g.n_edges() - 1 != expect) throw invariant_error("edge undo out of order");
  g.edge_index.erase(g.edges.back().id);
  g.edges.pop_back();
}

void pop_last_vertex(Multigraph& g, int expect) {
  if (g.n_vertices() - 1 != expect) throw invariant_error("vertex undo out of order");
  if (g.degree(expect) != 0) throw invariant_error("removing a vertex that still has edges");
  g.vertex_index.erase(g.vertex_names.back());
  g.vertex_names.pop_back();
}

// Cover edge 2j carries valence (j, 0), 2j+1 carries (j, 1); the traversal
// direction transfers unchanged.
VTrail project_to_valences(const Walk& w) {
  VTrail out;
  out.reserve(w.size());
  for (const Step& s : w) out.push_back(VStep{s.edge / 2, s.edge % 2, s.forward});
  return out;
}

VTrail reverse_vtrail(const VTrail& w) {
  VTrail out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    VStep s = *it;
    s.forward = !s.forward;
    out.push_back(s);
  }
  return out;
}

}  // namespace

ComponentClassification initial_classify(const Network& n) {
  for (int e = 0; e < n.g.n_edges(); ++e)
    if (n.cap[e] != Rational(2))
      throw input_error("capacity of edge '" + n.g.edges[e].id + "' must be 2");
  for (int v = 0; v < n.g.n_vertices(); ++v)
    if (!n.is_terminal[v] && n.g.degree(v) % 2 != 0)
      throw input_error("non-terminal vertex '" + n.g.vertex_names[v] + "' has odd degree");

  DoubleCover dc = build_double_cover(n);
  ComponentClassification cc;
  cc.base = n;

  // Unit cover walks of the maximum multiflow.
  std::vector<Walk> units;
  if ((int)n.terminals.size() >= 2) {
    CommodityGraph h = build_commodity_graph(dc).first;
    MultiflowResult mf = max_multiflow_integer(dc, dc.cover.cap, h);
    for (const auto& it : mf.packing.items) {
      if (!it.weight.is_integer() || it.weight.numerator() <= 0)
        throw invariant_error("unit multiflow weights must be positive integers");
      for (long long k = 0; k < it.weight.numerator(); ++k) units.push_back(it.walk);
    }
    Rational val = mf.packing.value();
    if (!val.is_integer() || val != Rational((long long)units.size()))
      throw invariant_error("unit multiflow value does not match its walk count");
  }
  cc.p = (int)units.size();

  std::vector<char> used(dc.cover.g.n_edges(), 0);
  for (const Walk& w : units)
    for (const Step& s : w) {
      if (used[s.edge]) throw invariant_error("unit multiflow overloads a cover edge");
      used[s.edge] = 1;
    }
  for (const Walk& w : units) cc.p_trails.push_back(project_to_valences(w));

  // Leftover subgraph of the cover, then its trail decomposition.
  Multigraph left;
  for (const std::string& name : dc.cover.g.vertex_names) left.add_vertex(name);
  std::vector<int> orig;
  for (int e = 0; e < dc.cover.g.n_edges(); ++e) {
    if (used[e]) continue;
    left.add_edge(dc.cover.g.edges[e].id, dc.cover.g.edges[e].u, dc.cover.g.edges[e].v);
    orig.push_back(e);
  }
  EulerianDecomposition dec = eulerian_decompose(left, dc.cover.is_terminal);

  auto translate = [&](const Walk& w) {
    Walk out = w;
    for (Step& s : out) s.edge = orig[s.edge];
    return project_to_valences(out);
  };

  for (const Walk& w : dec.t_trails) {
    int a = walk_start(left, w), b = walk_end(left, w);
    int ba = dc.base_vertex(a), bb = dc.base_vertex(b);
    if (ba == bb) {
      if (w.size() % 2 == 0)
        throw invariant_error("terminal-to-mirror leftover trail must be odd");
      cc.r_trails.push_back(translate(w));
    } else if (dc.is_primed(a) == dc.is_primed(b)) {
      if (w.size() % 2 != 0) throw invariant_error("same-side leftover trail must be even");
      cc.q_trails.push_back(translate(w));
    } else {
      throw invariant_error("leftover trail joins opposite sides of distinct terminals");
    }
  }
  for (const Walk& w : dec.cyclic) {
    if (w.size() % 2 != 0) throw invariant_error("closed leftover trail must be even");
    cc.e_trails.push_back(translate(w));
  }

  size_t total = 0;
  for (const auto& w : cc.p_trails) total += w.size();
  for (const auto& w : cc.q_trails) total += w.size();
  for (const auto& w : cc.r_trails) total += w.size();
  for (const auto& w : cc.e_trails) total += w.size();
  if (total != (size_t)dc.cover.g.n_edges())
    throw invariant_error("classification must use every valence exactly once");
  return cc;
}

SignedValenceNetwork terminal_evacuation(const ComponentClassification& cc,
                                         PipelineTrace& trace) {
  const Network& base = cc.base;
  SignedValenceNetwork svn;
  svn.g = base.g;
  svn.sign.assign(svn.g.n_edges(), {0, 0});
  svn.alive.assign(svn.g.n_edges(), 1);

  trace.p = cc.p;
  trace.q = (int)cc.q_trails.size();
  trace.r = (int)cc.r_trails.size();
  trace.e = (int)cc.e_trails.size();

  std::vector<int> ends_at(svn.g.n_vertices(), 0);
  auto add_ends = [&](const std::vector<VTrail>& list) {
    for (const VTrail& w : list) {
      if (w.empty()) throw invariant_error("empty component trail");
      ++ends_at[vtrail_start(svn.g, w)];
      ++ends_at[vtrail_end(svn.g, w)];
    }
  };
  add_ends(cc.p_trails);
  add_ends(cc.q_trails);
  add_ends(cc.r_trails);

  std::vector<std::vector<int>> evac_edges(svn.g.n_vertices());
  std::vector<int> next_slot(svn.g.n_vertices(), 0);
  std::vector<int> new_terminals;
  for (int t : base.terminals) {
    if (ends_at[t] % 2 != 0)
      throw invariant_error("odd number of trail ends at terminal " + svn.g.vertex_names[t]);
    int tstar = svn.g.add_vertex(fresh_vertex_name(svn.g, svn.g.vertex_names[t] + "*"));
    EvacRecord rec;
    rec.old_vertex = t;
    rec.new_vertex = tstar;
    for (int k = 0; k < ends_at[t] / 2; ++k) {
      int e = svn.g.add_edge(
          fresh_edge_id(svn.g, svn.g.vertex_names[t] + "*" + std::to_string(k)), t, tstar);
      svn.sign.push_back({0, 0});
      svn.alive.push_back(1);
      rec.edges.push_back(e);
      evac_edges[t].push_back(e);
    }
    new_terminals.push_back(tstar);
    trace.evacuations.push_back(std::move(rec));
  }
  svn.terminals = new_terminals;
  svn.is_terminal.assign(svn.g.n_vertices(), 0);
  for (int t : new_terminals) svn.is_terminal[t] = 1;

  // Extend each open trail to the fresh terminals, consuming evacuation
  // valencies in trail order (start end first).
  auto take_slot = [&](int t, bool outgoing) {
    int s = next_slot[t]++;
    if (s / 2 >= (int)evac_edges[t].size())
      throw invariant_error("evacuation slots exhausted at " + svn.g.vertex_names[t]);
    // Edge runs t -> t*; an outgoing slot (trail end) traverses it forward,
    // an incoming one (trail start) backward.
    return VStep{evac_edges[t][s / 2], s % 2, outgoing};
  };
  auto extend = [&](const VTrail& w) {
    VTrail out;
    out.push_back(take_slot(vtrail_start(svn.g, w), false));
    out.insert(out.end(), w.begin(), w.end());
    out.push_back(take_slot(vtrail_end(svn.g, w), true));
    return out;
  };

  std::vector<VTrail> p_ext, q_ext, r_ext;
  for (const VTrail& w : cc.p_trails) p_ext.push_back(extend(w));
  for (const VTrail& w : cc.q_trails) q_ext.push_back(extend(w));
  for (const VTrail& w : cc.r_trails) r_ext.push_back(extend(w));

  // Sign every valence by its position: odd and closed trails alternate
  // + - + ..., which gives odd trails + at both ends and even open trails a
  // trailing -.
  auto assign_signs = [&](const VTrail& w) {
    for (size_t k = 0; k < w.size(); ++k) {
      Sign& cell = svn.sign[w[k].edge][w[k].which];
      if (cell != 0) throw invariant_error("valence signed twice");
      cell = (k % 2 == 0) ? +1 : -1;
    }
  };
  for (const VTrail& w : p_ext) assign_signs(w);
  for (const VTrail& w : q_ext) assign_signs(w);
  for (const VTrail& w : r_ext) assign_signs(w);
  for (const VTrail& w : cc.e_trails) assign_signs(w);
  for (int e = 0; e < svn.g.n_edges(); ++e)
    for (int wh : {0, 1})
      if (svn.sign[e][wh] == 0) throw invariant_error("unsigned valence after evacuation");

  svn.p = cc.p;
  svn.q = (int)q_ext.size();
  svn.wp = std::move(p_ext);
  svn.wq = std::move(q_ext);

  if (!is_inner_balanced(svn)) throw invariant_error("evacuation broke inner balance");
  if (count_minus_at_terminals(svn) != svn.q)
    throw invariant_error("terminal minus count must equal the even trail count");
  std::set<std::pair<int, int>> seen;
  auto check_witness = [&](const VTrail& w, bool odd) {
    require_vtrail(svn, w);
    if (!is_alternating(svn, w)) throw invariant_error("witness trail not alternating");
    if ((w.size() % 2 == 1) != odd) throw invariant_error("witness trail parity off");
    int a = vtrail_start(svn.g, w), b = vtrail_end(svn.g, w);
    if (a == b || !svn.is_terminal[a] || !svn.is_terminal[b])
      throw invariant_error("witness trail must join distinct terminals");
    for (const VStep& s : w)
      if (!seen.insert({s.edge, s.which}).second)
        throw invariant_error("witness trails share a valence");
  };
  for (const VTrail& w : svn.wp) check_witness(w, true);
  for (const VTrail& w : svn.wq) check_witness(w, false);
  return svn;
}

int supercubicity(const SignedValenceNetwork& svn) {
  int s = 0;
  for (int v = 0; v < svn.g.n_vertices(); ++v) {
    if (svn.is_terminal[v]) continue;
    s += std::max(0, alive_degree(svn, v) - 3);
  }
  return s;
}

void subcubize_step(SignedValenceNetwork& svn, int v, PipelineTrace& trace) {
  if (v < 0 || v >= svn.g.n_vertices() || svn.is_terminal[v])
    throw input_error("can only subcubize an inner vertex");
  std::vector<int> inc = alive_incident(svn, v);
  int deg = (int)inc.size();
  if (deg < 4) throw input_error("vertex is already subcubic");
  int s_before = supercubicity(svn);

  // Transit pairs at v: consecutive witness steps through v, then the
  // greedy opposite-sign pairing of the remaining valencies.
  struct TPair {
    VStep a, b;
    int kind;  // 0 = wp passage, 1 = wq passage, 2 = unused pairing
    int trail = -1, pos = -1;
  };
  std::vector<TPair> pairs;
  auto scan = [&](const std::vector<VTrail>& list, int kind) {
    for (int ti = 0; ti < (int)list.size(); ++ti) {
      const VTrail& w = list[ti];
      for (int i = 0; i + 1 < (int)w.size(); ++i)
        if (vstep_to(svn.g, w[i]) == v) pairs.push_back(TPair{w[i], w[i + 1], kind, ti, i});
    }
  };
  scan(svn.wp, 0);
  scan(svn.wq, 1);

  std::set<std::pair<int, int>> used;
  for (const VTrail& w : svn.wp)
    for (const VStep& s : w) used.insert({s.edge, s.which});
  for (const VTrail& w : svn.wq)
    for (const VStep& s : w) used.insert({s.edge, s.which});
  std::vector<std::pair<int, int>> plus, minus;
  for (int e : inc)
    for (int wh : {0, 1}) {
      if (used.count({e, wh})) continue;
      (svn.sign[e][wh] > 0 ? plus : minus).push_back({e, wh});
    }
  if (plus.size() != minus.size())
    throw invariant_error("unused valencies unbalanced at the split vertex");
  for (size_t i = 0; i < plus.size(); ++i)
    pairs.push_back(TPair{VStep{plus[i].first, plus[i].second, true},
                          VStep{minus[i].first, minus[i].second, true}, 2});
  if ((int)pairs.size() != deg) throw invariant_error("transit plan must have deg(v) pairs");

  // L gets the first pair with distinct edges, or the two lowest edges.
  std::vector<int> lset;
  for (const TPair& pr : pairs)
    if (pr.a.edge != pr.b.edge) {
      lset = {pr.a.edge, pr.b.edge};
      break;
    }
  if (lset.empty()) lset = {inc[0], inc[1]};
  std::sort(lset.begin(), lset.end());
  auto in_l = [&](int e) { return e == lset[0] || e == lset[1]; };

  std::vector<int> split_idx;
  for (int i = 0; i < (int)pairs.size(); ++i) {
    int c = (in_l(pairs[i].a.edge) ? 1 : 0) + (in_l(pairs[i].b.edge) ? 1 : 0);
    if (c == 1) split_idx.push_back(i);
  }
  if (split_idx.size() != 0 && split_idx.size() != 2)
    throw invariant_error("a split must cross 0 or 2 transit pairs");

  const std::string vb = svn.g.vertex_names[v];
  int u = svn.g.add_vertex(fresh_vertex_name(svn.g, vb + "#u"));
  int vm = svn.g.add_vertex(fresh_vertex_name(svn.g, vb + "#m"));
  int w = svn.g.add_vertex(fresh_vertex_name(svn.g, vb + "#w"));
  svn.is_terminal.push_back(0);
  svn.is_terminal.push_back(0);
  svn.is_terminal.push_back(0);
  int n1 = svn.g.add_edge(fresh_edge_id(svn.g, vb + "#a"), u, vm);
  int n2 = svn.g.add_edge(fresh_edge_id(svn.g, vb + "#b"), vm, w);

  std::array<Sign, 2> sgn1{+1, -1}, sgn2{+1, -1};
  for (int k = 0; k < (int)split_idx.size(); ++k) {
    const TPair& pr = pairs[split_idx[k]];
    const VStep& lside = in_l(pr.a.edge) ? pr.a : pr.b;
    Sign s = svn.sign[lside.edge][lside.which];
    sgn1[k] = -s;
    sgn2[k] = s;
  }
  svn.sign.push_back(sgn1);
  svn.sign.push_back(sgn2);
  svn.alive.push_back(1);
  svn.alive.push_back(1);

  for (int e : inc) {
    int target = in_l(e) ? u : w;
    if (svn.g.edges[e].u == v)
      svn.g.edges[e].u = target;
    else
      svn.g.edges[e].v = target;
  }

  // Reroute split witness passages through u - vm - w, higher positions
  // first so earlier insertions stay valid.
  struct Reroute {
    int kind, trail, pos, word;
    bool from_left;
  };
  std::vector<Reroute> rr;
  for (int k = 0; k < (int)split_idx.size(); ++k) {
    const TPair& pr = pairs[split_idx[k]];
    if (pr.kind == 2) continue;
    rr.push_back(Reroute{pr.kind, pr.trail, pr.pos, k, in_l(pr.a.edge)});
  }
  std::sort(rr.begin(), rr.end(), [](const Reroute& a, const Reroute& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.trail != b.trail) return a.trail < b.trail;
    return a.pos > b.pos;
  });
  for (const Reroute& r : rr) {
    VTrail& t = (r.kind == 0 ? svn.wp : svn.wq)[r.trail];
    VStep g1{n1, r.word, true}, g2{n2, r.word, true};
    VTrail ins;
    if (r.from_left) {
      ins = {g1, g2};  // arrive at u, cross to w
    } else {
      g2.forward = false;
      g1.forward = false;
      ins = {g2, g1};  // arrive at w, cross to u
    }
    t.insert(t.begin() + r.pos + 1, ins.begin(), ins.end());
  }

  SubcubizeRecord rec;
  rec.v = v;
  rec.u = u;
  rec.vm = vm;
  rec.w = w;
  rec.n1 = n1;
  rec.n2 = n2;
  rec.left = lset;
  rec.split_pairs = (int)split_idx.size();
  trace.subcubizations.push_back(std::move(rec));

  if (alive_degree(svn, u) != 3 || alive_degree(svn, vm) != 2 ||
      alive_degree(svn, w) != deg - 1 || alive_degree(svn, v) != 0)
    throw invariant_error("split vertex degrees are off");
  if (supercubicity(svn) != s_before - 1)
    throw invariant_error("supercubicity must drop by exactly one");
  if (!is_inner_balanced(svn)) throw invariant_error("split broke inner balance");
  if (count_minus_at_terminals(svn) != svn.q)
    throw invariant_error("split changed the terminal minus count");
  for (const VTrail& t : svn.wp) {
    require_vtrail(svn, t);
    if (!is_alternating(svn, t) || t.size() % 2 == 0)
      throw invariant_error("split broke an odd witness trail");
  }
  for (const VTrail& t : svn.wq) {
    require_vtrail(svn, t);
    if (!is_alternating(svn, t) || t.size() % 2 == 1)
      throw invariant_error("split broke an even witness trail");
  }
}

int classify_case(Sign s1, Sign s2, bool same_direction) {
  if (s1 != s2) return same_direction ? 1 : 2;
  return same_direction ? 3 : 4;
}

std::optional<Irregular> find_irregular(const SignedValenceNetwork& svn) {
  std::optional<Irregular> best4;
  auto check_edge = [&](int e) {
    if (svn.is_terminal[svn.g.edges[e].u] || svn.is_terminal[svn.g.edges[e].v])
      throw invariant_error("irregular edge touches a terminal");
  };
  for (int ti = 0; ti < (int)svn.wp.size(); ++ti) {
    const VTrail& w = svn.wp[ti];
    std::map<int, int> first_pos;
    std::optional<Irregular> local;  // best case 1-3 candidate of this trail
    for (int i = 0; i < (int)w.size(); ++i) {
      auto [it, fresh] = first_pos.emplace(w[i].edge, i);
      if (fresh) continue;
      int j1 = it->second, j2 = i;
      int c = classify_case(svn.vsign(w[j1]), svn.vsign(w[j2]),
                            w[j1].forward == w[j2].forward);
      if (c != 4) {
        if (!local || j1 < local->pos1) local = Irregular{ti, j1, j2, c};
      } else if (!best4 || j2 - j1 < best4->pos2 - best4->pos1) {
        best4 = Irregular{ti, j1, j2, 4};
      }
    }
    if (local) {
      check_edge(w[local->pos1].edge);
      return local;
    }
  }
  if (best4) check_edge(svn.wp[best4->trail][best4->pos1].edge);
  return best4;
}

VTrail apply_case_1_2_3(const SignedValenceNetwork& svn, const VTrail& w, int pos1, int pos2,
                        int case_id) {
  if (pos1 < 0 || pos2 <= pos1 || pos2 >= (int)w.size())
    throw input_error("irregular positions out of range");
  if (w[pos1].edge != w[pos2].edge) throw input_error("positions name different edges");
  int c = classify_case(svn.vsign(w[pos1]), svn.vsign(w[pos2]),
                        w[pos1].forward == w[pos2].forward);
  if (c != case_id || case_id == 4) throw input_error("case id does not match the signs");

  VTrail a(w.begin(), w.begin() + pos1);
  VTrail mid(w.begin() + pos1 + 1, w.begin() + pos2);
  VTrail d(w.begin() + pos2 + 1, w.end());

  VTrail out = a;
  size_t expect;
  if (case_id == 1) {
    VTrail rev = reverse_vtrail(mid);
    out.insert(out.end(), rev.begin(), rev.end());
    expect = w.size() - 2;
  } else if (case_id == 2) {
    if (mid.size() % 2 != 0) throw invariant_error("case 2 fragment must be even");
    expect = w.size() - mid.size() - 2;
  } else {
    if (mid.size() % 2 != 1) throw invariant_error("case 3 fragment must be odd");
    out.push_back(w[pos2]);
    expect = w.size() - mid.size() - 1;
  }
  out.insert(out.end(), d.begin(), d.end());

  if (out.size() != expect) throw invariant_error("rewrite length off");
  require_vtrail(svn, out);
  if (!is_alternating(svn, out)) throw invariant_error("rewrite broke alternation");
  if (vtrail_start(svn.g, out) != vtrail_start(svn.g, w) ||
      vtrail_end(svn.g, out) != vtrail_end(svn.g, w))
    throw invariant_error("rewrite moved the trail endpoints");
  if (out.size() % 2 != w.size() % 2 || out.size() >= w.size())
    throw invariant_error("rewrite must shorten the trail, preserving parity");
  return out;
}

void apply_case_4(SignedValenceNetwork& svn, const Irregular& irr, PipelineTrace& trace) {
  const Multigraph& g = svn.g;
  if (irr.trail < 0 || irr.trail >= (int)svn.wp.size()) throw input_error("bad trail index");
  const VTrail w = svn.wp[irr.trail];
  int j1 = irr.pos1, j2 = irr.pos2;
  if (j1 < 0 || j2 <= j1 || j2 >= (int)w.size() || w[j1].edge != w[j2].edge)
    throw input_error("irregular positions out of range");
  Sign s = svn.vsign(w[j1]);
  if (classify_case(s, svn.vsign(w[j2]), w[j1].forward == w[j2].forward) != 4)
    throw input_error("not a case 4 irregularity");

  int x = vstep_from(g, w[j1]);
  int y = vstep_to(g, w[j1]);
  if (vstep_from(g, w[j2]) != y || vstep_to(g, w[j2]) != x)
    throw invariant_error("case 4 occurrences must oppose each other");
  if (svn.is_terminal[x] || svn.is_terminal[y])
    throw invariant_error("irregular edge touches a terminal");
  if (j1 == 0 || j2 + 1 == (int)w.size())
    throw invariant_error("irregular edge at a trail end");
  int cl = j2 - j1 - 1;
  if (cl < 3 || cl % 2 == 0)
    throw invariant_error("case 4 fragment must be odd of length at least 3");
  if (alive_degree(svn, y) != 3)
    throw invariant_error("fragment vertex must have degree exactly 3");

  const VStep& cfirst = w[j1 + 1];
  const VStep& clast = w[j2 - 1];
  if (vstep_from(g, cfirst) != y || vstep_to(g, clast) != y)
    throw invariant_error("fragment must close at the inner endpoint");
  int eu = cfirst.edge, ev = clast.edge;
  if (eu == ev) throw invariant_error("fragment must leave and return on different edges");
  if (vstep_to(g, cfirst) == vstep_from(g, clast))
    throw invariant_error("fragment neighbors of the closing vertex must differ");
  if (svn.vsign(cfirst) != -s || svn.vsign(clast) != -s)
    throw invariant_error("fragment end valencies must oppose the irregular sign");

  auto mixed = [&](int e) { return svn.sign[e][0] != svn.sign[e][1]; };
  int r;
  if (mixed(eu) && mixed(ev))
    r = std::min(eu, ev);
  else if (mixed(eu))
    r = eu;
  else if (mixed(ev))
    r = ev;
  else
    throw invariant_error("no redundant edge beside the fragment");
  if (svn.is_terminal[g.edges[r].u] || svn.is_terminal[g.edges[r].v])
    throw invariant_error("redundant edge touches a terminal");
  int used_which = (r == eu) ? cfirst.which : clast.which;
  int other_which = 1 - used_which;
  if (svn.sign[r][used_which] != -s || svn.sign[r][other_which] != s)
    throw invariant_error("redundant edge signs are off");

  // Locate the only other use of the redundant edge across the witness.
  int host_kind = -1, host_idx = -1, host_pos = -1;
  for (int kind = 0; kind < 2; ++kind) {
    const auto& list = kind == 0 ? svn.wp : svn.wq;
    for (int ti = 0; ti < (int)list.size(); ++ti)
      for (int i = 0; i < (int)list[ti].size(); ++i)
        if (list[ti][i].edge == r && list[ti][i].which == other_which) {
          if (host_kind >= 0) throw invariant_error("valence used twice across the witness");
          host_kind = kind;
          host_idx = ti;
          host_pos = i;
        }
  }

  // Detour fragment: the part of C between y and the far end of r, oriented
  // away from the r step it replaces.
  VTrail c2;
  if (r == eu)
    c2 = VTrail(w.begin() + j1 + 2, w.begin() + j2);  // far end of r ... y
  else
    c2 = VTrail(w.begin() + j1 + 1, w.begin() + j2 - 1);  // y ... far end of r
  if ((int)c2.size() != cl - 1 || c2.empty())
    throw invariant_error("detour fragment length off");
  int c2a = vstep_from(g, c2.front()), c2b = vstep_to(g, c2.back());

  int subcase;
  if (host_kind < 0)
    subcase = 1;
  else if (host_kind == 0 && host_idx == irr.trail && host_pos > j1 && host_pos < j2)
    subcase = 2;
  else if (host_kind == 0 && host_idx == irr.trail)
    subcase = 3;
  else
    subcase = 4;

  VTrail neww(w.begin(), w.begin() + j1);
  neww.insert(neww.end(), w.begin() + j2 + 1, w.end());
  if (neww.empty()) throw invariant_error("repaired trail collapsed");

  auto splice = [&](VTrail& host, int pos) {
    if (pos < 0 || pos >= (int)host.size() || host[pos].edge != r ||
        host[pos].which != other_which)
      throw invariant_error("splice target mismatch");
    int hf = vstep_from(g, host[pos]), ht = vstep_to(g, host[pos]);
    VTrail frag;
    if (hf == c2a && ht == c2b)
      frag = c2;
    else if (hf == c2b && ht == c2a)
      frag = reverse_vtrail(c2);
    else
      throw invariant_error("detour does not span the replaced step");
    host.erase(host.begin() + pos);
    host.insert(host.begin() + pos, frag.begin(), frag.end());
  };

  if (subcase == 3) {
    int pos = host_pos < j1 ? host_pos : host_pos - (j2 + 1) + j1;
    splice(neww, pos);
  } else if (subcase == 4) {
    splice((host_kind == 0 ? svn.wp : svn.wq)[host_idx], host_pos);
  }

  svn.alive[r] = 0;
  svn.wp[irr.trail] = std::move(neww);
  trace.removals.push_back(Case4Record{r, subcase, irr.trail});

  if (!is_inner_balanced(svn)) throw invariant_error("edge removal broke inner balance");
  if (count_minus_at_terminals(svn) != svn.q)
    throw invariant_error("edge removal changed the terminal minus count");
  if ((int)(svn.wp.size() + svn.wq.size()) != svn.p + svn.q)
    throw invariant_error("repair changed the witness count");
  std::set<std::pair<int, int>> seen;
  auto recheck = [&](const VTrail& t) {
    require_vtrail(svn, t);
    int a = vtrail_start(g, t), b = vtrail_end(g, t);
    if (a == b || !svn.is_terminal[a] || !svn.is_terminal[b])
      throw invariant_error("repaired trail must join distinct terminals");
    for (const VStep& vs : t)
      if (!seen.insert({vs.edge, vs.which}).second)
        throw invariant_error("repaired trails share a valence");
  };
  for (const VTrail& t : svn.wp) recheck(t);
  for (const VTrail& t : svn.wq) recheck(t);
}

void regularize(SignedValenceNetwork& svn, PipelineTrace& trace) {
  auto alive_count = [&] {
    long long c = 0;
    for (char a : svn.alive) c += a ? 1 : 0;
    return c;
  };
  auto wp_len = [&] {
    long long s = 0;
    for (const VTrail& w : svn.wp) s += (long long)w.size();
    return s;
  };
  long long a0 = alive_count();
  long long guard = (a0 + 2) * (2 * a0 + 4) + 16;
  while (true) {
    if (--guard < 0) throw invariant_error("regularization failed to terminate");
    std::pair<long long, long long> m0{alive_count(), wp_len()};
    std::optional<Irregular> irr = find_irregular(svn);
    if (!irr) break;
    if (irr->case_id != 4) {
      int edge = svn.wp[irr->trail][irr->pos1].edge;
      svn.wp[irr->trail] =
          apply_case_1_2_3(svn, svn.wp[irr->trail], irr->pos1, irr->pos2, irr->case_id);
      trace.rewrites.push_back(RewriteRecord{irr->trail, irr->case_id, edge});
    } else {
      apply_case_4(svn, *irr, trace);
      AlternatingPacking ap = alternating_packing(svn);
      svn.wp = std::move(ap.odd);
      svn.wq = std::move(ap.even);
    }
    std::pair<long long, long long> m1{alive_count(), wp_len()};
    if (m1 >= m0) throw invariant_error("regularization measure must drop");
  }
  if ((int)svn.wp.size() < svn.p) throw invariant_error("regularization lost odd trails");
}

PipelineResult run_pipeline(const Network& n) {
  ComponentClassification cc = initial_classify(n);
  PipelineResult res;
  SignedValenceNetwork svn = terminal_evacuation(cc, res.trace);

  while (supercubicity(svn) > 0) {
    int v = -1;
    for (int i = 0; i < svn.g.n_vertices() && v < 0; ++i)
      if (!svn.is_terminal[i] && alive_degree(svn, i) >= 4) v = i;
    if (v < 0) throw invariant_error("positive supercubicity without a busy vertex");
    subcubize_step(svn, v, res.trace);
  }

  regularize(svn, res.trace);

  // Only the odd witness trails survive into the answer.
  std::vector<VTrail> trails = svn.wp;

  // Undo the splits, newest first: erase gadget passages from the trails,
  // then put the moved endpoints back and drop the gadget.
  for (auto it = res.trace.subcubizations.rbegin(); it != res.trace.subcubizations.rend();
       ++it) {
    const SubcubizeRecord& rec = *it;
    for (VTrail& w : trails) {
      VTrail out;
      out.reserve(w.size());
      for (size_t i = 0; i < w.size(); ++i) {
        if (w[i].edge != rec.n1 && w[i].edge != rec.n2) {
          out.push_back(w[i]);
          continue;
        }
        if (i + 1 >= w.size()) throw invariant_error("dangling gadget step");
        bool pairok = (w[i].edge == rec.n1 && w[i + 1].edge == rec.n2) ||
                      (w[i].edge == rec.n2 && w[i + 1].edge == rec.n1);
        if (!pairok) throw invariant_error("gadget passage not clean");
        ++i;
      }
      w = std::move(out);
    }
    pop_last_edge(svn.g, rec.n2);
    pop_last_edge(svn.g, rec.n1);
    svn.sign.pop_back();
    svn.sign.pop_back();
    svn.alive.pop_back();
    svn.alive.pop_back();
    for (auto& ed : svn.g.edges) {
      if (ed.u == rec.u || ed.u == rec.w) ed.u = rec.v;
      if (ed.v == rec.u || ed.v == rec.w) ed.v = rec.v;
    }
    pop_last_vertex(svn.g, rec.w);
    pop_last_vertex(svn.g, rec.vm);
    pop_last_vertex(svn.g, rec.u);
    svn.is_terminal.pop_back();
    svn.is_terminal.pop_back();
    svn.is_terminal.pop_back();
  }

  // Undo the evacuation: trim the terminal hops off every trail, then drop
  // the fresh terminals.
  std::set<int> evac_set;
  for (const EvacRecord& rec : res.trace.evacuations)
    evac_set.insert(rec.edges.begin(), rec.edges.end());
  for (VTrail& w : trails) {
    if (w.size() < 3 || !evac_set.count(w.front().edge) || !evac_set.count(w.back().edge))
      throw invariant_error("trail does not start and end on evacuation edges");
    for (size_t i = 1; i + 1 < w.size(); ++i)
      if (evac_set.count(w[i].edge))
        throw invariant_error("evacuation edge inside a trail");
    w.erase(w.begin());
    w.pop_back();
  }
  for (auto it = res.trace.evacuations.rbegin(); it != res.trace.evacuations.rend(); ++it) {
    for (auto eit = it->edges.rbegin(); eit != it->edges.rend(); ++eit) {
      pop_last_edge(svn.g, *eit);
      svn.sign.pop_back();
      svn.alive.pop_back();
    }
    pop_last_vertex(svn.g, it->new_vertex);
    svn.is_terminal.pop_back();
  }

  if (svn.g.n_vertices() != cc.base.g.n_vertices() || svn.g.n_edges() != cc.base.g.n_edges())
    throw invariant_error("graph restore incomplete");
  for (int e = 0; e < svn.g.n_edges(); ++e) {
    const auto& a = svn.g.edges[e];
    const auto& b = cc.base.g.edges[e];
    if (a.id != b.id || a.u != b.u || a.v != b.v)
      throw invariant_error("graph restore mangled an edge");
  }

  Packing pk;
  for (const VTrail& w : trails) {
    Walk bw;
    bw.reserve(w.size());
    for (const VStep& s : w) bw.push_back(Step{s.edge, s.forward});
    WalkClass cls = classify_walk(cc.base, bw);
    if (!cls.is_trail || !cls.is_t_walk || !cls.is_odd)
      throw invariant_error("pipeline output must be odd T-trails");
    pk.items.push_back(WeightedWalk{Rational(1), bw});
  }
  if (!validate_packing(cc.base, pk).empty())
    throw invariant_error("pipeline output violates capacities");
  if ((int)trails.size() < cc.p) throw invariant_error("pipeline lost packing value");
  if ((int)trails.size() > cc.p) throw invariant_error("pipeline exceeded the walk optimum");

  res.packing = merge_packing(pk);
  res.value = cc.p;
  if (res.packing.value() != Rational(cc.p))
    throw invariant_error("pipeline value mismatch after merge");
  return res;
}

}  // namespace oddpack
