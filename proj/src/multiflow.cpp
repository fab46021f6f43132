#include "oddpack/multiflow.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace oddpack {

namespace {

Rational cut_capacity(const Multigraph& g, const std::vector<Rational>& cap,
                      const std::set<int>& y) {
  Rational s;
  for (int e = 0; e < g.n_edges(); ++e) {
    bool iu = y.count(g.edges[e].u) > 0;
    bool iv = y.count(g.edges[e].v) > 0;
    if (iu != iv) s += cap[e];
  }
  return s;
}

// Candidate partition shapes: S = {} (all parts singular) or a set of
// >= 2 terminal-pair positions forming one symmetric non-singular pair.
std::vector<std::vector<int>> candidate_shapes(int k) {
  std::vector<std::vector<int>> shapes;
  shapes.push_back({});
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) s.push_back(i);
    if (s.size() >= 2) shapes.push_back(std::move(s));
  }
  return shapes;
}

// Parts of one shape, in canonical order: singular parts in terminal order,
// then the unprimed half of the pair, then the primed half.
std::vector<std::set<int>> shape_parts(const std::vector<std::pair<int, int>>& tpairs,
                                       const std::vector<int>& S) {
  std::vector<char> in_s(tpairs.size(), 0);
  for (int i : S) in_s[i] = 1;
  std::vector<std::set<int>> parts;
  for (size_t i = 0; i < tpairs.size(); ++i)
    if (!in_s[i]) parts.push_back({tpairs[i].first, tpairs[i].second});
  if (!S.empty()) {
    std::set<int> unp, pri;
    for (int i : S) {
      unp.insert(tpairs[i].first);
      pri.insert(tpairs[i].second);
    }
    parts.push_back(std::move(unp));
    parts.push_back(std::move(pri));
  }
  return parts;
}

std::set<int> all_terminals(const std::vector<std::pair<int, int>>& tpairs) {
  std::set<int> t;
  for (auto [a, b] : tpairs) {
    t.insert(a);
    t.insert(b);
  }
  return t;
}

struct LambdaCache {
  const Multigraph& g;
  const std::vector<Rational>& cap;
  std::set<int> tall;
  std::map<std::set<int>, Rational> memo;

  Rational lambda(const std::set<int>& part) {
    auto it = memo.find(part);
    if (it != memo.end()) return it->second;
    std::set<int> rest;
    std::set_difference(tall.begin(), tall.end(), part.begin(), part.end(),
                        std::inserter(rest, rest.begin()));
    Rational v = local_connectivity(g, cap, part, rest);
    memo.emplace(part, v);
    return v;
  }
};

}  // namespace

Rational partition_shape_capacity(const Multigraph& g, const std::vector<Rational>& cap,
                                  const std::vector<std::pair<int, int>>& tpairs,
                                  const std::set<int>& S) {
  std::vector<int> sv(S.begin(), S.end());
  LambdaCache lc{g, cap, all_terminals(tpairs), {}};
  Rational total;
  for (const auto& part : shape_parts(tpairs, sv)) total += lc.lambda(part);
  return total / Rational(2);
}

bool partition_capacity_at_least(const Multigraph& g, const std::vector<Rational>& cap,
                                 const std::vector<std::pair<int, int>>& tpairs,
                                 const Rational& bound) {
  LambdaCache lc{g, cap, all_terminals(tpairs), {}};
  for (const auto& S : candidate_shapes(static_cast<int>(tpairs.size()))) {
    Rational total;
    for (const auto& part : shape_parts(tpairs, S)) total += lc.lambda(part);
    if (total / Rational(2) < bound) return false;
  }
  return true;
}

// Uncrosses the cut family to pairwise disjoint sets and makes every cut
// respect the cover symmetry: self-symmetric for self-symmetric parts,
// mutually symmetric for (X, X') part pairs. Each step replaces min cuts by
// min cuts (submodularity/posimodularity), which is re-verified at the end.
void normalize_partition_cuts(const DoubleCover& dc, const std::vector<Rational>& cap,
                              ProperPartition& p) {
  auto sym_set = [&](const std::set<int>& s) {
    std::set<int> out;
    for (int v : s) out.insert(dc.sym_vertex(v));
    return out;
  };

  std::vector<Rational> lam(p.parts.size());
  for (size_t i = 0; i < p.parts.size(); ++i)
    lam[i] = cut_capacity(dc.cover.g, cap, p.cuts[i]);

  // Pairwise uncrossing.
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < p.cuts.size(); ++i)
      for (size_t j = i + 1; j < p.cuts.size(); ++j) {
        std::set<int> inter;
        std::set_intersection(p.cuts[i].begin(), p.cuts[i].end(), p.cuts[j].begin(),
                              p.cuts[j].end(), std::inserter(inter, inter.begin()));
        if (inter.empty()) continue;
        std::set<int> yi, yj;
        std::set_difference(p.cuts[i].begin(), p.cuts[i].end(), p.cuts[j].begin(),
                            p.cuts[j].end(), std::inserter(yi, yi.begin()));
        std::set_difference(p.cuts[j].begin(), p.cuts[j].end(), p.cuts[i].begin(),
                            p.cuts[i].end(), std::inserter(yj, yj.begin()));
        p.cuts[i] = std::move(yi);
        p.cuts[j] = std::move(yj);
        changed = true;
      }
  }

  // Symmetrization, shrinking only (keeps disjointness).
  std::vector<char> done(p.parts.size(), 0);
  for (size_t i = 0; i < p.parts.size(); ++i) {
    if (done[i]) continue;
    if (sym_set(p.parts[i]) == p.parts[i]) {
      std::set<int> ys = sym_set(p.cuts[i]);
      std::set<int> inter;
      std::set_intersection(p.cuts[i].begin(), p.cuts[i].end(), ys.begin(), ys.end(),
                            std::inserter(inter, inter.begin()));
      p.cuts[i] = std::move(inter);
      done[i] = 1;
    } else {
      size_t j = i + 1;
      for (; j < p.parts.size(); ++j)
        if (!done[j] && sym_set(p.parts[i]) == p.parts[j]) break;
      if (j == p.parts.size())
        throw invariant_error("partition part has no symmetric counterpart");
      std::set<int> yjs = sym_set(p.cuts[j]);
      std::set<int> inter;
      std::set_intersection(p.cuts[i].begin(), p.cuts[i].end(), yjs.begin(), yjs.end(),
                            std::inserter(inter, inter.begin()));
      p.cuts[i] = std::move(inter);
      p.cuts[j] = sym_set(p.cuts[i]);
      done[i] = done[j] = 1;
    }
  }

  // Every rewrite above must have preserved minimality, containment and
  // disjointness; fail hard otherwise.
  Rational total;
  for (size_t i = 0; i < p.parts.size(); ++i) {
    if (cut_capacity(dc.cover.g, cap, p.cuts[i]) != lam[i])
      throw invariant_error("cut normalization changed a cut value");
    for (int x : p.parts[i])
      if (!p.cuts[i].count(x)) throw invariant_error("normalized cut lost its part");
    for (size_t j = 0; j < p.parts.size(); ++j)
      if (i != j)
        for (int x : p.parts[j])
          if (p.cuts[i].count(x)) throw invariant_error("normalized cut touches another part");
    total += lam[i];
  }
  for (size_t i = 0; i < p.cuts.size(); ++i)
    for (size_t j = i + 1; j < p.cuts.size(); ++j) {
      std::set<int> inter;
      std::set_intersection(p.cuts[i].begin(), p.cuts[i].end(), p.cuts[j].begin(),
                            p.cuts[j].end(), std::inserter(inter, inter.begin()));
      if (!inter.empty()) throw invariant_error("normalized cuts are not disjoint");
    }
  if (total / Rational(2) != p.capacity)
    throw invariant_error("cut normalization changed the partition capacity");
}

ProperPartition min_proper_partition(const DoubleCover& dc, const std::vector<Rational>& cap,
                                     const CommodityGraph& h) {
  if (static_cast<int>(cap.size()) != dc.cover.g.n_edges())
    throw invariant_error("cover capacity vector size mismatch");
  for (int e = 0; e < dc.base.g.n_edges(); ++e)
    if (cap[2 * e] != cap[2 * e + 1])
      throw invariant_error("cover capacities are not symmetric");

  ProperPartition best;
  best.capacity = Rational(0);
  if (h.pairs.empty()) return best;

  int k = static_cast<int>(h.pairs.size());
  bool have = false;
  std::vector<int> best_shape;
  for (const auto& S : candidate_shapes(k)) {
    std::set<int> sset(S.begin(), S.end());
    Rational c = partition_shape_capacity(dc.cover.g, cap, h.pairs, sset);
    if (!have || c < best.capacity ||
        (c == best.capacity && std::lexicographical_compare(S.begin(), S.end(),
                                                            best_shape.begin(), best_shape.end()))) {
      have = true;
      best.capacity = c;
      best_shape = S;
    }
  }

  best.parts = shape_parts(h.pairs, best_shape);
  std::set<int> tall = all_terminals(h.pairs);
  for (const auto& part : best.parts) {
    std::set<int> rest;
    std::set_difference(tall.begin(), tall.end(), part.begin(), part.end(),
                        std::inserter(rest, rest.begin()));
    best.cuts.push_back(max_flow_min_cut(dc.cover.g, cap, part, rest).cut);
  }
  normalize_partition_cuts(dc, cap, best);
  return best;
}

namespace {

// Work state of the splitting engine: a unit-capacity multigraph whose edges
// each realize a walk in the original cover graph.
struct SplitEngine {
  Multigraph g;
  std::vector<Walk> real;  // per edge, walk in the cover from edges[e].u to edges[e].v
  std::vector<char> is_terminal;
  int next_id = 0;

  std::vector<Rational> unit_caps() const {
    return std::vector<Rational>(g.n_edges(), Rational(1));
  }

  static Walk reorient(const Walk& w, const Multigraph& cover, int want_start) {
    if (walk_start(cover, w) == want_start) return w;
    return reverse_walk(w);
  }

  // Applies the split of (e1, e2) at v, rebuilding the realization table.
  void commit(const Multigraph& cover, int v, int e1, int e2, const SplitResult& sr) {
    std::vector<Walk> real2;
    real2.reserve(sr.g.n_edges());
    for (int e = 0; e < sr.g.n_edges(); ++e) {
      const std::string& id = sr.g.edges[e].id;
      if (!sr.rec.new_id.empty() && id == sr.rec.new_id) {
        int a = sr.g.edges[e].u;
        int b = sr.g.edges[e].v;
        // cover vertex ids coincide with work vertex ids
        Walk w1 = reorient(real[g.other_end(e1, v) == a ? e1 : e2], cover, a);
        Walk w2 = reorient(real[g.other_end(e1, v) == a ? e2 : e1], cover, v);
        w1.insert(w1.end(), w2.begin(), w2.end());
        if (walk_start(cover, w1) != a || walk_end(cover, w1) != b)
          throw invariant_error("split realization endpoints drifted");
        real2.push_back(std::move(w1));
      } else {
        real2.push_back(real[g.edge(id)]);
      }
    }
    g = sr.g;
    real = std::move(real2);
  }
};

int lowest_busy_inner(const Multigraph& g, const std::vector<char>& is_terminal) {
  for (int v = 0; v < g.n_vertices(); ++v)
    if (!is_terminal[v] && g.degree(v) > 0) return v;
  return -1;
}

}  // namespace

MultiflowResult max_multiflow_integer(const DoubleCover& dc, const std::vector<Rational>& cap,
                                      const CommodityGraph& h) {
  const Multigraph& cover = dc.cover.g;
  if (static_cast<int>(cap.size()) != cover.n_edges())
    throw invariant_error("cover capacity vector size mismatch");
  for (const Rational& c : cap)
    if (!c.is_integer() || c < Rational(0))
      throw input_error("integer multiflow needs integral capacities");
  for (int v = 0; v < cover.n_vertices(); ++v) {
    if (dc.cover.is_terminal[v]) continue;
    Rational s;
    for (int e = 0; e < cover.n_edges(); ++e)
      if (cover.edges[e].u == v || cover.edges[e].v == v) s += cap[e];
    if (!s.is_even_integer())
      throw input_error("integer multiflow needs even cap(delta(v)) at non-terminal " +
                        cover.vertex_names[v]);
  }

  ProperPartition cert = min_proper_partition(dc, cap, h);
  Rational cstar = cert.capacity;

  SplitEngine eng;
  eng.is_terminal = dc.cover.is_terminal;
  for (const std::string& name : cover.vertex_names) eng.g.add_vertex(name);
  for (int e = 0; e < cover.n_edges(); ++e) {
    long long copies = cap[e].numerator();
    for (long long k = 0; k < copies; ++k) {
      eng.g.add_edge(cover.edges[e].id + ":" + std::to_string(k), cover.edges[e].u,
                     cover.edges[e].v);
      eng.real.push_back({Step{e, true}});
    }
  }

  if (!partition_capacity_at_least(eng.g, eng.unit_caps(), h.pairs, cstar))
    throw invariant_error("unit expansion lost the partition optimum");

  while (true) {
    int v = lowest_busy_inner(eng.g, eng.is_terminal);
    if (v < 0) break;
    std::vector<int> inc = eng.g.incident(v);
    bool committed = false;
    for (size_t i = 0; i < inc.size() && !committed; ++i)
      for (size_t j = i + 1; j < inc.size() && !committed; ++j) {
        SplitResult sr =
            split_off(eng.g, v, inc[i], inc[j], "~s" + std::to_string(eng.next_id));
        std::vector<Rational> ones(sr.g.n_edges(), Rational(1));
        if (!partition_capacity_at_least(sr.g, ones, h.pairs, cstar)) continue;
        ++eng.next_id;
        eng.commit(cover, v, inc[i], inc[j], sr);
        committed = true;
      }
    if (!committed)
      throw invariant_error("no admissible split at non-terminal " + cover.vertex_names[v]);
  }

  // Terminal-only graph: H-edges are one-edge commodity trails; a terminal-
  // terminal edge inside T or inside T' ("bad") can be completed through a
  // matching t t' edge sharing a terminal class. Maximum matching realizes
  // the optimum, which the certificate pins down exactly.
  std::vector<char> primed_class(cover.n_vertices(), 0);
  std::vector<int> term_class(cover.n_vertices(), -1);
  for (size_t i = 0; i < h.pairs.size(); ++i) {
    term_class[h.pairs[i].first] = static_cast<int>(i);
    term_class[h.pairs[i].second] = static_cast<int>(i);
    primed_class[h.pairs[i].second] = 1;
  }

  std::vector<int> h_edges, bad_edges, t4_edges;
  for (int e = 0; e < eng.g.n_edges(); ++e) {
    int u = eng.g.edges[e].u, v = eng.g.edges[e].v;
    if (term_class[u] < 0 || term_class[v] < 0)
      throw invariant_error("splitting left a non-terminal edge");
    if (term_class[u] == term_class[v])
      t4_edges.push_back(e);
    else if (primed_class[u] != primed_class[v])
      h_edges.push_back(e);
    else
      bad_edges.push_back(e);
  }

  // Kuhn's matching between bad edges and t-t' edges sharing a class.
  std::vector<int> match_t4(t4_edges.size(), -1), match_bad(bad_edges.size(), -1);
  auto shares_class = [&](int bad, int t4) {
    int c = term_class[eng.g.edges[t4_edges[t4]].u];
    return term_class[eng.g.edges[bad_edges[bad]].u] == c ||
           term_class[eng.g.edges[bad_edges[bad]].v] == c;
  };
  std::vector<char> visited;
  std::function<bool(int)> try_match = [&](int bad) -> bool {
    for (size_t t = 0; t < t4_edges.size(); ++t) {
      if (visited[t] || !shares_class(bad, static_cast<int>(t))) continue;
      visited[t] = 1;
      if (match_t4[t] < 0 || try_match(match_t4[t])) {
        match_t4[t] = bad;
        match_bad[bad] = static_cast<int>(t);
        return true;
      }
    }
    return false;
  };
  int matched = 0;
  for (size_t b = 0; b < bad_edges.size(); ++b) {
    visited.assign(t4_edges.size(), 0);
    if (try_match(static_cast<int>(b))) ++matched;
  }

  if (Rational(static_cast<long long>(h_edges.size()) + matched) != cstar)
    throw invariant_error("terminal graph value does not match the partition optimum");

  Packing packing;
  for (int e : h_edges) {
    int u = eng.g.edges[e].u;
    int start = primed_class[u] ? eng.g.edges[e].v : u;
    packing.items.push_back(WeightedWalk{Rational(1), SplitEngine::reorient(eng.real[e], cover, start)});
  }
  for (size_t b = 0; b < bad_edges.size(); ++b) {
    if (match_bad[b] < 0) continue;
    int be = bad_edges[b];
    int te = t4_edges[match_bad[b]];
    int cls = term_class[eng.g.edges[te].u];
    bool primed_side = primed_class[eng.g.edges[be].u];  // both ends same side
    int shared = primed_side ? h.pairs[cls].second : h.pairs[cls].first;
    int other_end = eng.g.edges[be].u;
    if (term_class[other_end] == cls && primed_class[other_end] == primed_side)
      other_end = eng.g.edges[be].v;
    Walk w = SplitEngine::reorient(eng.real[be], cover, other_end);
    Walk tail = SplitEngine::reorient(eng.real[te], cover, shared);
    w.insert(w.end(), tail.begin(), tail.end());
    packing.items.push_back(WeightedWalk{Rational(1), std::move(w)});
  }
  packing = merge_packing(packing);

  // Final self-checks: feasibility, endpoint pattern, certified value.
  std::vector<Rational> load = packing_loads(cover, packing);
  for (int e = 0; e < cover.n_edges(); ++e)
    if (load[e] > cap[e]) throw invariant_error("multiflow overloads edge " + cover.edges[e].id);
  for (const auto& item : packing.items) {
    int a = walk_start(cover, item.walk), b = walk_end(cover, item.walk);
    if (!h.allows(a, b)) throw invariant_error("multiflow walk endpoints are not an H-edge");
  }
  if (packing.value() != cstar) throw invariant_error("multiflow value drifted from certificate");

  return MultiflowResult{std::move(packing), std::move(cert)};
}

MultiflowResult max_multiflow_fractional(const DoubleCover& dc, const std::vector<Rational>& cap,
                                         const CommodityGraph& h) {
  long long den = 1;
  for (const Rational& c : cap) den = std::lcm(den, c.denominator());
  Rational scale(2 * den);

  std::vector<Rational> scaled;
  scaled.reserve(cap.size());
  for (const Rational& c : cap) scaled.push_back(c * scale);

  MultiflowResult inner = max_multiflow_integer(dc, scaled, h);
  MultiflowResult out;
  out.certificate = min_proper_partition(dc, cap, h);
  for (auto& item : inner.packing.items)
    out.packing.items.push_back(WeightedWalk{item.weight / scale, std::move(item.walk)});
  out.packing = merge_packing(out.packing);
  if (out.packing.value() != out.certificate.capacity)
    throw invariant_error("fractional multiflow value does not match its certificate");
  return out;
}

Packing lc_trail_packing(const Network& n) {
  for (const Rational& c : n.cap)
    if (c != Rational(1)) throw input_error("free trail packing needs unit capacities");
  if (!is_inner_eulerian(n)) throw input_error("free trail packing needs an inner Eulerian graph");

  std::vector<std::set<int>> singles;
  std::vector<std::set<int>> rests;
  std::vector<Rational> lam;
  std::set<int> tset(n.terminals.begin(), n.terminals.end());
  for (int t : n.terminals) {
    std::set<int> rest = tset;
    rest.erase(t);
    singles.push_back({t});
    rests.push_back(rest);
    lam.push_back(local_connectivity(n.g, n.cap, {t}, rest));
  }
  Rational target;
  for (const Rational& l : lam) target += l;
  target = target / Rational(2);
  if (!target.is_integer())
    throw invariant_error("half the terminal connectivity sum is not an integer");

  SplitEngine eng;
  eng.is_terminal = n.is_terminal;
  eng.g = n.g;
  for (int e = 0; e < n.g.n_edges(); ++e) eng.real.push_back({Step{e, true}});

  int next_id = 0;
  while (true) {
    int v = lowest_busy_inner(eng.g, eng.is_terminal);
    if (v < 0) break;
    std::vector<int> inc = eng.g.incident(v);
    bool committed = false;
    for (size_t i = 0; i < inc.size() && !committed; ++i)
      for (size_t j = i + 1; j < inc.size() && !committed; ++j) {
        SplitResult sr = split_off(eng.g, v, inc[i], inc[j], "~s" + std::to_string(next_id));
        std::vector<Rational> ones(sr.g.n_edges(), Rational(1));
        bool ok = true;
        for (size_t t = 0; t < singles.size() && ok; ++t)
          ok = local_connectivity(sr.g, ones, singles[t], rests[t]) == lam[t];
        if (!ok) continue;
        ++next_id;
        eng.commit(n.g, v, inc[i], inc[j], sr);
        committed = true;
      }
    if (!committed)
      throw invariant_error("no connectivity-preserving split at " + n.g.vertex_names[v]);
  }

  Packing out;
  for (int e = 0; e < eng.g.n_edges(); ++e) {
    int u = eng.g.edges[e].u, v = eng.g.edges[e].v;
    if (!n.is_terminal[u] || !n.is_terminal[v])
      throw invariant_error("splitting left a non-terminal trail end");
    out.items.push_back(WeightedWalk{Rational(1), eng.real[e]});
  }
  if (out.value() != target)
    throw invariant_error("trail packing value missed the connectivity bound");
  return out;
}

}  // namespace oddpack
