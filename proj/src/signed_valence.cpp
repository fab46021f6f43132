#include "oddpack/signed_valence.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace oddpack {

int vstep_from(const Multigraph& g, const VStep& s) {
  return s.forward ? g.edges[s.edge].u : g.edges[s.edge].v;
}

int vstep_to(const Multigraph& g, const VStep& s) {
  return s.forward ? g.edges[s.edge].v : g.edges[s.edge].u;
}

int vtrail_start(const Multigraph& g, const VTrail& w) {
  if (w.empty()) throw input_error("empty valence trail has no start");
  return vstep_from(g, w.front());
}

int vtrail_end(const Multigraph& g, const VTrail& w) {
  if (w.empty()) throw input_error("empty valence trail has no end");
  return vstep_to(g, w.back());
}

void require_vtrail(const SignedValenceNetwork& svn, const VTrail& w) {
  if (w.empty()) throw input_error("empty valence trail");
  std::set<std::pair<int, int>> seen;
  for (size_t i = 0; i < w.size(); ++i) {
    const VStep& s = w[i];
    if (s.edge < 0 || s.edge >= svn.g.n_edges())
      throw input_error("valence step uses an unknown edge");
    if (s.which != 0 && s.which != 1) throw input_error("valence index out of range");
    if (!svn.alive[s.edge]) throw input_error("valence step uses a removed edge");
    if (!seen.insert({s.edge, s.which}).second)
      throw input_error("valence used twice in one trail");
    if (i + 1 < w.size() && vstep_to(svn.g, s) != vstep_from(svn.g, w[i + 1]))
      throw input_error("valence trail steps do not chain");
  }
}

bool is_inner_balanced(const SignedValenceNetwork& svn) {
  std::vector<int> bal(svn.g.n_vertices(), 0);
  for (int e = 0; e < svn.g.n_edges(); ++e) {
    if (!svn.alive[e]) continue;
    for (int i = 0; i < 2; ++i) {
      bal[svn.g.edges[e].u] += svn.sign[e][i];
      bal[svn.g.edges[e].v] += svn.sign[e][i];
    }
  }
  for (int v = 0; v < svn.g.n_vertices(); ++v)
    if (!svn.is_terminal[v] && bal[v] != 0) return false;
  return true;
}

bool is_alternating(const SignedValenceNetwork& svn, const VTrail& w) {
  for (size_t i = 0; i + 1 < w.size(); ++i)
    if (svn.vsign(w[i]) == svn.vsign(w[i + 1])) return false;
  return true;
}

int count_minus_at_terminals(const SignedValenceNetwork& svn) {
  int c = 0;
  for (int e = 0; e < svn.g.n_edges(); ++e) {
    if (!svn.alive[e]) continue;
    int ends = (svn.is_terminal[svn.g.edges[e].u] ? 1 : 0) +
               (svn.is_terminal[svn.g.edges[e].v] ? 1 : 0);
    for (int i = 0; i < 2; ++i)
      if (svn.sign[e][i] < 0) c += ends;
  }
  return c;
}

bool is_bidirected_inner_eulerian(const BidirectedGraph& bg) {
  std::vector<int> bal(bg.g.n_vertices(), 0);
  for (int e = 0; e < bg.g.n_edges(); ++e) {
    bal[bg.g.edges[e].u] += bg.ends[e].first;
    bal[bg.g.edges[e].v] += bg.ends[e].second;
  }
  for (int v = 0; v < bg.g.n_vertices(); ++v)
    if (!bg.is_terminal[v] && bal[v] != 0) return false;
  return true;
}

namespace {

int bend_at(const Multigraph& g, const std::vector<std::pair<int, int>>& ends, int e, int x) {
  return g.edges[e].u == x ? ends[e].first : ends[e].second;
}

}  // namespace

bool is_bidirected_trail(const BidirectedGraph& bg, const Walk& w) {
  if (w.empty()) return false;
  std::set<int> used;
  for (size_t i = 0; i < w.size(); ++i) {
    if (w[i].edge < 0 || w[i].edge >= bg.g.n_edges()) return false;
    if (!used.insert(w[i].edge).second) return false;
    if (i + 1 < w.size()) {
      int x = step_to(bg.g, w[i]);
      if (x != step_from(bg.g, w[i + 1])) return false;
      if (bend_at(bg.g, bg.ends, w[i].edge, x) == bend_at(bg.g, bg.ends, w[i + 1].edge, x))
        return false;
    }
  }
  return true;
}

BidirectedGraph to_bidirected(const SignedValenceNetwork& svn) {
  if (!is_inner_balanced(svn)) throw input_error("signing is not inner balanced");
  BidirectedGraph bg;
  bg.terminals = svn.terminals;
  bg.is_terminal = svn.is_terminal;
  for (const std::string& name : svn.g.vertex_names) bg.g.add_vertex(name);
  for (int e = 0; e < svn.g.n_edges(); ++e) {
    if (!svn.alive[e]) continue;
    for (int i = 0; i < 2; ++i) {
      bg.g.add_edge(svn.g.edges[e].id + (i == 0 ? "^1" : "^2"), svn.g.edges[e].u,
                    svn.g.edges[e].v);
      Sign s = svn.sign[e][i];
      bg.ends.push_back({s, s});
      bg.origin.push_back({e, i});
    }
  }
  if (!is_bidirected_inner_eulerian(bg))
    throw invariant_error("balanced signing produced an unbalanced bidirected graph");
  return bg;
}

namespace {

// Exhaustive maximum-packing search used when splitting-off stalls. Trails
// are enumerated from their lower-indexed terminal, never pass through a
// terminal, and packings are listed with strictly increasing
// (start terminal, first edge) keys.
struct BidiSearch {
  const Multigraph& g;
  const std::vector<std::pair<int, int>>& ends;
  const std::vector<char>& is_term;
  const std::vector<int>& terminals;
  long long target;
  std::vector<int> tindex;
  std::vector<std::vector<int>> adj;
  std::vector<char> used;
  std::vector<Walk> acc;
  long long nodes = 0;
  static constexpr long long node_cap = 10'000'000;

  BidiSearch(const Multigraph& g_, const std::vector<std::pair<int, int>>& ends_,
             const std::vector<char>& is_term_, const std::vector<int>& terminals_,
             long long target_)
      : g(g_), ends(ends_), is_term(is_term_), terminals(terminals_), target(target_) {
    tindex.assign(g.n_vertices(), -1);
    for (size_t i = 0; i < terminals.size(); ++i) tindex[terminals[i]] = static_cast<int>(i);
    adj.assign(g.n_vertices(), {});
    for (int e = 0; e < g.n_edges(); ++e) {
      adj[g.edges[e].u].push_back(e);
      adj[g.edges[e].v].push_back(e);
    }
    used.assign(g.n_edges(), 0);
  }

  void bump() {
    if (++nodes > node_cap)
      throw invariant_error("bidirected packing search exceeded its budget");
  }

  bool pack(long long count, std::pair<int, int> min_key) {
    if (count == target) return true;
    bump();
    // each further trail consumes a free edge slot at two distinct terminals
    long long slots = 0;
    for (int t : terminals)
      for (int e : adj[t])
        if (!used[e]) ++slots;
    if (count + slots / 2 < target) return false;
    for (size_t ti = 0; ti < terminals.size(); ++ti) {
      int t = terminals[ti];
      for (int e : adj[t]) {
        if (used[e]) continue;
        std::pair<int, int> key{static_cast<int>(ti), e};
        if (key < min_key) continue;
        used[e] = 1;
        Walk cur{Step{e, g.edges[e].u == t}};
        int at = g.other_end(e, t);
        if (extend(cur, at, bend_at(g, ends, e, at), static_cast<int>(ti), count, key))
          return true;
        used[e] = 0;
      }
    }
    return false;
  }

  bool extend(Walk& cur, int at, int arrive, int start_ti, long long count,
              std::pair<int, int> key) {
    bump();
    if (is_term[at]) {
      if (tindex[at] <= start_ti) return false;  // closed or non-canonical
      acc.push_back(cur);
      if (pack(count + 1, key)) return true;
      acc.pop_back();
      return false;
    }
    for (int e : adj[at]) {
      if (used[e] || bend_at(g, ends, e, at) == arrive) continue;
      used[e] = 1;
      cur.push_back(Step{e, g.edges[e].u == at});
      int nx = g.other_end(e, at);
      if (extend(cur, nx, bend_at(g, ends, e, nx), start_ti, count, key)) return true;
      cur.pop_back();
      used[e] = 0;
    }
    return false;
  }
};

}  // namespace

std::vector<Walk> bidirected_trail_packing(const BidirectedGraph& bg) {
  if (!is_bidirected_inner_eulerian(bg))
    throw input_error("bidirected graph is not inner Eulerian");

  std::vector<Rational> ones(bg.g.n_edges(), Rational(1));
  std::set<int> tset(bg.terminals.begin(), bg.terminals.end());
  std::vector<std::set<int>> singles, rests;
  std::vector<Rational> lam;
  Rational lam_sum;
  for (int t : bg.terminals) {
    std::set<int> rest = tset;
    rest.erase(t);
    singles.push_back({t});
    rests.push_back(std::move(rest));
    lam.push_back(local_connectivity(bg.g, ones, singles.back(), rests.back()));
    lam_sum += lam.back();
  }
  Rational half = lam_sum / Rational(2);
  if (!half.is_integer()) throw invariant_error("terminal connectivities sum to an odd number");
  long long target = half.numerator();

  Multigraph wg = bg.g;
  std::vector<std::pair<int, int>> wends = bg.ends;
  std::vector<Walk> wreal;
  for (int e = 0; e < bg.g.n_edges(); ++e) wreal.push_back({Step{e, true}});

  auto oriented = [&](const Walk& w, int want_start) {
    return walk_start(bg.g, w) == want_start ? w : reverse_walk(w);
  };

  int next_id = 0;
  bool stalled = false;
  while (!stalled) {
    int v = -1;
    for (int x = 0; x < wg.n_vertices(); ++x)
      if (!bg.is_terminal[x] && wg.degree(x) > 0) {
        v = x;
        break;
      }
    if (v < 0) break;
    std::vector<int> inc = wg.incident(v);
    bool committed = false;
    for (size_t i = 0; i < inc.size() && !committed; ++i)
      for (size_t j = i + 1; j < inc.size() && !committed; ++j) {
        int e1 = inc[i], e2 = inc[j];
        if (bend_at(wg, wends, e1, v) == bend_at(wg, wends, e2, v)) continue;
        int a = wg.other_end(e1, v), b = wg.other_end(e2, v);
        if (a == b && !bg.is_terminal[a] &&
            bend_at(wg, wends, e1, a) == bend_at(wg, wends, e2, b))
          continue;
        SplitResult sr = split_off(wg, v, e1, e2, "~b" + std::to_string(next_id));
        std::vector<Rational> u2(sr.g.n_edges(), Rational(1));
        bool ok = true;
        for (size_t t = 0; t < singles.size() && ok; ++t)
          ok = local_connectivity(sr.g, u2, singles[t], rests[t]) == lam[t];
        if (!ok) continue;
        std::vector<std::pair<int, int>> ends2;
        std::vector<Walk> real2;
        for (int e = 0; e < sr.g.n_edges(); ++e) {
          const std::string& id = sr.g.edges[e].id;
          if (!sr.rec.new_id.empty() && id == sr.rec.new_id) {
            int aa = sr.g.edges[e].u, bb = sr.g.edges[e].v;
            int first = (wg.other_end(e1, v) == aa) ? e1 : e2;
            int second = (first == e1) ? e2 : e1;
            Walk r1 = oriented(wreal[first], aa);
            Walk r2 = oriented(wreal[second], v);
            r1.insert(r1.end(), r2.begin(), r2.end());
            real2.push_back(std::move(r1));
            ends2.push_back({bend_at(wg, wends, first, aa), bend_at(wg, wends, second, bb)});
          } else {
            int old = wg.edge(id);
            ends2.push_back(wends[old]);
            real2.push_back(wreal[old]);
          }
        }
        wg = sr.g;
        wends = std::move(ends2);
        wreal = std::move(real2);
        ++next_id;
        committed = true;
      }
    if (!committed) stalled = true;
  }

  std::vector<Walk> out;
  if (!stalled) {
    for (int e = 0; e < wg.n_edges(); ++e) {
      if (!bg.is_terminal[wg.edges[e].u] || !bg.is_terminal[wg.edges[e].v])
        throw invariant_error("splitting left a non-terminal bidirected end");
      out.push_back(wreal[e]);
    }
  } else {
    BidiSearch search(wg, wends, bg.is_terminal, bg.terminals, target);
    if (!search.pack(0, {-1, -1}))
      throw invariant_error("no maximum bidirected packing found");
    for (const Walk& wt : search.acc) {
      Walk full;
      for (const Step& st : wt) {
        Walk r = oriented(wreal[st.edge], step_from(wg, st));
        full.insert(full.end(), r.begin(), r.end());
      }
      out.push_back(std::move(full));
    }
  }

  if (static_cast<long long>(out.size()) != target)
    throw invariant_error("bidirected packing misses its certified value");
  std::vector<char> used(bg.g.n_edges(), 0);
  for (const Walk& t : out) {
    if (!is_bidirected_trail(bg, t)) throw invariant_error("invalid bidirected trail produced");
    int s = walk_start(bg.g, t), e = walk_end(bg.g, t);
    if (!bg.is_terminal[s] || !bg.is_terminal[e] || s == e)
      throw invariant_error("bidirected trail endpoints are wrong");
    for (size_t i = 0; i + 1 < t.size(); ++i)
      if (bg.is_terminal[step_to(bg.g, t[i])])
        throw invariant_error("bidirected trail passes through a terminal");
    for (const Step& st : t) {
      if (used[st.edge]) throw invariant_error("bidirected trails share an edge");
      used[st.edge] = 1;
    }
  }
  return out;
}

namespace {

std::vector<VTrail> split_vtrail_at_terminals(const SignedValenceNetwork& svn, const VTrail& w) {
  std::vector<VTrail> pieces;
  VTrail cur;
  for (size_t i = 0; i < w.size(); ++i) {
    cur.push_back(w[i]);
    if (i + 1 < w.size() && svn.is_terminal[vstep_to(svn.g, w[i])]) {
      pieces.push_back(cur);
      cur.clear();
    }
  }
  pieces.push_back(cur);
  return pieces;
}

}  // namespace

AlternatingPacking alternating_packing(const SignedValenceNetwork& svn) {
  AlternatingPacking out;
  if (svn.p < 0 || svn.q < 0) throw input_error("negative tightness numbers");
  int total = svn.p + svn.q;
  if (total == 0) return out;
  if (!is_inner_balanced(svn)) throw input_error("signed valence network is not inner balanced");
  if (count_minus_at_terminals(svn) != svn.q)
    throw input_error("q does not match the terminal minus count");

  bool witness_ok = svn.wp.size() + svn.wq.size() == static_cast<size_t>(total);
  if (witness_ok) {
    std::set<std::pair<int, int>> seen;
    auto usable = [&](const VTrail& w, bool want_odd) -> bool {
      try {
        require_vtrail(svn, w);
      } catch (const input_error&) {
        return false;
      }
      int s = vtrail_start(svn.g, w), e = vtrail_end(svn.g, w);
      if (!svn.is_terminal[s] || !svn.is_terminal[e] || s == e) return false;
      if (!is_alternating(svn, w)) return false;
      if ((w.size() % 2 == 1) != want_odd) return false;
      for (const VStep& st : w)
        if (!seen.insert({st.edge, st.which}).second) return false;
      return true;
    };
    for (const VTrail& w : svn.wp)
      if (!usable(w, true)) witness_ok = false;
    for (const VTrail& w : svn.wq)
      if (witness_ok && !usable(w, false)) witness_ok = false;
  }

  if (witness_ok) {
    // Split each witness trail at interior terminals and keep one open
    // piece, preferring an odd one; discarded pieces only free capacity.
    auto keep_piece = [&](const VTrail& w) -> VTrail {
      std::vector<VTrail> pieces = split_vtrail_at_terminals(svn, w);
      const VTrail* open_odd = nullptr;
      const VTrail* open_any = nullptr;
      for (const VTrail& p : pieces) {
        if (vtrail_start(svn.g, p) == vtrail_end(svn.g, p)) continue;
        if (!open_any) open_any = &p;
        if (p.size() % 2 == 1 && !open_odd) open_odd = &p;
      }
      if (!open_any) throw invariant_error("open T-trail split into closed pieces only");
      return open_odd ? *open_odd : *open_any;
    };
    for (const VTrail& w : svn.wp) {
      VTrail p = keep_piece(w);
      (p.size() % 2 == 1 ? out.odd : out.even).push_back(std::move(p));
    }
    for (const VTrail& w : svn.wq) {
      VTrail p = keep_piece(w);
      (p.size() % 2 == 1 ? out.odd : out.even).push_back(std::move(p));
    }
  } else {
    BidirectedGraph bg = to_bidirected(svn);
    std::vector<Walk> packed = bidirected_trail_packing(bg);
    if (packed.size() < static_cast<size_t>(total))
      throw input_error("tightness data cannot be realized by a maximum packing");
    std::vector<VTrail> odds, evens;
    for (const Walk& bw : packed) {
      VTrail vt;
      for (const Step& st : bw)
        vt.push_back(VStep{bg.origin[st.edge].first, bg.origin[st.edge].second, st.forward});
      if (!is_alternating(svn, vt))
        throw invariant_error("bidirected trail is not alternating as a valence trail");
      (vt.size() % 2 == 1 ? odds : evens).push_back(std::move(vt));
    }
    if (static_cast<int>(evens.size()) > svn.q)
      throw invariant_error("even trails exceed the terminal minus count");
    for (VTrail& w : odds) {
      if (static_cast<int>(out.odd.size() + out.even.size()) == total) break;
      out.odd.push_back(std::move(w));
    }
    for (VTrail& w : evens) {
      if (static_cast<int>(out.odd.size() + out.even.size()) == total) break;
      out.even.push_back(std::move(w));
    }
  }

  if (static_cast<int>(out.odd.size()) < svn.p || static_cast<int>(out.even.size()) > svn.q ||
      static_cast<int>(out.odd.size() + out.even.size()) != total)
    throw invariant_error("alternating decomposition counts are off");
  std::set<std::pair<int, int>> all_used;
  auto verify = [&](const VTrail& w, bool odd) {
    require_vtrail(svn, w);
    if (!is_alternating(svn, w)) throw invariant_error("decomposition trail not alternating");
    if ((w.size() % 2 == 1) != odd) throw invariant_error("decomposition trail has wrong parity");
    int s = vtrail_start(svn.g, w), e = vtrail_end(svn.g, w);
    if (!svn.is_terminal[s] || !svn.is_terminal[e] || s == e)
      throw invariant_error("decomposition trail is not a T-trail");
    for (size_t i = 0; i + 1 < w.size(); ++i)
      if (svn.is_terminal[vstep_to(svn.g, w[i])])
        throw invariant_error("decomposition trail passes through a terminal");
    for (const VStep& st : w)
      if (!all_used.insert({st.edge, st.which}).second)
        throw invariant_error("decomposition trails share a valence");
    if (!odd && svn.vsign(w.front()) > 0 && svn.vsign(w.back()) > 0)
      throw invariant_error("even trail lacks a terminal minus valence");
  };
  for (const VTrail& w : out.odd) verify(w, true);
  for (const VTrail& w : out.even) verify(w, false);
  return out;
}

}  // namespace oddpack
