#include "oddpack/flow.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

namespace oddpack {

namespace {

long long lcm_ll(long long a, long long b) {
  long long g = std::gcd(a, b);
  return detail::checked_mul(a / g, b);
}

}  // namespace

CutResult max_flow_min_cut(const Multigraph& g, const std::vector<Rational>& cap,
                           const std::set<int>& sources, const std::set<int>& sinks) {
  if (static_cast<int>(cap.size()) != g.n_edges())
    throw invariant_error("capacity vector size mismatch");
  for (int s : sources)
    if (sinks.count(s)) throw input_error("source and sink sets overlap");

  int m = g.n_edges();
  long long scale = 1;
  for (const Rational& c : cap) {
    if (c < Rational(0)) throw input_error("negative capacity");
    scale = lcm_ll(scale, c.denominator());
  }
  std::vector<long long> c(m), f(m, 0);
  for (int e = 0; e < m; ++e)
    c[e] = detail::checked_mul(cap[e].numerator(), scale / cap[e].denominator());

  auto residual = [&](int e, bool forward) { return forward ? c[e] - f[e] : c[e] + f[e]; };

  std::vector<char> is_source(g.n_vertices(), 0), is_sink(g.n_vertices(), 0);
  for (int s : sources) is_source[s] = 1;
  for (int t : sinks) is_sink[t] = 1;

  long long value = 0;
  if (!sources.empty() && !sinks.empty()) {
    while (true) {
      // BFS over residual arcs, scanning edges in index order for determinism.
      std::vector<int> par_edge(g.n_vertices(), -1);
      std::vector<char> par_fwd(g.n_vertices(), 0), seen(g.n_vertices(), 0);
      std::deque<int> q;
      for (int s : sources) {
        seen[s] = 1;
        q.push_back(s);
      }
      int reached = -1;
      while (!q.empty() && reached < 0) {
        int v = q.front();
        q.pop_front();
        for (int e = 0; e < m && reached < 0; ++e) {
          int u = g.edges[e].u, w = g.edges[e].v;
          int to = -1;
          bool fwd = true;
          if (u == v && residual(e, true) > 0)
            to = w, fwd = true;
          else if (w == v && residual(e, false) > 0)
            to = u, fwd = false;
          else
            continue;
          if (seen[to]) continue;
          seen[to] = 1;
          par_edge[to] = e;
          par_fwd[to] = fwd;
          if (is_sink[to]) reached = to;
          q.push_back(to);
        }
      }
      if (reached < 0) break;
      long long push = -1;
      for (int v = reached; !is_source[v];) {
        int e = par_edge[v];
        long long r = residual(e, par_fwd[v]);
        if (push < 0 || r < push) push = r;
        v = par_fwd[v] ? g.edges[e].u : g.edges[e].v;
      }
      for (int v = reached; !is_source[v];) {
        int e = par_edge[v];
        f[e] += par_fwd[v] ? push : -push;
        v = par_fwd[v] ? g.edges[e].u : g.edges[e].v;
      }
      value += push;
    }
  }

  // Residual-reachable side: the inclusion-minimal min cut (unique across
  // all maximum flows).
  std::set<int> cut;
  {
    std::vector<char> seen(g.n_vertices(), 0);
    std::deque<int> q;
    for (int s : sources) {
      seen[s] = 1;
      q.push_back(s);
    }
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int e = 0; e < m; ++e) {
        int u = g.edges[e].u, w = g.edges[e].v;
        int to = -1;
        if (u == v && residual(e, true) > 0)
          to = w;
        else if (w == v && residual(e, false) > 0)
          to = u;
        else
          continue;
        if (!seen[to]) {
          seen[to] = 1;
          q.push_back(to);
        }
      }
    }
    for (int v = 0; v < g.n_vertices(); ++v)
      if (seen[v]) cut.insert(v);
  }

  // Canonicalize: cancel directed cycles in the flow support so the flow
  // decomposes into source->sink paths only.
  while (true) {
    std::vector<int> state(g.n_vertices(), 0);  // 0 fresh, 1 on stack, 2 done
    std::vector<int> via_edge(g.n_vertices(), -1);
    std::vector<int> pred(g.n_vertices(), -1);
    std::vector<int> cycle_edges;
    std::vector<char> cycle_dir;
    auto support_arc = [&](int e, int from) -> int {
      if (f[e] > 0 && g.edges[e].u == from) return g.edges[e].v;
      if (f[e] < 0 && g.edges[e].v == from) return g.edges[e].u;
      return -1;
    };
    bool found = false;
    for (int root = 0; root < g.n_vertices() && !found; ++root) {
      if (state[root] != 0) continue;
      std::vector<std::pair<int, int>> stack;  // vertex, next edge index to try
      state[root] = 1;
      stack.emplace_back(root, 0);
      while (!stack.empty() && !found) {
        auto& [v, ei] = stack.back();
        if (ei >= m) {
          state[v] = 2;
          stack.pop_back();
          continue;
        }
        int e = ei++;
        int to = support_arc(e, v);
        if (to < 0) continue;
        if (state[to] == 1) {
          // Found a cycle: unwind the stack from v back to `to`.
          cycle_edges.push_back(e);
          cycle_dir.push_back(g.edges[e].u == v);
          for (int i = static_cast<int>(stack.size()) - 1; stack[i].first != to; --i) {
            int pv = stack[i - 1].first;
            int pe = via_edge[stack[i].first];
            cycle_edges.push_back(pe);
            cycle_dir.push_back(g.edges[pe].u == pv);
          }
          found = true;
        } else if (state[to] == 0) {
          state[to] = 1;
          via_edge[to] = e;
          pred[to] = v;
          stack.emplace_back(to, 0);
        }
      }
    }
    if (!found) break;
    long long delta = -1;
    for (size_t i = 0; i < cycle_edges.size(); ++i) {
      long long amount = cycle_dir[i] ? f[cycle_edges[i]] : -f[cycle_edges[i]];
      if (delta < 0 || amount < delta) delta = amount;
    }
    if (delta <= 0) throw invariant_error("cycle cancellation found a non-positive cycle");
    for (size_t i = 0; i < cycle_edges.size(); ++i)
      f[cycle_edges[i]] += cycle_dir[i] ? -delta : delta;
  }

  CutResult out;
  out.value = Rational(value) / Rational(scale);
  out.cut = std::move(cut);
  out.flow.resize(m);
  for (int e = 0; e < m; ++e) out.flow[e] = Rational(f[e]) / Rational(scale);
  return out;
}

Rational local_connectivity(const Multigraph& g, const std::vector<Rational>& cap,
                            const std::set<int>& X, const std::set<int>& Y) {
  if (X.empty() || Y.empty()) return Rational(0);
  return max_flow_min_cut(g, cap, X, Y).value;
}

Packing decompose_flow(const Multigraph& g, const std::vector<Rational>& flow,
                       const std::set<int>& sources, const std::set<int>& sinks) {
  std::vector<Rational> f = flow;
  int m = g.n_edges();
  std::vector<Rational> excess(g.n_vertices());
  for (int e = 0; e < m; ++e) {
    excess[g.edges[e].u] += f[e];
    excess[g.edges[e].v] -= f[e];
  }
  for (int v = 0; v < g.n_vertices(); ++v) {
    bool terminal = sources.count(v) || sinks.count(v);
    if (!terminal && !excess[v].is_zero())
      throw invariant_error("flow is not conserved at vertex " + g.vertex_names[v]);
  }

  Packing out;
  Rational zero(0);
  for (int s : sources) {
    while (excess[s] > zero) {
      Walk w;
      int v = s;
      Rational bottleneck;
      while (true) {
        if (static_cast<int>(w.size()) > m)
          throw invariant_error("flow support contains a cycle");
        if (v != s && excess[v] < zero) break;  // reached a sink with deficit
        int pick = -1;
        bool fwd = true;
        for (int e = 0; e < m; ++e) {
          if (f[e] > zero && g.edges[e].u == v) {
            pick = e;
            fwd = true;
            break;
          }
          if (f[e] < zero && g.edges[e].v == v) {
            pick = e;
            fwd = false;
            break;
          }
        }
        if (pick < 0) throw invariant_error("flow decomposition got stuck at " + g.vertex_names[v]);
        Rational amount = fwd ? f[pick] : -f[pick];
        if (w.empty() || amount < bottleneck) bottleneck = amount;
        w.push_back(Step{pick, fwd});
        v = fwd ? g.edges[pick].v : g.edges[pick].u;
      }
      Rational take = bottleneck;
      if (excess[s] < take) take = excess[s];
      Rational deficit = zero - excess[v];
      if (deficit < take) take = deficit;
      if (take <= zero) throw invariant_error("flow decomposition extracted nothing");
      for (const Step& st : w) f[st.edge] += st.forward ? zero - take : take;
      excess[s] -= take;
      excess[v] += take;
      out.items.push_back(WeightedWalk{take, std::move(w)});
    }
  }
  for (int e = 0; e < m; ++e)
    if (!f[e].is_zero()) throw invariant_error("flow decomposition left residue on edge " + g.edges[e].id);
  return merge_packing(out);
}

EulerianDecomposition eulerian_decompose(const Multigraph& g, const std::vector<char>& is_terminal) {
  int m = g.n_edges();
  // Pair incident edges at every non-terminal, in edge order.
  std::map<std::pair<int, int>, int> partner;  // (vertex, edge) -> edge
  for (int v = 0; v < g.n_vertices(); ++v) {
    if (is_terminal[v]) continue;
    std::vector<int> inc = g.incident(v);
    if (inc.size() % 2 != 0)
      throw invariant_error("odd degree at non-terminal " + g.vertex_names[v]);
    for (size_t i = 0; i + 1 < inc.size(); i += 2) {
      partner[{v, inc[i]}] = inc[i + 1];
      partner[{v, inc[i + 1]}] = inc[i];
    }
  }

  std::vector<char> used(m, 0);
  EulerianDecomposition out;

  auto follow = [&](int start_vertex, int start_edge) {
    Walk w;
    int v = start_vertex;
    int e = start_edge;
    while (true) {
      used[e] = 1;
      w.push_back(Step{e, g.edges[e].u == v});
      v = g.other_end(e, v);
      if (is_terminal[v]) break;
      int nxt = partner.at({v, e});
      if (used[nxt]) break;  // chain closed back on itself
      e = nxt;
    }
    return w;
  };

  for (int t = 0; t < g.n_vertices(); ++t) {
    if (!is_terminal[t]) continue;
    for (int e : g.incident(t)) {
      if (used[e]) continue;
      Walk w = follow(t, e);
      int endv = step_to(g, w.back());
      if (!is_terminal[endv])
        throw invariant_error("open chain did not end at a terminal");
      if (endv == t)
        out.cyclic.push_back(std::move(w));
      else
        out.t_trails.push_back(std::move(w));
    }
  }
  for (int e = 0; e < m; ++e) {
    if (used[e]) continue;
    Walk w = follow(g.edges[e].u, e);
    if (step_to(g, w.back()) != g.edges[e].u)
      throw invariant_error("closed chain did not return to its start");
    out.cyclic.push_back(std::move(w));
  }
  return out;
}

SplitResult split_off(const Multigraph& g, int v, int e1, int e2, const std::string& new_id) {
  if (e1 == e2) throw input_error("cannot split an edge off against itself");
  auto touches = [&](int e) { return g.edges[e].u == v || g.edges[e].v == v; };
  if (!touches(e1) || !touches(e2)) throw input_error("split edges must both touch the vertex");
  int a = g.other_end(e1, v);
  int b = g.other_end(e2, v);

  SplitResult out;
  out.rec.at = v;
  out.rec.e1_id = g.edges[e1].id;
  out.rec.e2_id = g.edges[e2].id;
  for (const std::string& name : g.vertex_names) out.g.add_vertex(name);
  for (int e = 0; e < g.n_edges(); ++e) {
    if (e == e1 || e == e2) continue;
    out.g.add_edge(g.edges[e].id, g.edges[e].u, g.edges[e].v);
  }
  if (a != b) {
    out.rec.new_id = new_id;
    out.g.add_edge(new_id, a, b);
  }
  return out;
}

Walk unsplit_walk(const Multigraph& before, const Multigraph& after, const SplitRecord& rec,
                  const Walk& w) {
  Walk out;
  int f1 = before.edge(rec.e1_id);
  int f2 = before.edge(rec.e2_id);
  int a = before.other_end(f1, rec.at);
  for (const Step& s : w) {
    const std::string& id = after.edges[s.edge].id;
    if (!rec.new_id.empty() && id == rec.new_id) {
      int from = s.forward ? after.edges[s.edge].u : after.edges[s.edge].v;
      int first = (from == a) ? f1 : f2;
      int second = (from == a) ? f2 : f1;
      out.push_back(Step{first, before.edges[first].u == from});
      out.push_back(Step{second, before.edges[second].u == rec.at});
    } else {
      int e = before.edge(id);
      out.push_back(Step{e, s.forward});
    }
  }
  return out;
}

}  // namespace oddpack
