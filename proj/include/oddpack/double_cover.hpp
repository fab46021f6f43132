#pragma once

#include <set>
#include <utility>
#include <vector>

#include "oddpack/graph.hpp"

namespace oddpack {

// Symmetric bipartite double cover of a network. For base vertex i the cover
// holds i (unprimed) and i + n (primed, named with a ' suffix); for base edge
// j it holds 2j = uv' (id#0) and 2j+1 = u'v (id#1), each with half the base
// capacity. The prime map is a fixed-point-free involution.
struct DoubleCover {
  Network base;
  Network cover;
  int n_base = 0;  // base vertex count

  int primed(int base_v) const { return base_v + n_base; }
  bool is_primed(int cover_v) const { return cover_v >= n_base; }
  int base_vertex(int cover_v) const { return is_primed(cover_v) ? cover_v - n_base : cover_v; }
  int sym_vertex(int cover_v) const {
    return is_primed(cover_v) ? cover_v - n_base : cover_v + n_base;
  }
  int base_edge(int cover_e) const { return cover_e / 2; }
  int sym_edge(int cover_e) const { return cover_e ^ 1; }
};

DoubleCover build_double_cover(const Network& n);

// Commodity graph H on the cover's terminal set: complete bipartite between
// T and T' minus the perfect matching {t t'}. Endpoints are cover vertex
// indices.
struct CommodityGraph {
  std::vector<std::pair<int, int>> pairs;  // (t, t') per base terminal, in terminal order
  std::vector<std::pair<int, int>> edges;  // (t_i, t_j') for i != j

  bool allows(int a, int b) const {
    for (auto [x, y] : edges)
      if ((x == a && y == b) || (x == b && y == a)) return true;
    return false;
  }
};

struct AnticliqueFamilies {
  std::vector<std::set<int>> a1;  // {T, T'}
  std::vector<std::set<int>> a2;  // {{t, t'} : t in T}
};

// Requires at least two terminals; the degenerate empty commodity graph can
// be value-constructed directly where callers need it.
std::pair<CommodityGraph, AnticliqueFamilies> build_commodity_graph(const DoubleCover& dc);

// Image of a cover walk under the prime involution.
Walk sym_walk(const DoubleCover& dc, const Walk& w);

// Lifts an odd x-y T-walk of the base to the x-y' cover walk starting on the
// unprimed side. The symmetric lift is sym_walk of the result.
Walk lift_walk(const DoubleCover& dc, const Walk& w);

// Projects a cover walk edge-by-edge down to the base.
Walk project_walk(const DoubleCover& dc, const Walk& w);

// Projects a packing of t1-t2'-type cover walks to a base packing of odd
// T-walks, merging identical preimages. Value is preserved; per base edge,
// load(uv) = load(uv') + load(u'v).
Packing project_packing(const DoubleCover& dc, const Packing& q);

// Returns (P + P')/2. Requires the pair-load bound
// load(uv') + load(u'v) <= 2 cap~(uv) so the result is feasible w.r.t. cap~.
Packing symmetrize(const DoubleCover& dc, const Packing& p);

}  // namespace oddpack
