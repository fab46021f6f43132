#pragma once

#include <array>
#include <vector>

#include "oddpack/flow.hpp"
#include "oddpack/graph.hpp"

namespace oddpack {

using Sign = int;  // +1 or -1

// A step in the valence graph: base edge, which of its two valencies, and
// the traversal direction.
struct VStep {
  int edge = -1;
  int which = 0;  // 0 = first valence, 1 = second
  bool forward = true;
  bool operator==(const VStep&) const = default;
};
using VTrail = std::vector<VStep>;

int vstep_from(const Multigraph& g, const VStep& s);
int vstep_to(const Multigraph& g, const VStep& s);
int vtrail_start(const Multigraph& g, const VTrail& w);
int vtrail_end(const Multigraph& g, const VTrail& w);

// Valence graph (every edge doubled) with a signing, terminals, unit
// capacities, and optional (p, q)-tightness data with its witness packing.
// Dead edges (alive[e] == 0) are removed from the valence graph entirely.
struct SignedValenceNetwork {
  Multigraph g;
  std::vector<int> terminals;
  std::vector<char> is_terminal;
  std::vector<std::array<Sign, 2>> sign;  // per edge, per valence
  std::vector<char> alive;                // per edge
  int p = 0, q = 0;
  std::vector<VTrail> wp, wq;  // witness trails, intended odd / even

  Sign vsign(const VStep& s) const { return sign[s.edge][s.which]; }
};

// Throws input_error unless w is a nonempty chained trail on alive edges
// using each valence at most once.
void require_vtrail(const SignedValenceNetwork& svn, const VTrail& w);

bool is_inner_balanced(const SignedValenceNetwork& svn);
bool is_alternating(const SignedValenceNetwork& svn, const VTrail& w);
int count_minus_at_terminals(const SignedValenceNetwork& svn);

// Bidirected graph: each edge end is ingoing (+1) or outgoing (-1).
// Positive edge = both ends ingoing, negative = both outgoing, directed =
// one of each. Underlying graph has one edge per alive valence.
struct BidirectedGraph {
  Multigraph g;
  std::vector<int> terminals;
  std::vector<char> is_terminal;
  std::vector<std::pair<int, int>> ends;    // per edge: (sign at u, sign at v)
  std::vector<std::pair<int, int>> origin;  // per edge: (base edge, valence)
};

// Inner Eulerian: ingoing ends == outgoing ends at every non-terminal.
bool is_bidirected_inner_eulerian(const BidirectedGraph& bg);

// Valid bidirected trail: chained, each edge once, and at every interior
// vertex the two consecutive edge ends have opposite signs.
bool is_bidirected_trail(const BidirectedGraph& bg, const Walk& w);

// Sign + becomes a positive edge, - a negative one. Alternating valence
// trails correspond exactly to bidirected trails.
BidirectedGraph to_bidirected(const SignedValenceNetwork& svn);

// Maximum integer packing of edge-disjoint bidirected T-trails, of value
// 1/2 sum_t lambda({t}, T - t) on the underlying graph. Built by
// splitting-off with connectivity rechecks, exhaustive fallback at small
// scale. Returned trails never pass through a terminal.
std::vector<Walk> bidirected_trail_packing(const BidirectedGraph& bg);

struct AlternatingPacking {
  std::vector<VTrail> odd;   // >= p trails
  std::vector<VTrail> even;  // <= q trails, each with a - valence at a
                             // terminal end
};

// A (p, q)-tight network decomposes into p + q
// alternating T-trails, at least p of them odd, at most q even, none
// passing through a terminal. Uses the stored witness when it is already
// alternating; otherwise regenerates through the bidirected packing.
AlternatingPacking alternating_packing(const SignedValenceNetwork& svn);

}  // namespace oddpack
