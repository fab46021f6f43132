#pragma once

#include <set>
#include <vector>

#include "oddpack/graph.hpp"

namespace oddpack {

// Undirected max flow between vertex sets. flow[e] is the net amount pushed
// from edges[e].u to edges[e].v (negative = opposite direction). The cut is
// the inclusion-minimal min cut on the source side (residual-reachable set),
// computed before the flow is canonicalized by cycle cancellation.
struct CutResult {
  Rational value;
  std::set<int> cut;           // vertices on the source side
  std::vector<Rational> flow;  // per edge, signed
};

CutResult max_flow_min_cut(const Multigraph& g, const std::vector<Rational>& cap,
                           const std::set<int>& sources, const std::set<int>& sinks);

// Local connectivity lambda(X, Y) = min cut separating X from Y; 0 if either
// side is empty. X and Y must be disjoint.
Rational local_connectivity(const Multigraph& g, const std::vector<Rational>& cap,
                            const std::set<int>& X, const std::set<int>& Y);

// Decomposes a signed edge flow into source->sink weighted walks (paths in
// the flow support) plus nothing else; conservation off sources/sinks is
// required and cycles must have been canceled beforehand.
Packing decompose_flow(const Multigraph& g, const std::vector<Rational>& flow,
                       const std::set<int>& sources, const std::set<int>& sinks);

// Splits an inner-Eulerian unit multigraph into edge-disjoint trails between
// terminals plus cyclic leftovers, pairing edges at non-terminals in edge
// order. Every edge is used exactly once across the two lists.
struct EulerianDecomposition {
  std::vector<Walk> t_trails;  // endpoints are distinct terminals
  std::vector<Walk> cyclic;    // closed walks, including chains that return to their start
};

EulerianDecomposition eulerian_decompose(const Multigraph& g, const std::vector<char>& is_terminal);

// Splitting off the pair (e1, e2) at vertex v: removes e1 = va and e2 = vb
// and, when a != b, adds a new edge ab. Records enough to lift walks back.
struct SplitRecord {
  int at = -1;            // vertex the split happened at (old indexing)
  std::string e1_id, e2_id;
  std::string new_id;     // empty when a == b (pure deletion)
};

struct SplitResult {
  Multigraph g;
  SplitRecord rec;
};

SplitResult split_off(const Multigraph& g, int v, int e1, int e2, const std::string& new_id);

// Rewrites a walk in the split graph back to the original graph by expanding
// each occurrence of the new edge into the two replaced edges through v.
Walk unsplit_walk(const Multigraph& before, const Multigraph& after, const SplitRecord& rec,
                  const Walk& w);

}  // namespace oddpack
