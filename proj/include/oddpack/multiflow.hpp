#pragma once

#include <set>
#include <vector>

#include "oddpack/double_cover.hpp"
#include "oddpack/flow.hpp"

namespace oddpack {

// Partition of the cover terminal set into anticliques of H, each part with
// a minimum cut separating it from the remaining terminals. Capacity is half
// the sum of the cut capacities.
struct ProperPartition {
  std::vector<std::set<int>> parts;  // cover vertex sets covering T~
  std::vector<std::set<int>> cuts;   // per part: X_i <= Y_i <= V - (T~ - X_i)
  Rational capacity;
};

// Minimum proper partition: all singular parts {t,t'}
// except at most one symmetric pair (S, S'), |S| >= 2. Cuts are normalized:
// pairwise disjoint, self-symmetric for singular parts, mutually symmetric
// for the pair. `cap` is the cover capacity vector (usually dc.cover.cap,
// but scaled variants are allowed as long as cap(uv') = cap(u'v)).
ProperPartition min_proper_partition(const DoubleCover& dc, const std::vector<Rational>& cap,
                                     const CommodityGraph& h);

// Partition capacity restricted to one candidate shape, without cuts.
// S is a set of base terminal indices (empty = all-singular shape).
Rational partition_shape_capacity(const Multigraph& g, const std::vector<Rational>& cap,
                                  const std::vector<std::pair<int, int>>& tpairs,
                                  const std::set<int>& S);

// True iff every candidate shape keeps capacity >= bound. Used by the
// splitting engine, which must keep the minimum pinned at the optimum.
bool partition_capacity_at_least(const Multigraph& g, const std::vector<Rational>& cap,
                                 const std::vector<std::pair<int, int>>& tpairs,
                                 const Rational& bound);

// Rewrites the cuts of a partition in place: pairwise disjoint, then
// symmetric (self-symmetric parts get self-symmetric cuts, part pairs
// (X, X') get mutually symmetric cuts). Throws invariant_error if any step
// changes a cut value or the capacity, or breaks containment/disjointness.
void normalize_partition_cuts(const DoubleCover& dc, const std::vector<Rational>& cap,
                              ProperPartition& p);

struct MultiflowResult {
  Packing packing;             // cover walks whose endpoint pairs are H-edges
  ProperPartition certificate; // value == capacity, exact
};

// Maximum multiflow for integral capacities with even cap(delta(v)) at every
// non-terminal cover vertex. Built by unit expansion + splitting-off; the
// value is certified against the minimum proper partition.
MultiflowResult max_multiflow_integer(const DoubleCover& dc, const std::vector<Rational>& cap,
                                      const CommodityGraph& h);

// General capacities: scale to integers, double (restoring evenness), run
// the integer construction, halve. Integer caps hence yield half-integer
// weights.
MultiflowResult max_multiflow_fractional(const DoubleCover& dc, const std::vector<Rational>& cap,
                                         const CommodityGraph& h);

// Free T-trail packing in an inner Eulerian unit-capacity network:
// edge-disjoint T-trails of total number 1/2 sum_t lambda({t}, T - t).
Packing lc_trail_packing(const Network& n);

}  // namespace oddpack
