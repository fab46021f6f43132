#pragma once

#include <string>
#include <vector>

#include "oddpack/odd_walk.hpp"

namespace oddpack {

// Exhaustive searches refuse anything past these limits instead of running
// unbounded. ODDPACK_ORACLE_BUDGET="V,E,T,MS" overrides the defaults.
struct OracleBudget {
  int max_vertices = 8;
  int max_edges = 12;
  int max_terminals = 4;
  long long time_limit_ms = 60000;

  static OracleBudget from_env();
};

struct BarrierOracleResult {
  Subgraph barrier;
  Rational capacity;
};

// Minimum-capacity barrier by full enumeration of vertex subsets containing
// the terminals and edge subsets of the induced edges. First minimum in
// enumeration order wins.
BarrierOracleResult min_barrier_exhaustive(const Network& n, const OracleBudget& budget = {});

enum class TrailParity { any, odd, even };
enum class TrailFamily { base_graph, valence_graph };

// Maximum-cardinality integer multiset of edge-simple T-trails respecting
// the capacities (each valence once for the doubled family), by trail
// enumeration in canonical form plus backtracking.
Packing max_trail_packing_exhaustive(const Network& n, TrailParity parity, TrailFamily family,
                                     const OracleBudget& budget = {});

// Maximum integer multiflow on the cover by the same backtracking over
// cover trails whose endpoint pairs the commodity graph allows.
Packing max_multiflow_exhaustive(const DoubleCover& dc, const CommodityGraph& h,
                                 const OracleBudget& budget = {});

struct CertifyReport {
  bool pass = false;
  std::vector<std::string> failures;
};

// Checks that p is a feasible packing of odd T-walks, that barrier is a
// valid odd T-walk barrier, and that value(p) == cap(barrier) exactly.
CertifyReport certify(const Network& n, const Packing& p, const Subgraph& barrier);

}  // namespace oddpack
