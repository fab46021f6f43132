#pragma once

#include <vector>

#include "oddpack/multiflow.hpp"

namespace oddpack {

// Subgraph of the base graph by membership masks. Used for barriers: a
// barrier is a subgraph containing all terminals and no odd T-walk.
struct Subgraph {
  std::vector<char> vmask;  // per vertex index
  std::vector<char> emask;  // per edge index
};

Subgraph full_subgraph(const Multigraph& g);

// Boundary edges (exactly one endpoint inside, "I") and U-turn edges (both
// endpoints inside but the edge left out, "U").
struct BarrierSides {
  std::vector<int> boundary;
  std::vector<int> uturn;
};

BarrierSides barrier_sides(const Network& n, const Subgraph& b);

// True iff the subgraph contains no odd T-walk: every component is
// terminal-free, singular (one terminal), or bipartite with all terminals in
// one side. Throws input_error if a terminal lies outside the subgraph or
// an edge of the subgraph has an endpoint outside it.
bool barrier_check(const Network& n, const Subgraph& b);

// 1/2 cap(boundary) + cap(U-turn edges); cross-checked against the slice.
Rational barrier_capacity(const Network& n, const Subgraph& b);

// Per-edge slice values: 1 on U-turn edges, 1/2 on boundary edges, 0 on
// subgraph edges and on edges fully outside.
std::vector<Rational> slice(const Network& n, const Subgraph& h);

// Certificate conversions between proper partitions of the cover terminal
// set and barriers of the base graph.
Subgraph partition_to_barrier(const DoubleCover& dc, const ProperPartition& x);
ProperPartition barrier_to_partition(const DoubleCover& dc, const Subgraph& b);

struct ParityReport {
  bool even_caps = false;     // all capacities are even integers
  bool deltas_mod_4 = false;  // and cap(delta(v)) is divisible by 4 off terminals
  bool value_integral = false;
  bool value_even = false;
  bool holds = false;  // value has the parity the conditions force
};

ParityReport value_parity_check(const Network& n, const Rational& value);

struct OddWalkResult {
  Packing packing;            // odd T-walks in the base network
  Subgraph barrier;           // minimum barrier, capacity == value
  ProperPartition partition;  // the cover-side certificate behind it
  Rational value;
};

// Maximum fractional odd T-walk packing with a minimum barrier certificate.
// Weights are half-integer for even integer capacities, integer when
// additionally cap(delta(v)) is divisible by 4 at every non-terminal.
OddWalkResult max_odd_walk_packing(const Network& n);

}  // namespace oddpack
