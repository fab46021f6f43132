#pragma once

#include "oddpack/graph.hpp"

namespace oddpack {

// Random instance generation. The seed fully determines the output; all
// draws come from one mt19937_64 stream in a fixed order.
struct GenOptions {
  unsigned long long seed = 1;
  int max_vertices = 6;
  int max_edges = 12;
  bool eulerian = false;   // pair up odd-degree non-terminals with new edges
  bool even_caps = false;  // capacities from {2, 4}
  bool cap2 = false;       // capacities identically 2
};

// Connected random multigraph (spanning tree plus extra edges), 2-4
// terminals, integer capacities <= 4.
Network generate_instance(const GenOptions& opt);

}  // namespace oddpack
