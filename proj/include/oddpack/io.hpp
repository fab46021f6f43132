#pragma once

#include <string>

#include "oddpack/odd_walk.hpp"
#include "oddpack/trail_pipeline.hpp"

namespace oddpack {

// JSON formats. Rationals are strings ("2", "3/2") so every value survives a
// round trip exactly; malformed JSON raises input_error with line/column.
//
// instance:  {"vertices":[...], "terminals":[...],
//             "edges":[{"id":"e1","u":"s","v":"t","cap":"2"}]}
// packing:   {"items":[{"weight":"1/2","edges":[["e1","s","t"],...]}]}
// barrier:   {"vertices":[...], "edges":[...]}
// partition: {"parts":[[...]], "cuts":[[...]], "capacity":"2"}  (cover names)

Network parse_instance(const std::string& text);
std::string emit_instance(const Network& n);

Packing parse_packing(const Network& n, const std::string& text);
std::string emit_packing(const Network& n, const Packing& p);

Subgraph parse_barrier(const Network& n, const std::string& text);
std::string emit_barrier(const Network& n, const Subgraph& b);

ProperPartition parse_partition(const DoubleCover& dc, const std::string& text);
std::string emit_partition(const DoubleCover& dc, const ProperPartition& p);

std::string emit_trace(const PipelineTrace& t);

// Graphviz rendering: terminals as boxes; with a barrier, its subgraph is
// emphasized and the I(B) / U(B) edges get distinct styles; with a packing,
// edges are labeled by the items that use them.
std::string export_dot(const Network& n, const Subgraph* barrier, const Packing* packing);

std::string read_file(const std::string& path);

}  // namespace oddpack
