#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oddpack/rational.hpp"

namespace oddpack {

// Loopless undirected multigraph. Vertices and edges carry the external
// string ids; algorithms work on dense indices. Edge order is insertion
// order, which doubles as the deterministic tie-breaking order everywhere.
struct Multigraph {
  struct Edge {
    std::string id;
    int u = -1;
    int v = -1;
  };

  std::vector<std::string> vertex_names;
  std::vector<Edge> edges;
  std::map<std::string, int> vertex_index;
  std::map<std::string, int> edge_index;

  int n_vertices() const { return static_cast<int>(vertex_names.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }

  int add_vertex(const std::string& name) {
    if (vertex_index.count(name)) throw input_error("duplicate vertex id '" + name + "'");
    int idx = n_vertices();
    vertex_names.push_back(name);
    vertex_index.emplace(name, idx);
    return idx;
  }

  int add_edge(const std::string& id, int u, int v) {
    if (edge_index.count(id)) throw input_error("duplicate edge id '" + id + "'");
    if (u < 0 || u >= n_vertices() || v < 0 || v >= n_vertices())
      throw input_error("edge '" + id + "' references unknown vertex");
    if (u == v) throw input_error("edge '" + id + "' is a loop; loops are not allowed");
    int idx = n_edges();
    edges.push_back(Edge{id, u, v});
    edge_index.emplace(id, idx);
    return idx;
  }

  int vertex(const std::string& name) const {
    auto it = vertex_index.find(name);
    if (it == vertex_index.end()) throw input_error("unknown vertex id '" + name + "'");
    return it->second;
  }

  int edge(const std::string& id) const {
    auto it = edge_index.find(id);
    if (it == edge_index.end()) throw input_error("unknown edge id '" + id + "'");
    return it->second;
  }

  int other_end(int e, int at) const {
    const Edge& ed = edges[e];
    return ed.u == at ? ed.v : ed.u;
  }

  // Degree counting edge multiplicity.
  int degree(int v) const {
    int d = 0;
    for (const Edge& e : edges)
      if (e.u == v || e.v == v) ++d;
    return d;
  }

  // Incident edge indices of v in edge order.
  std::vector<int> incident(int v) const {
    std::vector<int> out;
    for (int i = 0; i < n_edges(); ++i)
      if (edges[i].u == v || edges[i].v == v) out.push_back(i);
    return out;
  }
};

// Capacitated network with a distinguished terminal set.
struct Network {
  Multigraph g;
  std::vector<int> terminals;     // sorted vertex indices
  std::vector<char> is_terminal;  // size n_vertices
  std::vector<Rational> cap;      // size n_edges, each >= 0

  void finalize_terminals(std::vector<int> ts) {
    terminals = std::move(ts);
    std::sort(terminals.begin(), terminals.end());
    is_terminal.assign(g.n_vertices(), 0);
    for (int t : terminals) {
      if (t < 0 || t >= g.n_vertices()) throw input_error("terminal index out of range");
      if (is_terminal[t]) throw input_error("duplicate terminal '" + g.vertex_names[t] + "'");
      is_terminal[t] = 1;
    }
  }
};

// One traversal step: an edge plus its direction (forward = u->v).
struct Step {
  int edge = -1;
  bool forward = true;

  bool operator==(const Step& o) const { return edge == o.edge && forward == o.forward; }
};

using Walk = std::vector<Step>;

inline int step_from(const Multigraph& g, const Step& s) {
  return s.forward ? g.edges[s.edge].u : g.edges[s.edge].v;
}
inline int step_to(const Multigraph& g, const Step& s) {
  return s.forward ? g.edges[s.edge].v : g.edges[s.edge].u;
}

// Index of the first malformed step (bad edge index or broken continuity),
// or nullopt when w is a structurally valid walk. Empty walks are valid.
std::optional<int> walk_defect(const Multigraph& g, const Walk& w);

inline int walk_start(const Multigraph& g, const Walk& w) { return step_from(g, w.front()); }
inline int walk_end(const Multigraph& g, const Walk& w) { return step_to(g, w.back()); }

// Parity of the number of edges. Walks of even length include the empty walk.
inline bool walk_is_odd(const Walk& w) { return w.size() % 2 == 1; }

Walk reverse_walk(const Walk& w);

struct WalkClass {
  bool is_trail = false;    // no repeated edge
  bool is_path = false;     // no repeated vertex
  bool is_t_walk = false;   // endpoints are distinct terminals
  bool is_cyclic = false;   // endpoints coincide
  bool is_odd = false;
};

// Classifies a structurally valid nonempty walk; throws input_error naming
// the offending step index otherwise.
WalkClass classify_walk(const Network& n, const Walk& w);

bool is_inner_eulerian(const Network& n);

// Weighted walk collection. Values and loads are exact rationals.
struct WeightedWalk {
  Rational weight;
  Walk walk;
};

struct Packing {
  std::vector<WeightedWalk> items;

  Rational value() const {
    Rational v;
    for (const auto& it : items) v += it.weight;
    return v;
  }
};

// Per-edge load of the packing (sum of weight * multiplicity).
std::vector<Rational> packing_loads(const Multigraph& g, const Packing& p);

struct CapacityViolation {
  int edge;
  Rational load;
  Rational cap;
};

// Empty result means feasible. Also validates each walk structurally.
std::vector<CapacityViolation> validate_packing(const Network& n, const Packing& p);

// Merge items with identical walks, summing weights; drops zero weights.
Packing merge_packing(const Packing& p);

}  // namespace oddpack
