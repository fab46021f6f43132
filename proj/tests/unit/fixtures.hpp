#pragma once

// Canned instances used across the test files. i1..i4 mirror the shipped
// fixture files; build_net is the general shorthand.

#include <string>
#include <vector>

#include "oddpack/graph.hpp"

namespace testutil {

struct EdgeSpec {
  std::string id, u, v;
  long long cap = 2;
};

inline oddpack::Network build_net(const std::vector<std::string>& vertices,
                                  const std::vector<std::string>& terminals,
                                  const std::vector<EdgeSpec>& edges) {
  oddpack::Network n;
  for (const auto& v : vertices) n.g.add_vertex(v);
  for (const auto& e : edges) {
    n.g.add_edge(e.id, n.g.vertex(e.u), n.g.vertex(e.v));
    n.cap.push_back(oddpack::Rational(e.cap));
  }
  std::vector<int> ts;
  for (const auto& t : terminals) ts.push_back(n.g.vertex(t));
  n.finalize_terminals(std::move(ts));
  return n;
}

// Single edge s-t, cap 2.
inline oddpack::Network make_i1() {
  return build_net({"s", "t"}, {"s", "t"}, {{"e1", "s", "t"}});
}

// Path s-v-t, caps 2.
inline oddpack::Network make_i2() {
  return build_net({"s", "v", "t"}, {"s", "t"}, {{"e1", "s", "v"}, {"e2", "v", "t"}});
}

// Triangle s,t,u with T = {s,t}, caps 2.
inline oddpack::Network make_i3() {
  return build_net({"s", "t", "u"}, {"s", "t"},
                   {{"e1", "s", "t"}, {"e2", "s", "u"}, {"e3", "u", "t"}});
}

// Star: center v joined to terminals t1..t4, caps 2.
inline oddpack::Network make_i4() {
  return build_net({"t1", "t2", "t3", "t4", "v"}, {"t1", "t2", "t3", "t4"},
                   {{"e1", "v", "t1"}, {"e2", "v", "t2"}, {"e3", "v", "t3"}, {"e4", "v", "t4"}});
}

inline oddpack::Walk make_walk(const oddpack::Multigraph& g,
                               const std::vector<std::pair<std::string, bool>>& steps) {
  oddpack::Walk w;
  for (const auto& [id, fwd] : steps) w.push_back(oddpack::Step{g.edge(id), fwd});
  return w;
}

}  // namespace testutil
