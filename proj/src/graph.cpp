#include "oddpack/graph.hpp"

#include <algorithm>

namespace oddpack {

std::optional<int> walk_defect(const Multigraph& g, const Walk& w) {
  for (size_t i = 0; i < w.size(); ++i) {
    if (w[i].edge < 0 || w[i].edge >= g.n_edges()) return static_cast<int>(i);
    if (i > 0 && step_to(g, w[i - 1]) != step_from(g, w[i])) return static_cast<int>(i);
  }
  return std::nullopt;
}

Walk reverse_walk(const Walk& w) {
  Walk out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(Step{it->edge, !it->forward});
  return out;
}

WalkClass classify_walk(const Network& n, const Walk& w) {
  if (w.empty()) throw input_error("cannot classify an empty walk");
  if (auto bad = walk_defect(n.g, w))
    throw input_error("walk is malformed at step " + std::to_string(*bad));

  WalkClass c;
  c.is_odd = walk_is_odd(w);
  int a = walk_start(n.g, w);
  int b = walk_end(n.g, w);
  c.is_cyclic = (a == b);
  c.is_t_walk = (a != b) && n.is_terminal[a] && n.is_terminal[b];

  std::vector<char> edge_seen(n.g.n_edges(), 0);
  c.is_trail = true;
  for (const Step& s : w) {
    if (edge_seen[s.edge]) {
      c.is_trail = false;
      break;
    }
    edge_seen[s.edge] = 1;
  }

  std::vector<char> vert_seen(n.g.n_vertices(), 0);
  c.is_path = c.is_trail;
  if (c.is_path) {
    vert_seen[a] = 1;
    for (const Step& s : w) {
      int v = step_to(n.g, s);
      if (vert_seen[v]) {
        c.is_path = false;
        break;
      }
      vert_seen[v] = 1;
    }
  }
  return c;
}

bool is_inner_eulerian(const Network& n) {
  for (int v = 0; v < n.g.n_vertices(); ++v) {
    if (n.is_terminal[v]) continue;
    if (n.g.degree(v) % 2 != 0) return false;
  }
  return true;
}

std::vector<Rational> packing_loads(const Multigraph& g, const Packing& p) {
  std::vector<Rational> load(g.n_edges());
  for (const auto& it : p.items)
    for (const Step& s : it.walk) load[s.edge] += it.weight;
  return load;
}

std::vector<CapacityViolation> validate_packing(const Network& n, const Packing& p) {
  for (size_t i = 0; i < p.items.size(); ++i) {
    if (auto bad = walk_defect(n.g, p.items[i].walk))
      throw input_error("packing item " + std::to_string(i) + " is malformed at step " +
                        std::to_string(*bad));
    if (p.items[i].weight < Rational(0))
      throw input_error("packing item " + std::to_string(i) + " has negative weight");
  }
  std::vector<Rational> load = packing_loads(n.g, p);
  std::vector<CapacityViolation> out;
  for (int e = 0; e < n.g.n_edges(); ++e)
    if (load[e] > n.cap[e]) out.push_back(CapacityViolation{e, load[e], n.cap[e]});
  return out;
}

Packing merge_packing(const Packing& p) {
  // Canonical key: the step sequence itself. Identical walks merge; a walk
  // and its reversal stay distinct on purpose (callers that want that
  // canonicalize first).
  std::map<std::vector<std::pair<int, int>>, Rational> acc;
  std::vector<std::vector<std::pair<int, int>>> order;
  for (const auto& it : p.items) {
    std::vector<std::pair<int, int>> key;
    key.reserve(it.walk.size());
    for (const Step& s : it.walk) key.emplace_back(s.edge, s.forward ? 1 : 0);
    auto [pos, fresh] = acc.emplace(key, Rational(0));
    if (fresh) order.push_back(key);
    pos->second += it.weight;
  }
  Packing out;
  for (const auto& key : order) {
    Rational w = acc[key];
    if (w.is_zero()) continue;
    Walk walk;
    walk.reserve(key.size());
    for (auto [e, f] : key) walk.push_back(Step{e, f != 0});
    out.items.push_back(WeightedWalk{w, std::move(walk)});
  }
  return out;
}

}  // namespace oddpack
