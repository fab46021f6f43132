#include "oddpack/gen.hpp"

#include <algorithm>
#include <random>

namespace oddpack {

Network generate_instance(const GenOptions& opt) {
  if (opt.max_vertices < 2) throw input_error("need at least 2 vertices to place terminals");
  if (opt.max_edges < opt.max_vertices - 1)
    throw input_error("edge budget too small for a connected graph");
  std::mt19937_64 rng(opt.seed);
  auto draw = [&](int k) { return (int)(rng() % (unsigned long long)k); };

  int nv = 2 + draw(opt.max_vertices - 1);
  Network n;
  for (int i = 0; i < nv; ++i) n.g.add_vertex("v" + std::to_string(i));

  int next_edge = 0;
  auto link = [&](int u, int v) {
    n.g.add_edge("e" + std::to_string(next_edge++), u, v);
  };

  // Spanning tree, then extra edges (parallels allowed).
  for (int i = 1; i < nv; ++i) link(draw(i), i);

  std::vector<int> perm(nv);
  for (int i = 0; i < nv; ++i) perm[i] = i;
  for (int i = nv - 1; i > 0; --i) std::swap(perm[i], perm[draw(i + 1)]);
  int nt = 2 + draw(std::min(4, nv) - 1);
  std::vector<int> terms(perm.begin(), perm.begin() + nt);
  std::sort(terms.begin(), terms.end());

  int slack = opt.eulerian ? nv / 2 + 1 : 0;
  int room = std::max(0, opt.max_edges - (nv - 1) - slack);
  int extras = draw(room + 1);
  for (int i = 0; i < extras; ++i) {
    int u = draw(nv);
    int v = draw(nv - 1);
    if (v >= u) ++v;
    link(u, v);
  }

  n.finalize_terminals(terms);

  if (opt.eulerian) {
    std::vector<int> odd;
    for (int v = 0; v < nv; ++v)
      if (!n.is_terminal[v] && n.g.degree(v) % 2 == 1) odd.push_back(v);
    size_t i = 0;
    for (; i + 1 < odd.size(); i += 2) link(odd[i], odd[i + 1]);
    if (i < odd.size()) link(odd[i], n.terminals[0]);
  }

  for (int e = 0; e < n.g.n_edges(); ++e) {
    if (opt.cap2)
      n.cap.push_back(Rational(2));
    else if (opt.even_caps)
      n.cap.push_back(Rational(2 * (1 + draw(2))));
    else
      n.cap.push_back(Rational(1 + draw(4)));
  }
  return n;
}

}  // namespace oddpack
