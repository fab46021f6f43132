#include "oddpack/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <optional>
#include <sstream>

namespace oddpack {

namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
  Clock::time_point end;
  long long counter = 0;

  explicit Deadline(long long ms) : end(Clock::now() + std::chrono::milliseconds(ms)) {}

  void tick() {
    if (++counter % 4096 != 0) return;
    if (Clock::now() > end) throw input_error("oracle time budget exceeded");
  }
};

void check_budget(const OracleBudget& b, int nv, int ne, int nt) {
  if (nv > b.max_vertices)
    throw input_error("oracle budget: " + std::to_string(nv) + " vertices > " +
                      std::to_string(b.max_vertices));
  if (ne > b.max_edges)
    throw input_error("oracle budget: " + std::to_string(ne) + " edges > " +
                      std::to_string(b.max_edges));
  if (nt > b.max_terminals)
    throw input_error("oracle budget: " + std::to_string(nt) + " terminals > " +
                      std::to_string(b.max_terminals));
}

long long floor_nonneg(const Rational& r) {
  if (r.numerator() < 0) throw input_error("capacity must be nonnegative");
  return r.numerator() / r.denominator();
}

std::vector<std::pair<int, int>> walk_key(const Walk& w) {
  std::vector<std::pair<int, int>> k;
  k.reserve(w.size());
  for (const Step& s : w) k.emplace_back(s.edge, s.forward ? 0 : 1);
  return k;
}

// All edge-simple trails between allowed endpoint pairs, each undirected
// trail once (the direction with the smaller key), honoring zero limits.
template <typename EndpointOk>
std::vector<Walk> enumerate_trails(const Multigraph& g, const std::vector<char>& is_terminal,
                                   const std::vector<long long>& limit, TrailParity parity,
                                   EndpointOk endpoint_ok, Deadline& dl) {
  std::vector<Walk> out;
  std::vector<char> used(g.n_edges(), 0);
  Walk w;

  auto parity_ok = [&](size_t len) {
    if (parity == TrailParity::odd) return len % 2 == 1;
    if (parity == TrailParity::even) return len % 2 == 0;
    return true;
  };

  int start = -1;
  auto extend = [&](auto&& self, int cur) -> void {
    dl.tick();
    if (!w.empty() && is_terminal[cur] && endpoint_ok(start, cur) && parity_ok(w.size())) {
      Walk rev = reverse_walk(w);
      if (walk_key(w) <= walk_key(rev)) out.push_back(w);
    }
    for (int e : g.incident(cur)) {
      if (used[e] || limit[e] <= 0) continue;
      used[e] = 1;
      w.push_back(Step{e, g.edges[e].u == cur});
      self(self, g.other_end(e, cur));
      w.pop_back();
      used[e] = 0;
    }
  };

  for (int t = 0; t < g.n_vertices(); ++t) {
    if (!is_terminal[t]) continue;
    start = t;
    extend(extend, t);
  }
  std::sort(out.begin(), out.end(),
            [](const Walk& a, const Walk& b) { return walk_key(a) < walk_key(b); });
  return out;
}

// Maximum-cardinality multiset of the given trails under the edge limits.
Packing best_multiset(const std::vector<Walk>& trails, std::vector<long long> limit,
                      Deadline& dl) {
  long long units = 0;
  for (long long l : limit) units += l;

  int best = 0;
  std::vector<int> counts(trails.size(), 0), best_counts(trails.size(), 0);

  auto rec = [&](auto&& self, size_t i, int total, long long rem) -> void {
    dl.tick();
    if (total > best) {
      best = total;
      best_counts = counts;
    }
    if (i == trails.size()) return;
    if (total + rem <= best) return;  // every further trail costs >= 1 unit
    long long maxc = rem;
    for (const Step& s : trails[i]) maxc = std::min(maxc, limit[s.edge]);
    for (long long c = maxc; c >= 0; --c) {
      for (const Step& s : trails[i]) limit[s.edge] -= c;
      counts[i] = (int)c;
      self(self, i + 1, total + (int)c, rem - c * (long long)trails[i].size());
      for (const Step& s : trails[i]) limit[s.edge] += c;
    }
    counts[i] = 0;
  };
  rec(rec, 0, 0, units);

  Packing p;
  for (size_t i = 0; i < trails.size(); ++i)
    if (best_counts[i] > 0) p.items.push_back(WeightedWalk{Rational(best_counts[i]), trails[i]});
  return p;
}

}  // namespace

OracleBudget OracleBudget::from_env() {
  OracleBudget b;
  const char* raw = std::getenv("ODDPACK_ORACLE_BUDGET");
  if (!raw) return b;
  std::stringstream ss(raw);
  std::string part;
  long long vals[4];
  int got = 0;
  while (got < 4 && std::getline(ss, part, ',')) {
    try {
      vals[got++] = std::stoll(part);
    } catch (const std::exception&) {
      throw input_error("ODDPACK_ORACLE_BUDGET must be 'V,E,T,MS', got '" + std::string(raw) +
                        "'");
    }
  }
  if (got != 4)
    throw input_error("ODDPACK_ORACLE_BUDGET must be 'V,E,T,MS', got '" + std::string(raw) + "'");
  b.max_vertices = (int)vals[0];
  b.max_edges = (int)vals[1];
  b.max_terminals = (int)vals[2];
  b.time_limit_ms = vals[3];
  return b;
}

BarrierOracleResult min_barrier_exhaustive(const Network& n, const OracleBudget& budget) {
  check_budget(budget, n.g.n_vertices(), n.g.n_edges(), (int)n.terminals.size());
  Deadline dl(budget.time_limit_ms);

  std::vector<int> inner;
  for (int v = 0; v < n.g.n_vertices(); ++v)
    if (!n.is_terminal[v]) inner.push_back(v);

  std::optional<BarrierOracleResult> best;
  for (unsigned long long vbits = 0; vbits < (1ull << inner.size()); ++vbits) {
    Subgraph b;
    b.vmask.assign(n.g.n_vertices(), 0);
    for (int t : n.terminals) b.vmask[t] = 1;
    for (size_t i = 0; i < inner.size(); ++i)
      if (vbits >> i & 1) b.vmask[inner[i]] = 1;

    std::vector<int> induced;
    for (int e = 0; e < n.g.n_edges(); ++e)
      if (b.vmask[n.g.edges[e].u] && b.vmask[n.g.edges[e].v]) induced.push_back(e);

    for (unsigned long long ebits = 0; ebits < (1ull << induced.size()); ++ebits) {
      dl.tick();
      b.emask.assign(n.g.n_edges(), 0);
      for (size_t i = 0; i < induced.size(); ++i)
        if (ebits >> i & 1) b.emask[induced[i]] = 1;
      if (!barrier_check(n, b)) continue;
      Rational cap = barrier_capacity(n, b);
      if (!best || cap < best->capacity) best = BarrierOracleResult{b, cap};
    }
  }
  if (!best) throw invariant_error("no barrier found; the full vertex set always is one");
  return *best;
}

Packing max_trail_packing_exhaustive(const Network& n, TrailParity parity, TrailFamily family,
                                     const OracleBudget& budget) {
  check_budget(budget, n.g.n_vertices(), n.g.n_edges(), (int)n.terminals.size());
  Deadline dl(budget.time_limit_ms);

  Multigraph g;
  std::vector<long long> limit;
  if (family == TrailFamily::base_graph) {
    g = n.g;
    for (const Rational& c : n.cap) limit.push_back(floor_nonneg(c));
  } else {
    for (const std::string& name : n.g.vertex_names) g.add_vertex(name);
    for (const auto& e : n.g.edges) {
      g.add_edge(e.id + "^1", e.u, e.v);
      g.add_edge(e.id + "^2", e.u, e.v);
      limit.push_back(1);
      limit.push_back(1);
    }
  }

  auto tok = [&](int a, int b) { return a != b && n.is_terminal[a] && n.is_terminal[b]; };
  std::vector<Walk> trails = enumerate_trails(g, n.is_terminal, limit, parity, tok, dl);
  return best_multiset(trails, limit, dl);
}

Packing max_multiflow_exhaustive(const DoubleCover& dc, const CommodityGraph& h,
                                 const OracleBudget& budget) {
  const Network& c = dc.cover;
  check_budget(budget, (c.g.n_vertices() + 1) / 2, (c.g.n_edges() + 1) / 2,
               ((int)c.terminals.size() + 1) / 2);
  Deadline dl(budget.time_limit_ms);

  std::vector<long long> limit;
  for (const Rational& cp : c.cap) limit.push_back(floor_nonneg(cp));

  auto hok = [&](int a, int b) { return h.allows(a, b); };
  std::vector<Walk> trails =
      enumerate_trails(c.g, c.is_terminal, limit, TrailParity::any, hok, dl);
  return best_multiset(trails, limit, dl);
}

CertifyReport certify(const Network& n, const Packing& p, const Subgraph& barrier) {
  CertifyReport rep;
  auto fail = [&](const std::string& msg) { rep.failures.push_back(msg); };

  try {
    for (const auto& viol : validate_packing(n, p))
      fail("edge '" + n.g.edges[viol.edge].id + "' load " + viol.load.to_string() +
           " exceeds capacity " + viol.cap.to_string());
    for (size_t i = 0; i < p.items.size(); ++i) {
      if (!(p.items[i].weight > Rational(0))) {
        fail("item " + std::to_string(i) + " has nonpositive weight");
        continue;
      }
      WalkClass cls = classify_walk(n, p.items[i].walk);
      if (!cls.is_t_walk) fail("item " + std::to_string(i) + " is not a T-walk");
      if (!cls.is_odd) fail("item " + std::to_string(i) + " is not odd");
    }
  } catch (const input_error& e) {
    fail(std::string("packing invalid: ") + e.what());
  }

  try {
    if (!barrier_check(n, barrier)) {
      fail("subgraph is not an odd T-walk barrier");
    } else {
      Rational bc = barrier_capacity(n, barrier);
      Rational val = p.value();
      if (val != bc)
        fail("value " + val.to_string() + " differs from barrier capacity " + bc.to_string());
    }
  } catch (const input_error& e) {
    fail(std::string("barrier invalid: ") + e.what());
  }

  rep.pass = rep.failures.empty();
  return rep;
}

}  // namespace oddpack
