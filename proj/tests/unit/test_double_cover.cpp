#include <doctest.h>

#include "fixtures.hpp"
#include "oddpack/double_cover.hpp"

using namespace oddpack;
using testutil::make_walk;

TEST_CASE("cover of i1: four vertices, two unit edges") {
  DoubleCover dc = build_double_cover(testutil::make_i1());
  CHECK(dc.cover.g.n_vertices() == 4);
  CHECK(dc.cover.g.n_edges() == 2);
  CHECK(dc.cover.g.vertex_names[dc.primed(dc.base.g.vertex("s"))] == "s'");
  // st' and s't, each with half the base capacity.
  CHECK(dc.cover.g.edges[0].u == dc.base.g.vertex("s"));
  CHECK(dc.cover.g.edges[0].v == dc.primed(dc.base.g.vertex("t")));
  CHECK(dc.cover.g.edges[1].u == dc.primed(dc.base.g.vertex("s")));
  CHECK(dc.cover.g.edges[1].v == dc.base.g.vertex("t"));
  CHECK(dc.cover.cap[0] == Rational(1));
  CHECK(dc.cover.cap[1] == Rational(1));
}

TEST_CASE("cover sizes of i2 and i3") {
  DoubleCover d2 = build_double_cover(testutil::make_i2());
  CHECK(d2.cover.g.n_vertices() == 6);
  CHECK(d2.cover.g.n_edges() == 4);

  DoubleCover d3 = build_double_cover(testutil::make_i3());
  CHECK(d3.cover.g.n_vertices() == 6);
  CHECK(d3.cover.g.n_edges() == 6);
  for (const Rational& c : d3.cover.cap) CHECK(c == Rational(1));
}

TEST_CASE("prime maps are fixed-point-free involutions") {
  DoubleCover dc = build_double_cover(testutil::make_i3());
  for (int v = 0; v < dc.cover.g.n_vertices(); ++v) {
    CHECK(dc.sym_vertex(v) != v);
    CHECK(dc.sym_vertex(dc.sym_vertex(v)) == v);
    CHECK(dc.base_vertex(v) == dc.base_vertex(dc.sym_vertex(v)));
  }
  for (int e = 0; e < dc.cover.g.n_edges(); ++e) {
    CHECK(dc.sym_edge(e) != e);
    CHECK(dc.sym_edge(dc.sym_edge(e)) == e);
    CHECK(dc.base_edge(e) == dc.base_edge(dc.sym_edge(e)));
  }
}

TEST_CASE("cover is bipartite between primed and unprimed sides") {
  DoubleCover dc = build_double_cover(testutil::make_i3());
  for (const auto& ed : dc.cover.g.edges) CHECK(dc.is_primed(ed.u) != dc.is_primed(ed.v));
}

TEST_CASE("cover terminals are T plus T'") {
  DoubleCover dc = build_double_cover(testutil::make_i3());
  CHECK(dc.cover.terminals.size() == 4);
  for (int t : dc.base.terminals) {
    CHECK(dc.cover.is_terminal[t]);
    CHECK(dc.cover.is_terminal[dc.primed(t)]);
  }
  CHECK(!dc.cover.is_terminal[dc.base.g.vertex("u")]);
  CHECK(!dc.cover.is_terminal[dc.primed(dc.base.g.vertex("u"))]);
}

TEST_CASE("lift_walk alternates sides and lands on the primed twin") {
  DoubleCover d1 = build_double_cover(testutil::make_i1());
  Walk st = make_walk(d1.base.g, {{"e1", true}});
  Walk lifted = lift_walk(d1, st);
  REQUIRE(lifted.size() == 1);
  CHECK(walk_start(d1.cover.g, lifted) == d1.base.g.vertex("s"));
  CHECK(walk_end(d1.cover.g, lifted) == d1.primed(d1.base.g.vertex("t")));

  // (st, ts, st) lifts through alternating primes, ending on the primed
  // side after 3 steps.
  DoubleCover d3 = build_double_cover(testutil::make_i3());
  Walk zig = make_walk(d3.base.g, {{"e1", true}, {"e1", false}, {"e1", true}});
  Walk l3 = lift_walk(d3, zig);
  REQUIRE(l3.size() == 3);
  CHECK(walk_start(d3.cover.g, l3) == d3.base.g.vertex("s"));
  CHECK(walk_end(d3.cover.g, l3) == d3.primed(d3.base.g.vertex("t")));
  CHECK(!walk_defect(d3.cover.g, l3).has_value());

  CHECK_THROWS_AS(lift_walk(d3, make_walk(d3.base.g, {{"e2", true}, {"e3", true}})),
                  input_error);
}

TEST_CASE("project inverts lift") {
  DoubleCover dc = build_double_cover(testutil::make_i3());
  Walk w = make_walk(dc.base.g,
                     {{"e2", true}, {"e3", true}, {"e1", false}, {"e2", true}, {"e3", true}});
  CHECK(project_walk(dc, lift_walk(dc, w)) == w);
}

TEST_CASE("sym_walk is an involution matching the prime map") {
  DoubleCover dc = build_double_cover(testutil::make_i3());
  Walk lifted = lift_walk(dc, make_walk(dc.base.g, {{"e1", true}}));
  Walk sym = sym_walk(dc, lifted);
  CHECK(sym != lifted);
  CHECK(sym_walk(dc, sym) == lifted);
  CHECK(walk_start(dc.cover.g, sym) == dc.sym_vertex(walk_start(dc.cover.g, lifted)));
  CHECK(project_walk(dc, sym) == project_walk(dc, lifted));
}

TEST_CASE("project_packing merges symmetric preimages") {
  DoubleCover dc = build_double_cover(testutil::make_i1());
  Walk st_up = Walk{Step{dc.cover.g.edge("e1#0"), true}};
  Walk st_dn = Walk{Step{dc.cover.g.edge("e1#1"), true}};

  Packing one{{{Rational(1), st_up}}};
  Packing p1 = project_packing(dc, one);
  REQUIRE(p1.items.size() == 1);
  CHECK(p1.items[0].weight == Rational(1));
  CHECK(p1.items[0].walk.size() == 1);
  CHECK(p1.items[0].walk[0].edge == 0);

  Packing both{{{Rational(1), st_up}, {Rational(1), st_dn}}};
  Packing p2 = project_packing(dc, both);
  CHECK(p2.value() == Rational(2));
  REQUIRE(p2.items.size() == 1);  // identical preimages merge
  CHECK(p2.items[0].weight == Rational(2));
}

TEST_CASE("symmetrize averages a packing with its mirror") {
  DoubleCover dc = build_double_cover(testutil::make_i1());
  Walk st_up = Walk{Step{dc.cover.g.edge("e1#0"), true}};
  Packing two{{{Rational(2), st_up}}};
  // load(st') = 2 <= 2 * cap~ = 2, so symmetrize applies.
  Packing s = symmetrize(dc, two);
  CHECK(s.value() == Rational(2));
  auto loads = packing_loads(dc.cover.g, s);
  CHECK(loads[0] == Rational(1));
  CHECK(loads[1] == Rational(1));
}

TEST_CASE("commodity graph on i3") {
  DoubleCover dc = build_double_cover(testutil::make_i3());
  auto [h, anti] = build_commodity_graph(dc);
  int s = dc.base.g.vertex("s"), t = dc.base.g.vertex("t");
  REQUIRE(h.pairs.size() == 2);
  CHECK(h.pairs[0] == std::pair<int, int>{s, dc.primed(s)});
  CHECK(h.pairs[1] == std::pair<int, int>{t, dc.primed(t)});
  // Complete bipartite T x T' minus the matching: exactly s-t' and t-s'.
  CHECK(h.edges.size() == 2);
  CHECK(h.allows(s, dc.primed(t)));
  CHECK(h.allows(dc.primed(t), s));
  CHECK(h.allows(t, dc.primed(s)));
  CHECK(!h.allows(s, dc.primed(s)));
  CHECK(!h.allows(s, t));

  REQUIRE(anti.a1.size() == 2);
  CHECK(anti.a1[0] == std::set<int>{s, t});
  CHECK(anti.a1[1] == std::set<int>{dc.primed(s), dc.primed(t)});
  REQUIRE(anti.a2.size() == 2);
  CHECK(anti.a2[0] == std::set<int>{s, dc.primed(s)});

  Network one_term = testutil::make_i1();
  one_term.finalize_terminals({one_term.g.vertex("s")});
  DoubleCover d1 = build_double_cover(one_term);
  CHECK_THROWS_AS(build_commodity_graph(d1), input_error);
}
