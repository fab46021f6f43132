#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "oddpack/gen.hpp"
#include "oddpack/io.hpp"
#include "oddpack/odd_walk.hpp"
#include "oddpack/trail_pipeline.hpp"

using namespace oddpack;

namespace {

struct SEdge {
  std::string id, u, v;
  Sign s1, s2;
};

SignedValenceNetwork make_svn(const std::vector<std::string>& vertices,
                              const std::vector<std::string>& terminals,
                              const std::vector<SEdge>& edges, int p, int q) {
  SignedValenceNetwork svn;
  for (const auto& v : vertices) svn.g.add_vertex(v);
  for (const auto& e : edges) {
    svn.g.add_edge(e.id, svn.g.vertex(e.u), svn.g.vertex(e.v));
    svn.sign.push_back({e.s1, e.s2});
    svn.alive.push_back(1);
  }
  svn.is_terminal.assign(svn.g.n_vertices(), 0);
  for (const auto& t : terminals) {
    svn.terminals.push_back(svn.g.vertex(t));
    svn.is_terminal[svn.g.vertex(t)] = 1;
  }
  std::sort(svn.terminals.begin(), svn.terminals.end());
  svn.p = p;
  svn.q = q;
  return svn;
}

void check_tight_witness(const SignedValenceNetwork& svn) {
  REQUIRE(is_inner_balanced(svn));
  REQUIRE(count_minus_at_terminals(svn) == svn.q);
  REQUIRE((int)(svn.wp.size() + svn.wq.size()) == svn.p + svn.q);
  std::set<std::pair<int, int>> seen;
  for (const auto& list : {svn.wp, svn.wq})
    for (const VTrail& w : list) {
      require_vtrail(svn, w);
      REQUIRE(is_alternating(svn, w));
      for (const VStep& s : w) REQUIRE(seen.insert({s.edge, s.which}).second);
    }
}

// Odd witness a-...-b with an irregular edge yu whose second valence is
// unused anywhere: removing yu is subcase 1.
SignedValenceNetwork make_unused_fixture() {
  SignedValenceNetwork svn = make_svn(
      {"a", "b", "x", "y", "u", "v"}, {"a", "b"},
      {{"ax", "a", "x", +1, +1},   // 0
       {"xb", "x", "b", +1, -1},   // 1
       {"xy", "x", "y", -1, -1},   // 2
       {"yu", "y", "u", +1, -1},   // 3
       {"uv", "u", "v", -1, -1},   // 4
       {"vy", "v", "y", +1, +1},   // 5
       {"ua", "u", "a", +1, +1}},  // 6
      1, 1);
  svn.wp = {{{0, 0, true},
             {2, 0, true},
             {3, 0, true},
             {4, 0, true},
             {5, 0, true},
             {2, 1, false},
             {1, 0, true}}};
  svn.wq = {{{0, 1, true}, {1, 1, true}}};
  return svn;
}

// The unused fixture plus an even witness riding yu's second valence:
// removing yu splices the detour into that other trail, subcase 4.
SignedValenceNetwork make_other_trail_fixture() {
  SignedValenceNetwork svn = make_svn(
      {"a", "b", "x", "y", "u", "v"}, {"a", "b"},
      {{"ax", "a", "x", +1, +1},   // 0
       {"xb", "x", "b", +1, -1},   // 1
       {"xy", "x", "y", -1, -1},   // 2
       {"yu", "y", "u", +1, -1},   // 3
       {"uv", "u", "v", -1, -1},   // 4
       {"vy", "v", "y", +1, +1},   // 5
       {"ua", "u", "a", +1, +1},   // 6
       {"vb", "v", "b", -1, +1}},  // 7
      1, 2);
  svn.wp = {{{0, 0, true},
             {2, 0, true},
             {3, 0, true},
             {4, 0, true},
             {5, 0, true},
             {2, 1, false},
             {1, 0, true}}};
  svn.wq = {{{0, 1, true}, {1, 1, true}},
            {{6, 0, false}, {3, 1, false}, {5, 1, false}, {7, 0, true}}};
  return svn;
}

// Long odd witness whose redundant edge vy has its other valence inside the
// enclosed fragment itself: subcase 2. Also carries a case 3 pair (yu) and a
// case 1 pair (vy) for the rewrite tests.
SignedValenceNetwork make_inside_fixture() {
  SignedValenceNetwork svn = make_svn(
      {"a", "b", "x", "y", "u", "z", "v", "w", "w4"}, {"a", "b"},
      {{"ax", "a", "x", +1, +1},     // 0
       {"xy", "x", "y", -1, -1},     // 1
       {"xb", "x", "b", +1, -1},     // 2
       {"yu", "y", "u", +1, +1},     // 3
       {"vy", "v", "y", +1, -1},     // 4
       {"c", "u", "z", -1, -1},      // 5
       {"f", "z", "v", +1, +1},      // 6
       {"d", "u", "w", -1, +1},      // 7
       {"e", "w", "w4", +1, -1},     // 8
       {"g4", "w4", "v", -1, -1},    // 9
       {"aw", "a", "w", -1, +1},     // 10
       {"zb", "z", "b", +1, -1},     // 11
       {"aw4", "a", "w4", +1, +1}},  // 12
      1, 3);
  svn.wp = {{{0, 0, true},
             {1, 0, true},
             {3, 0, true},
             {5, 0, true},
             {6, 0, true},
             {4, 1, true},
             {3, 1, true},
             {7, 0, true},
             {8, 0, true},
             {9, 0, true},
             {4, 0, true},
             {1, 1, false},
             {2, 0, true}}};
  svn.wq = {{{10, 0, true}, {7, 1, false}, {5, 1, true}, {11, 0, true}},
            {{12, 0, true}, {9, 1, true}, {6, 1, false}, {11, 1, true}},
            {{0, 1, true}, {2, 1, true}}};
  return svn;
}

// Odd witness where the redundant edge vy reappears in the same trail but
// before the fragment: subcase 3. Also carries a case 2 pair (vy).
SignedValenceNetwork make_same_trail_fixture() {
  SignedValenceNetwork svn = make_svn(
      {"a", "b", "x", "y", "u", "v", "z"}, {"a", "b"},
      {{"az", "a", "z", +1, +1},   // 0
       {"zu", "z", "u", -1, -1},   // 1
       {"yu", "y", "u", +1, +1},   // 2
       {"vy", "v", "y", +1, -1},   // 3
       {"vx", "v", "x", +1, -1},   // 4
       {"xy", "x", "y", -1, -1},   // 5
       {"uv", "u", "v", -1, +1},   // 6
       {"xb", "x", "b", +1, +1}},  // 7
      1, 0);
  svn.wp = {{{0, 0, true},
             {1, 0, true},
             {2, 1, false},
             {3, 1, false},
             {4, 0, true},
             {5, 0, true},
             {2, 0, true},
             {6, 0, true},
             {3, 0, true},
             {5, 1, false},
             {7, 0, true}}};
  return svn;
}

// Degree 4 inner vertex m where two witness passages get split apart.
SignedValenceNetwork make_split_fixture() {
  SignedValenceNetwork svn = make_svn({"a", "m", "n", "b"}, {"a", "b"},
                                      {{"e1", "a", "m", +1, +1},
                                       {"e2", "m", "n", -1, +1},
                                       {"e3", "n", "m", +1, -1},
                                       {"e4", "m", "b", -1, -1}},
                                      0, 2);
  svn.wq = {{{0, 0, true}, {1, 0, true}, {2, 0, true}, {3, 0, true}},
            {{0, 1, true}, {3, 1, true}}};
  return svn;
}

// Degree 4 inner vertex m whose witness passages all bounce back on the
// same edge, so the split crosses no transit pair.
SignedValenceNetwork make_bounce_fixture() {
  SignedValenceNetwork svn = make_svn(
      {"a", "b", "m", "x1", "x2", "x3", "x4"}, {"a", "b"},
      {{"e1", "x1", "m", -1, +1},   // 0
       {"e2", "x2", "m", +1, -1},   // 1
       {"e3", "x3", "m", -1, +1},   // 2
       {"e4", "x4", "m", +1, -1},   // 3
       {"f1", "a", "x1", +1, +1},   // 4
       {"g1", "x1", "x2", -1, -1},  // 5
       {"g2", "x2", "b", +1, +1},   // 6
       {"f2", "a", "x3", +1, +1},   // 7
       {"g3", "x3", "x4", -1, -1},  // 8
       {"g4", "x4", "b", +1, +1}},  // 9
      2, 0);
  svn.wp = {{{4, 0, true},
             {0, 0, true},
             {0, 1, false},
             {5, 0, true},
             {1, 0, true},
             {1, 1, false},
             {6, 0, true}},
            {{7, 0, true},
             {2, 0, true},
             {2, 1, false},
             {8, 0, true},
             {3, 0, true},
             {3, 1, false},
             {9, 0, true}}};
  return svn;
}

Network make_r_instance() {
  // A triangle hanging off terminal s: the leftover decomposes into two odd
  // terminal-to-mirror trails.
  return testutil::build_net({"s", "t", "a", "b"}, {"s", "t"},
                             {{"e1", "s", "t"}, {"e2", "s", "a"}, {"e3", "a", "b"},
                              {"e4", "b", "s"}});
}

Network make_e_instance() {
  // A doubled pendant edge at s: the leftover is two closed even trails.
  return testutil::build_net({"s", "t", "u"}, {"s", "t"},
                             {{"e1", "s", "t"}, {"e2", "s", "u"}, {"e3", "u", "s"}});
}

}  // namespace

TEST_CASE("initial classification of the canned instances") {
  ComponentClassification c1 = initial_classify(testutil::make_i1());
  CHECK(c1.p == 2);
  REQUIRE(c1.p_trails.size() == 2);
  std::set<int> whiches;
  for (const VTrail& w : c1.p_trails) {
    REQUIRE(w.size() == 1);
    CHECK(w[0].edge == 0);
    whiches.insert(w[0].which);
  }
  CHECK(whiches == std::set<int>{0, 1});
  CHECK(c1.q_trails.empty());
  CHECK(c1.r_trails.empty());
  CHECK(c1.e_trails.empty());

  ComponentClassification c2 = initial_classify(testutil::make_i2());
  CHECK(c2.p == 0);
  CHECK(c2.p_trails.empty());
  REQUIRE(c2.q_trails.size() == 2);
  for (const VTrail& w : c2.q_trails) {
    REQUIRE(w.size() == 2);
    CHECK(w[0].edge == 0);
    CHECK(w[1].edge == 1);
  }

  ComponentClassification c3 = initial_classify(testutil::make_i3());
  CHECK(c3.p == 2);
  CHECK(c3.q_trails.size() == 2);
  CHECK(c3.r_trails.empty());
  CHECK(c3.e_trails.empty());

  ComponentClassification c4 = initial_classify(testutil::make_i4());
  CHECK(c4.p == 0);
  CHECK(c4.q_trails.size() == 4);
  size_t total = 0;
  for (const VTrail& w : c4.q_trails) total += w.size();
  CHECK(total == 8);  // every valence of the four edges
}

TEST_CASE("classification splits off mirror and closed leftovers") {
  Network r = make_r_instance();
  ComponentClassification cr = initial_classify(r);
  CHECK(cr.p == 2);
  CHECK(cr.q_trails.empty());
  REQUIRE(cr.r_trails.size() == 2);
  for (const VTrail& w : cr.r_trails) {
    REQUIRE(w.size() == 3);
    CHECK(vtrail_start(r.g, w) == r.g.vertex("s"));
    CHECK(vtrail_end(r.g, w) == r.g.vertex("s"));
  }

  Network e = make_e_instance();
  ComponentClassification ce = initial_classify(e);
  CHECK(ce.p == 2);
  CHECK(ce.q_trails.empty());
  CHECK(ce.r_trails.empty());
  REQUIRE(ce.e_trails.size() == 2);
  for (const VTrail& w : ce.e_trails) CHECK(w.size() == 2);
}

TEST_CASE("classification validates its input") {
  Network wrong_cap = testutil::make_i1();
  wrong_cap.cap[0] = Rational(4);
  CHECK_THROWS_WITH_AS(initial_classify(wrong_cap), "capacity of edge 'e1' must be 2",
                       input_error);

  Network odd_deg = testutil::build_net(
      {"s", "v", "t", "w"}, {"s", "t"},
      {{"e1", "s", "v"}, {"e2", "v", "t"}, {"e3", "v", "w"}});
  CHECK_THROWS_WITH_AS(initial_classify(odd_deg), "non-terminal vertex 'v' has odd degree",
                       input_error);
}

TEST_CASE("terminal evacuation moves ends to fresh terminals") {
  PipelineTrace tr;
  SignedValenceNetwork svn = terminal_evacuation(initial_classify(testutil::make_i1()), tr);
  CHECK(tr.p == 2);
  CHECK(tr.q == 0);
  CHECK(tr.r == 0);
  CHECK(tr.e == 0);
  REQUIRE(tr.evacuations.size() == 2);
  CHECK(tr.evacuations[0].old_vertex == 0);
  CHECK(tr.evacuations[0].edges.size() == 1);
  CHECK(tr.evacuations[1].edges.size() == 1);
  CHECK(svn.g.vertex_names[tr.evacuations[0].new_vertex] == "s*");
  CHECK(svn.g.vertex_names[tr.evacuations[1].new_vertex] == "t*");
  CHECK(svn.terminals == std::vector<int>{2, 3});
  CHECK(svn.p == 2);
  CHECK(svn.q == 0);
  REQUIRE(svn.wp.size() == 2);
  for (const VTrail& w : svn.wp) {
    REQUIRE(w.size() == 3);
    CHECK(is_alternating(svn, w));
    CHECK(svn.is_terminal[vtrail_start(svn.g, w)]);
    CHECK(svn.is_terminal[vtrail_end(svn.g, w)]);
  }
  // The original edge sits in the middle of both odd trails, so both of its
  // valencies are signed minus; evacuation edges carry the plus ends.
  CHECK(svn.sign[0] == std::array<Sign, 2>{-1, -1});
  CHECK(svn.sign[1] == std::array<Sign, 2>{+1, +1});
  CHECK(is_inner_balanced(svn));
  CHECK(count_minus_at_terminals(svn) == 0);
  CHECK(supercubicity(svn) == 0);
}

TEST_CASE("evacuation of even trails leaves the minus count at q") {
  PipelineTrace tr;
  SignedValenceNetwork svn = terminal_evacuation(initial_classify(testutil::make_i2()), tr);
  CHECK(svn.p == 0);
  CHECK(svn.q == 2);
  REQUIRE(svn.wq.size() == 2);
  for (const VTrail& w : svn.wq) CHECK(w.size() == 4);
  CHECK(svn.sign[0] == std::array<Sign, 2>{-1, -1});   // e1 in second position
  CHECK(svn.sign[1] == std::array<Sign, 2>{+1, +1});   // e2 in third position
  CHECK(count_minus_at_terminals(svn) == 2);
  CHECK(is_inner_balanced(svn));

  // Closed leftovers are signed alternately but never extended.
  PipelineTrace tre;
  SignedValenceNetwork sve = terminal_evacuation(initial_classify(make_e_instance()), tre);
  CHECK(tre.e == 2);
  CHECK(sve.q == 0);
  CHECK(sve.sign[1] == std::array<Sign, 2>{+1, +1});  // e2 starts both closed trails
  CHECK(sve.sign[2] == std::array<Sign, 2>{-1, -1});  // e3 closes them
  CHECK(is_inner_balanced(sve));

  // Mirror trails get two evacuation slots at the same terminal.
  PipelineTrace trr;
  SignedValenceNetwork svr = terminal_evacuation(initial_classify(make_r_instance()), trr);
  CHECK(trr.r == 2);
  REQUIRE(trr.evacuations.size() == 2);
  CHECK(trr.evacuations[0].edges.size() == 3);  // 2 packing ends + 4 mirror ends at s
  CHECK(trr.evacuations[1].edges.size() == 1);
  CHECK(is_inner_balanced(svr));
  CHECK(supercubicity(svr) == 3);  // s keeps degree 6 after evacuation
}

TEST_CASE("supercubicity sums alive excess degree over inner vertices") {
  SignedValenceNetwork flat = make_split_fixture();
  CHECK(supercubicity(flat) == 1);  // m has degree 4

  SignedValenceNetwork two = make_svn({"a", "b", "m", "n"}, {"a", "b"},
                                      {{"e1", "a", "m", +1, +1},
                                       {"e2", "a", "m", +1, +1},
                                       {"f1", "m", "n", +1, +1},
                                       {"f2", "m", "n", +1, +1},
                                       {"f3", "m", "n", +1, +1},
                                       {"g1", "n", "b", +1, +1},
                                       {"g2", "n", "b", +1, +1}},
                                      0, 0);
  CHECK(supercubicity(two) == 4);  // both inner vertices have degree 5
  two.alive[4] = 0;
  CHECK(supercubicity(two) == 2);

  PipelineTrace tr;
  SignedValenceNetwork star = terminal_evacuation(initial_classify(testutil::make_i4()), tr);
  CHECK(supercubicity(star) == 1);  // the star centre
}

TEST_CASE("subcubize splits two crossing witness passages") {
  SignedValenceNetwork svn = make_split_fixture();
  check_tight_witness(svn);
  REQUIRE(supercubicity(svn) == 1);

  PipelineTrace tr;
  subcubize_step(svn, svn.g.vertex("m"), tr);

  REQUIRE(tr.subcubizations.size() == 1);
  const SubcubizeRecord& rec = tr.subcubizations[0];
  CHECK(rec.v == 1);
  CHECK(rec.left == std::vector<int>{0, 1});
  CHECK(rec.split_pairs == 2);
  CHECK(svn.g.vertex_names[rec.u] == "m#u");
  CHECK(svn.g.vertex_names[rec.vm] == "m#m");
  CHECK(svn.g.vertex_names[rec.w] == "m#w");
  CHECK(svn.g.edges[rec.n1].id == "m#a");
  CHECK(svn.g.edges[rec.n2].id == "m#b");

  CHECK(supercubicity(svn) == 0);
  CHECK(svn.sign[rec.n1] == std::array<Sign, 2>{-1, -1});
  CHECK(svn.sign[rec.n2] == std::array<Sign, 2>{+1, +1});

  // The long witness already crossed m on paired edges and stays put; the
  // short one is rerouted through the gadget.
  CHECK(svn.wq[0] == VTrail{{0, 0, true}, {1, 0, true}, {2, 0, true}, {3, 0, true}});
  CHECK(svn.wq[1] ==
        VTrail{{0, 1, true}, {rec.n1, 0, true}, {rec.n2, 0, true}, {3, 1, true}});

  CHECK(is_inner_balanced(svn));
  CHECK(count_minus_at_terminals(svn) == svn.q);
}

TEST_CASE("subcubize with bounce-back passages splits nothing") {
  SignedValenceNetwork svn = make_bounce_fixture();
  check_tight_witness(svn);
  std::vector<VTrail> before = svn.wp;
  REQUIRE(supercubicity(svn) == 1);

  PipelineTrace tr;
  subcubize_step(svn, svn.g.vertex("m"), tr);

  const SubcubizeRecord& rec = tr.subcubizations[0];
  CHECK(rec.left == std::vector<int>{0, 1});
  CHECK(rec.split_pairs == 0);
  CHECK(svn.sign[rec.n1] == std::array<Sign, 2>{+1, -1});
  CHECK(svn.sign[rec.n2] == std::array<Sign, 2>{+1, -1});
  CHECK(svn.wp == before);  // no passage crossed the cut
  CHECK(supercubicity(svn) == 0);
  CHECK(is_inner_balanced(svn));

  CHECK_THROWS_AS(subcubize_step(svn, svn.g.vertex("a"), tr), input_error);
  CHECK_THROWS_AS(subcubize_step(svn, svn.g.vertex("x1"), tr), input_error);
}

TEST_CASE("irregular pair classification") {
  CHECK(classify_case(+1, -1, true) == 1);
  CHECK(classify_case(-1, +1, true) == 1);
  CHECK(classify_case(+1, -1, false) == 2);
  CHECK(classify_case(-1, +1, false) == 2);
  CHECK(classify_case(+1, +1, true) == 3);
  CHECK(classify_case(-1, -1, true) == 3);
  CHECK(classify_case(+1, +1, false) == 4);
  CHECK(classify_case(-1, -1, false) == 4);
}

TEST_CASE("find_irregular scans the odd witness trails") {
  SignedValenceNetwork none = make_split_fixture();
  CHECK(!find_irregular(none).has_value());  // wp is empty

  SignedValenceNetwork u = make_unused_fixture();
  auto irr = find_irregular(u);
  REQUIRE(irr.has_value());
  CHECK(irr->trail == 0);
  CHECK(irr->pos1 == 1);
  CHECK(irr->pos2 == 5);
  CHECK(irr->case_id == 4);

  // Cases 1-3 take priority over any case 4 pair; among them the smallest
  // first position wins.
  SignedValenceNetwork in = make_inside_fixture();
  auto irr2 = find_irregular(in);
  REQUIRE(irr2.has_value());
  CHECK(irr2->trail == 0);
  CHECK(irr2->pos1 == 2);
  CHECK(irr2->pos2 == 6);
  CHECK(irr2->case_id == 3);

  SignedValenceNetwork same = make_same_trail_fixture();
  auto irr3 = find_irregular(same);
  REQUIRE(irr3.has_value());
  CHECK(irr3->pos1 == 3);
  CHECK(irr3->pos2 == 8);
  CHECK(irr3->case_id == 2);
}

TEST_CASE("case 1 rewrite reverses the middle") {
  SignedValenceNetwork svn = make_inside_fixture();
  const VTrail& w = svn.wp[0];
  // vy occurs at 5 and 10 with opposite signs, same direction.
  VTrail out = apply_case_1_2_3(svn, w, 5, 10, 1);
  VTrail expect{{0, 0, true}, {1, 0, true},  {3, 0, true}, {5, 0, true},
                {6, 0, true}, {9, 0, false}, {8, 0, false}, {7, 0, false},
                {3, 1, false}, {1, 1, false}, {2, 0, true}};
  CHECK(out == expect);
}

TEST_CASE("case 2 rewrite drops the fragment and both valencies") {
  SignedValenceNetwork svn = make_same_trail_fixture();
  const VTrail& w = svn.wp[0];
  // vy occurs at 3 and 8 with opposite signs and directions.
  VTrail out = apply_case_1_2_3(svn, w, 3, 8, 2);
  VTrail expect{{0, 0, true}, {1, 0, true}, {2, 1, false}, {5, 1, false}, {7, 0, true}};
  CHECK(out == expect);
}

TEST_CASE("case 3 rewrite keeps the second valence") {
  SignedValenceNetwork svn = make_inside_fixture();
  const VTrail& w = svn.wp[0];
  // yu occurs at 2 and 6 with equal signs, same direction.
  VTrail out = apply_case_1_2_3(svn, w, 2, 6, 3);
  VTrail expect{{0, 0, true}, {1, 0, true}, {3, 1, true},  {7, 0, true}, {8, 0, true},
                {9, 0, true}, {4, 0, true}, {1, 1, false}, {2, 0, true}};
  CHECK(out == expect);
}

TEST_CASE("rewrite input validation") {
  SignedValenceNetwork svn = make_inside_fixture();
  const VTrail& w = svn.wp[0];
  CHECK_THROWS_AS(apply_case_1_2_3(svn, w, 2, 5, 3), input_error);   // different edges
  CHECK_THROWS_AS(apply_case_1_2_3(svn, w, 2, 6, 1), input_error);   // wrong case id
  CHECK_THROWS_AS(apply_case_1_2_3(svn, w, 1, 11, 4), input_error);  // case 4 not here
  CHECK_THROWS_AS(apply_case_1_2_3(svn, w, 6, 2, 3), input_error);   // misordered
}

TEST_CASE("edge removal with an unused second valence") {
  SignedValenceNetwork svn = make_unused_fixture();
  check_tight_witness(svn);
  auto irr = find_irregular(svn);
  REQUIRE(irr.has_value());
  REQUIRE(irr->case_id == 4);

  PipelineTrace tr;
  apply_case_4(svn, *irr, tr);

  REQUIRE(tr.removals.size() == 1);
  CHECK(tr.removals[0].removed_edge == 3);  // yu
  CHECK(tr.removals[0].subcase == 1);
  CHECK(tr.removals[0].trail == 0);
  CHECK(svn.alive[3] == 0);
  CHECK(svn.wp[0] == VTrail{{0, 0, true}, {1, 0, true}});
  CHECK(svn.wq[0] == VTrail{{0, 1, true}, {1, 1, true}});
  CHECK(is_inner_balanced(svn));
  CHECK(count_minus_at_terminals(svn) == 1);

  // The repaired witness is no longer usable as is (wrong parity), so the
  // decomposition regenerates; one odd and one even trail realize (1, 1).
  AlternatingPacking ap = alternating_packing(svn);
  CHECK(ap.odd.size() + ap.even.size() == 2);
  CHECK((int)ap.odd.size() >= svn.p);
  CHECK((int)ap.even.size() <= svn.q);
  for (const VTrail& t : ap.odd) CHECK(t.size() % 2 == 1);
  for (const VTrail& t : ap.even) CHECK(t.size() % 2 == 0);
}

TEST_CASE("edge removal with the second valence inside the fragment") {
  SignedValenceNetwork svn = make_inside_fixture();
  check_tight_witness(svn);

  PipelineTrace tr;
  apply_case_4(svn, Irregular{0, 1, 11, 4}, tr);

  REQUIRE(tr.removals.size() == 1);
  CHECK(tr.removals[0].removed_edge == 4);  // vy
  CHECK(tr.removals[0].subcase == 2);
  CHECK(svn.alive[4] == 0);
  CHECK(svn.wp[0] == VTrail{{0, 0, true}, {2, 0, true}});
  // The even witnesses are untouched.
  CHECK(svn.wq[0] == VTrail{{10, 0, true}, {7, 1, false}, {5, 1, true}, {11, 0, true}});
  CHECK(svn.wq[1] == VTrail{{12, 0, true}, {9, 1, true}, {6, 1, false}, {11, 1, true}});
  CHECK(svn.wq[2] == VTrail{{0, 1, true}, {2, 1, true}});
  CHECK(is_inner_balanced(svn));
  CHECK(count_minus_at_terminals(svn) == 3);

  AlternatingPacking ap = alternating_packing(svn);
  CHECK(ap.odd.size() + ap.even.size() == 4);
  CHECK((int)ap.odd.size() >= 1);
  CHECK((int)ap.even.size() <= 3);
}

TEST_CASE("edge removal with the second valence earlier in the same trail") {
  SignedValenceNetwork svn = make_same_trail_fixture();
  check_tight_witness(svn);

  PipelineTrace tr;
  apply_case_4(svn, Irregular{0, 5, 9, 4}, tr);

  REQUIRE(tr.removals.size() == 1);
  CHECK(tr.removals[0].removed_edge == 3);  // vy
  CHECK(tr.removals[0].subcase == 3);
  CHECK(svn.alive[3] == 0);
  // The detour y-u-v replaces the vy step of the surviving prefix.
  CHECK(svn.wp[0] == VTrail{{0, 0, true}, {1, 0, true}, {2, 1, false}, {2, 0, true},
                            {6, 0, true}, {4, 0, true}, {7, 0, true}});
  CHECK(is_inner_balanced(svn));
  CHECK(count_minus_at_terminals(svn) == 0);

  AlternatingPacking ap = alternating_packing(svn);
  CHECK(ap.odd.size() == 1);
  CHECK(ap.even.empty());
  CHECK(is_alternating(svn, ap.odd[0]));
  CHECK(ap.odd[0].size() % 2 == 1);
}

TEST_CASE("edge removal with the second valence in another trail") {
  SignedValenceNetwork svn = make_other_trail_fixture();
  check_tight_witness(svn);
  auto irr = find_irregular(svn);
  REQUIRE(irr.has_value());
  REQUIRE(irr->case_id == 4);
  REQUIRE(irr->pos1 == 1);
  REQUIRE(irr->pos2 == 5);

  PipelineTrace tr;
  apply_case_4(svn, *irr, tr);

  REQUIRE(tr.removals.size() == 1);
  CHECK(tr.removals[0].removed_edge == 3);  // yu
  CHECK(tr.removals[0].subcase == 4);
  CHECK(svn.alive[3] == 0);
  CHECK(svn.wp[0] == VTrail{{0, 0, true}, {1, 0, true}});
  // The detour u-v-y replaces the dead step inside the even witness.
  CHECK(svn.wq[1] == VTrail{{6, 0, false}, {4, 0, true}, {5, 0, true}, {5, 1, false},
                            {7, 0, true}});
  CHECK(is_inner_balanced(svn));
  CHECK(count_minus_at_terminals(svn) == 2);

  AlternatingPacking ap = alternating_packing(svn);
  CHECK(ap.odd.size() + ap.even.size() == 3);
  CHECK((int)ap.odd.size() >= 1);
  CHECK((int)ap.even.size() <= 2);
}

TEST_CASE("regularize rewrites until no irregular pair is left") {
  SignedValenceNetwork svn = make_inside_fixture();
  PipelineTrace tr;
  regularize(svn, tr);

  // First the case 3 pair on yu is rewritten, then the xy pair becomes a
  // removal with an unused second valence.
  REQUIRE(!tr.rewrites.empty());
  CHECK(tr.rewrites[0].trail == 0);
  CHECK(tr.rewrites[0].case_id == 3);
  CHECK(tr.rewrites[0].edge == 3);
  REQUIRE(!tr.removals.empty());
  CHECK(tr.removals[0].removed_edge == 4);
  CHECK(tr.removals[0].subcase == 1);
  CHECK(svn.alive[4] == 0);

  CHECK(!find_irregular(svn).has_value());
  CHECK((int)svn.wp.size() >= svn.p);
  for (const VTrail& w : svn.wp) {
    require_vtrail(svn, w);
    CHECK(is_alternating(svn, w));
    CHECK(w.size() % 2 == 1);
  }
}

TEST_CASE("pipeline results on the canned instances") {
  PipelineResult r1 = run_pipeline(testutil::make_i1());
  CHECK(r1.value == 2);
  CHECK(r1.packing.value() == Rational(2));
  for (const auto& it : r1.packing.items) {
    REQUIRE(it.walk.size() == 1);
    CHECK(it.walk[0].edge == 0);
  }
  CHECK(r1.trace.p == 2);
  CHECK(r1.trace.q == 0);
  CHECK(r1.trace.subcubizations.empty());
  CHECK(r1.trace.rewrites.empty());
  CHECK(r1.trace.removals.empty());

  PipelineResult r2 = run_pipeline(testutil::make_i2());
  CHECK(r2.value == 0);
  CHECK(r2.packing.items.empty());
  CHECK(r2.trace.q == 2);

  Network i3 = testutil::make_i3();
  PipelineResult r3 = run_pipeline(i3);
  CHECK(r3.value == 2);
  CHECK(r3.packing.value() == Rational(2));
  for (const auto& it : r3.packing.items) {
    REQUIRE(it.walk.size() == 1);
    CHECK(it.walk[0].edge == i3.g.edge("e1"));
  }
  CHECK(r3.trace.q == 2);

  PipelineResult r4 = run_pipeline(testutil::make_i4());
  CHECK(r4.value == 0);
  CHECK(r4.packing.items.empty());
  CHECK(r4.trace.q == 4);
  CHECK(r4.trace.subcubizations.size() == 1);  // the star centre

  Network rr = make_r_instance();
  PipelineResult r5 = run_pipeline(rr);
  CHECK(r5.value == 2);
  CHECK(r5.trace.r == 2);
  CHECK(r5.trace.subcubizations.size() == 3);  // terminal s keeps degree 6
  CHECK(r5.value == (int)max_odd_walk_packing(rr).value.numerator());
}

TEST_CASE("pipeline input validation") {
  Network wrong_cap = testutil::make_i1();
  wrong_cap.cap[0] = Rational(4);
  CHECK_THROWS_AS(run_pipeline(wrong_cap), input_error);

  Network odd_deg = testutil::build_net(
      {"s", "v", "t", "w"}, {"s", "t"},
      {{"e1", "s", "v"}, {"e2", "v", "t"}, {"e3", "v", "w"}});
  CHECK_THROWS_AS(run_pipeline(odd_deg), input_error);
}

TEST_CASE("pipeline agrees with the walk optimum on recorded instances") {
  struct Frozen {
    int max_vertices, max_edges;
    unsigned long long seed;
    int value;
  };
  // Instances recorded for hitting the removal step in earlier sweeps.
  std::vector<Frozen> frozen{{5, 14, 283, 4}, {7, 18, 65, 6}, {5, 18, 165, 10}};
  for (const Frozen& fz : frozen) {
    GenOptions opt;
    opt.seed = fz.seed;
    opt.max_vertices = fz.max_vertices;
    opt.max_edges = fz.max_edges;
    opt.eulerian = true;
    opt.cap2 = true;
    Network n = generate_instance(opt);
    PipelineResult r = run_pipeline(n);
    CHECK(r.value == fz.value);
    CHECK(r.packing.value() == Rational(fz.value));
    CHECK(max_odd_walk_packing(n).value == Rational(fz.value));

    CHECK(validate_packing(n, r.packing).empty());
    for (const auto& it : r.packing.items) {
      WalkClass cls = classify_walk(n, it.walk);
      CHECK(cls.is_trail);
      CHECK(cls.is_t_walk);
      CHECK(cls.is_odd);
      CHECK(walk_start(n.g, it.walk) != walk_end(n.g, it.walk));
    }
  }
}

TEST_CASE("pipeline hits the removal step on the recorded seed") {
  GenOptions opt;
  opt.seed = 283;
  opt.max_vertices = 5;
  opt.max_edges = 14;
  opt.eulerian = true;
  opt.cap2 = true;
  Network n = generate_instance(opt);
  PipelineResult r = run_pipeline(n);
  REQUIRE(!r.trace.removals.empty());
  for (const Case4Record& rec : r.trace.removals) {
    CHECK(rec.subcase >= 1);
    CHECK(rec.subcase <= 4);
  }
  CHECK(r.trace.removals[0].subcase == 4);
}

TEST_CASE("pipeline output is deterministic") {
  GenOptions opt;
  opt.seed = 283;
  opt.max_vertices = 5;
  opt.max_edges = 14;
  opt.eulerian = true;
  opt.cap2 = true;
  Network n1 = generate_instance(opt);
  Network n2 = generate_instance(opt);
  PipelineResult a = run_pipeline(n1);
  PipelineResult b = run_pipeline(n2);
  CHECK(emit_packing(n1, a.packing) == emit_packing(n2, b.packing));
  CHECK(emit_trace(a.trace) == emit_trace(b.trace));
}
