#pragma once

#include <optional>

#include "oddpack/signed_valence.hpp"

namespace oddpack {

// Trail-like components of the leftover after the initial multiflow:
// P = odd T-trails (multiflow preimages), Q = even T-trails, R = odd closed
// trails through a terminal, E = even closed trails. Together they use every
// valence of the doubled graph exactly once.
struct ComponentClassification {
  Network base;
  std::vector<VTrail> p_trails, q_trails, r_trails, e_trails;
  int p = 0;
};

struct EvacRecord {
  int old_vertex = -1;  // former terminal t
  int new_vertex = -1;  // fresh terminal replacing it
  std::vector<int> edges;
};

struct SubcubizeRecord {
  int v = -1, u = -1, vm = -1, w = -1;
  int n1 = -1, n2 = -1;   // inserted edges u-vm, vm-w
  std::vector<int> left;  // edges moved to u
  int split_pairs = 0;
};

struct RewriteRecord {
  int trail = -1;    // index into the odd witness list
  int case_id = 0;   // 1, 2 or 3
  int edge = -1;     // the irregular edge
};

struct Case4Record {
  int removed_edge = -1;
  int subcase = 0;  // 1 = unused, 2 = inside C, 3 = same trail, 4 = other trail
  int trail = -1;
};

struct PipelineTrace {
  int p = 0, q = 0, r = 0, e = 0;
  std::vector<EvacRecord> evacuations;
  std::vector<SubcubizeRecord> subcubizations;
  std::vector<RewriteRecord> rewrites;
  std::vector<Case4Record> removals;
};

struct PipelineResult {
  Packing packing;
  PipelineTrace trace;
  int value = 0;
};

// Runs the unit multiflow on the double cover, takes the preimages as P and
// decomposes the leftover. Requires cap = 2 everywhere and even degrees off
// the terminals. A leftover trail from t_i to t_j' contradicts multiflow
// maximality and is a hard error.
ComponentClassification initial_classify(const Network& n);

// Moves every trail end to a fresh terminal through new edges, signs all
// valencies (odd trails alternate +...+, even ones +...-, closed ones fully
// alternating) and returns the inner balanced, (p, q)-tight network whose
// witness is carried in wp/wq.
SignedValenceNetwork terminal_evacuation(const ComponentClassification& cc,
                                         PipelineTrace& trace);

// Sum over non-terminals of max(0, deg - 3), alive edges only.
int supercubicity(const SignedValenceNetwork& svn);

// Splits inner vertex v (alive degree >= 4) into u - vm - w, moving two
// edges to u and the rest to w so that at most two transit pairs are split;
// reroutes the split witness trails through the inserted edges and signs
// them to restore inner balance. Supercubicity drops by exactly 1.
void subcubize_step(SignedValenceNetwork& svn, int v, PipelineTrace& trace);

struct Irregular {
  int trail = -1;   // index into wp
  int pos1 = -1, pos2 = -1;  // the two occurrences of the same edge
  int case_id = 0;
};

// First irregularity in the odd witness trails: cases 1-3 by (trail,
// position), case 4 only when no earlier case exists, minimizing the
// enclosed fragment length. The irregular edge is never terminal-incident.
std::optional<Irregular> find_irregular(const SignedValenceNetwork& svn);

// Case of an irregular pair: opposite signs + same direction = 1,
// opposite + opposite = 2, same + same = 3, same + opposite = 4.
int classify_case(Sign s1, Sign s2, bool same_direction);

// Rewrites the trail dropping the irregularity: case 1 drops both valencies
// and reverses the middle, case 2 drops both and the fragment, case 3 drops
// one valence and the fragment. Parity and endpoints are preserved.
VTrail apply_case_1_2_3(const SignedValenceNetwork& svn, const VTrail& w, int pos1, int pos2,
                        int case_id);

// Case 4: removes the redundant edge next to the fragment's closing vertex
// and repairs the packing. The repaired witness may lose alternation; the
// caller must regenerate through alternating_packing.
void apply_case_4(SignedValenceNetwork& svn, const Irregular& irr, PipelineTrace& trace);

// Eliminates all irregular edges from the odd witness trails. The measure
// (alive edges, total odd-witness length) drops lexicographically each
// iteration.
void regularize(SignedValenceNetwork& svn, PipelineTrace& trace);

// The full construction: classify, evacuate, subcubize, regularize, then
// undo the transformations. Returns a maximum integer packing of odd
// T-trails of (G, T, 2), whose value equals the odd T-walk optimum.
PipelineResult run_pipeline(const Network& n);

}  // namespace oddpack
