#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dau/automaton.hpp"
#include "dau/formula.hpp"

namespace dau {

// Finite branching-time tree with per-agent choice partitions and explicit
// history utilities. Histories are identified with leaf moments; every leaf
// sits at the same depth. Choice cells are stored as groups of child
// moments, which bakes in "no choice between undivided histories": two
// histories through the same child can never be separated.
struct Moment {
  std::string name;
  int parent = -1;  // -1 at the root
  std::vector<int> children;
  std::set<std::string> atoms;
};

struct ExplicitStitModel {
  std::vector<Moment> moments;  // ids are indices; root is 0
  std::map<std::string, int> id_of;
  std::vector<std::string> agents;  // sorted, unique
  // agent -> internal moment -> action name -> children grouped under it
  std::map<std::string, std::map<int, std::map<std::string, std::set<int>>>> choice;
  std::map<int, double> values;  // leaf -> utility
  bool approximate_values = false;
  int depth = 0;

  bool is_leaf(int m) const { return moments[static_cast<size_t>(m)].children.empty(); }
  int moment_depth(int m) const;
  // Leaves of m's subtree, ascending: the histories H_m.
  std::vector<int> histories(int m) const;
  bool passes_through(int h, int m) const;
  // Child of m on the path to leaf h.
  int child_toward(int m, int h) const;
  // Choice cells as history sets; a leaf carries the single trivial cell "".
  std::map<std::string, std::set<int>> cells(const std::string& agent, int m) const;
  std::string cell_of(const std::string& agent, int m, int h) const;
};

struct Index {
  int moment = 0;
  int history = 0;
};

// "m/h5" <-> Index; parse validates that the history passes through the
// moment and that the history names a leaf.
Index parse_index(const ExplicitStitModel& M, const std::string& text);
std::string format_index(const ExplicitStitModel& M, const Index& i);

// Empty iff the model is well-formed: uniform leaf depth, total disjoint
// choice partitions at internal moments for every agent, independence of
// agents, and a finite value for every history.
std::vector<std::string> validate_model(const ExplicitStitModel& M);

enum class Tri { False, True, Unknown };
Tri not3(Tri a);
Tri and3(Tri a, Tri b);
Tri or3(Tri a, Tri b);

// Full grammar, three-valued. Unbounded F/G/U/R evaluate over the remaining
// branch with end-of-branch semantics; Unknown arises only when X/XX or a
// bounded operator needs a position past the leaf. A/E quantify over the
// histories through the moment.
Tri eval3(const ExplicitStitModel& M, int m, int h, const Formula& f);

// Two-valued front ends; throw when the verdict is undecided at this depth.
bool eval(const ExplicitStitModel& M, const Index& i, const Formula& f);
std::set<int> proposition(const ExplicitStitModel& M, int m, const Formula& f);

// Sure-thing dominance against every combination of the other agents'
// actions; returns the non-dominated action names. m must be internal.
std::set<std::string> optimal_actions(const ExplicitStitModel& M,
                                      const std::string& agent, int m);

// Dominance restricted to the histories in X; actions disjoint from X are
// out of contention. Empty exactly when no action meets X.
std::set<std::string> conditional_optimal(const ExplicitStitModel& M,
                                          const std::string& agent, int m,
                                          const std::set<int>& X);

enum class ValueMode {
  // Error unless every frontier state is absorbing (and, for discounted
  // accumulation, its self-loop weighs 0); leaf values are then exact.
  ExactIfAbsorbing,
  // Leaf value = accumulation of the finite prefix; flagged approximate.
  PartialWithBounds,
};

// Unfolds a stit automaton into the depth-d tree of its executions; one
// agent, choice cells grouping children by transition action, moment labels
// copied from the underlying states.
ExplicitStitModel unroll(const StitAutomaton& T, int d, ValueMode mode);

struct RandomModelParams {
  int depth = 3;
  int branching = 4;
  int agents = 1;
  int atoms = 2;
  double value_lo = 0.0;
  double value_hi = 10.0;
};

// Valid by construction (children form a product grid of the agents'
// actions, so independence holds); deterministic per seed.
ExplicitStitModel random_model(const RandomModelParams& params, unsigned long long seed);

// JSON (de)serialization; parse throws std::runtime_error on malformed
// input. Moments must be listed parent-first; the root comes first.
ExplicitStitModel parse_explicit_model(const std::string& json_text);
std::string explicit_model_to_json(const ExplicitStitModel& M);

}  // namespace dau
