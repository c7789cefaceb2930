#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace dau {

struct Transition {
  std::string from;
  std::string action;
  std::string to;
  double weight = 0.0;

  friend bool operator==(const Transition& a, const Transition& b) {
    return a.from == b.from && a.action == b.action && a.to == b.to &&
           a.weight == b.weight;
  }
  friend bool operator<(const Transition& a, const Transition& b) {
    return std::tie(a.from, a.action, a.to, a.weight) <
           std::tie(b.from, b.action, b.to, b.weight);
  }
};

struct AccumulationPolicy {
  enum class Kind { Min, Discounted };
  Kind kind = Kind::Min;
  double gamma = 0.0;      // Discounted only, in (0,1)
  double tolerance = 0.0;  // Discounted only, > 0

  static AccumulationPolicy min() { return {}; }
  static AccumulationPolicy discounted(double gamma, double tolerance);

  friend bool operator==(const AccumulationPolicy& a, const AccumulationPolicy& b) {
    return a.kind == b.kind && a.gamma == b.gamma && a.tolerance == b.tolerance;
  }
};

// Weighted, action-labeled transition system for a single modeled agent.
// Immutable by convention: the surgeries below return new values.
struct StitAutomaton {
  std::string agent;
  AccumulationPolicy accumulation;
  std::string initial;
  std::set<std::string> states;
  std::map<std::string, std::set<std::string>> labels;  // state -> atoms
  std::set<std::string> finals;  // stored, never interpreted
  std::vector<Transition> transitions;  // kept sorted and unique

  // Copy-state provenance left behind by surgeries; maps a copy back to the
  // state id it mirrors. Diagnostics print original names through this.
  std::map<std::string, std::string> origin;

  std::set<std::string> action_set() const;
  // Actions available at q, sorted.
  std::vector<std::string> actions_at(const std::string& q) const;
  std::vector<const Transition*> out(const std::string& q) const;
  std::vector<const Transition*> out(const std::string& q,
                                     const std::string& action) const;
  const std::set<std::string>& atoms_of(const std::string& q) const;
  std::string origin_of(const std::string& q) const;
  std::set<std::string> reachable() const;
};

// Structural equality ignoring provenance.
bool same_structure(const StitAutomaton& a, const StitAutomaton& b);

// Empty iff the automaton is well-formed: declared endpoints, legal names,
// at most one action per ordered state pair, and totality at every reachable
// state. Each entry names the violated rule and the offending element.
std::vector<std::string> validate(const StitAutomaton& T);

// Drops every transition out of the initial state not labeled K.
StitAutomaton restrict_first_action(const StitAutomaton& T, const std::string& K);

// Unfolds the initial state once: a copy restricted to first action K whose
// re-entries into the initial state land in an unrestricted copy of T.
// Executions of the result are exactly the K-first executions of T.
StitAutomaton prime(const StitAutomaton& T, const std::string& K);

// Forces a concrete chained transition sequence from the initial state, then
// continues as T from the state the sequence reaches.
StitAutomaton spine(const StitAutomaton& T, const std::vector<Transition>& forced);

StitAutomaton reroot(const StitAutomaton& T, const std::string& q);

// Unweighted, action-erased view used by the temporal engine.
struct TransitionSystem {
  std::string initial;
  std::set<std::string> states;
  std::map<std::string, std::set<std::string>> labels;
  std::map<std::string, std::set<std::string>> succ;
};

TransitionSystem kripke_view(const StitAutomaton& T);

// JSON (de)serialization; parse throws std::runtime_error with a message on
// malformed input.
StitAutomaton parse_automaton(const std::string& json_text);
std::string automaton_to_json(const StitAutomaton& T);

}  // namespace dau
