#pragma once

// Deterministic random generators and exhaustive trace helpers shared by the
// test suite.

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dau/automaton.hpp"
#include "dau/formula.hpp"

namespace dau::testing {

// One step of an observable trace: action taken, labels of the target state.
using TraceStep = std::pair<std::string, std::set<std::string>>;
using Trace = std::vector<TraceStep>;

// All length-depth traces from a given state.
inline std::set<Trace> traces(const StitAutomaton& T, const std::string& from,
                              int depth) {
  if (depth == 0) return {Trace{}};
  std::set<Trace> out;
  for (const Transition* t : T.out(from)) {
    for (const Trace& rest : traces(T, t->to, depth - 1)) {
      Trace tr;
      tr.push_back({t->action, T.atoms_of(t->to)});
      tr.insert(tr.end(), rest.begin(), rest.end());
      out.insert(std::move(tr));
    }
  }
  return out;
}

// All length-depth chained transition sequences from a given state.
inline void transition_paths(const StitAutomaton& T, const std::string& from,
                             int depth, std::vector<Transition>& prefix,
                             std::vector<std::vector<Transition>>& out) {
  if (depth == 0) {
    out.push_back(prefix);
    return;
  }
  for (const Transition* t : T.out(from)) {
    prefix.push_back(*t);
    transition_paths(T, t->to, depth - 1, prefix, out);
    prefix.pop_back();
  }
}

inline std::vector<std::vector<Transition>> transition_paths(
    const StitAutomaton& T, const std::string& from, int depth) {
  std::vector<std::vector<Transition>> out;
  std::vector<Transition> prefix;
  transition_paths(T, from, depth, prefix, out);
  return out;
}

struct AutomatonParams {
  int max_states = 5;
  int max_actions_per_state = 3;
  int max_atoms = 3;
  bool integer_weights = true;
  AccumulationPolicy accumulation = AccumulationPolicy::min();
};

// Valid by construction: per source state a nonempty target set is split into
// actions, so each ordered pair carries exactly one action and every state
// has an outgoing transition.
inline StitAutomaton random_automaton(std::mt19937_64& rng,
                                      const AutomatonParams& p) {
  StitAutomaton T;
  T.agent = "alpha";
  T.accumulation = p.accumulation;
  std::uniform_int_distribution<int> nstates(1, p.max_states);
  int n = nstates(rng);
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) {
    std::string q = "q" + std::to_string(i);
    ids.push_back(q);
    T.states.insert(q);
  }
  T.initial = ids[0];

  static const char* atom_pool[] = {"p", "q", "r", "s"};
  std::uniform_int_distribution<int> coin(0, 1);
  for (const auto& q : T.states) {
    std::set<std::string> atoms;
    for (int a = 0; a < p.max_atoms; ++a)
      if (coin(rng)) atoms.insert(atom_pool[a]);
    T.labels[q] = std::move(atoms);
  }

  std::uniform_real_distribution<double> real_w(-1.0, 1.0);
  std::uniform_int_distribution<int> int_w(-3, 3);
  for (const auto& q : T.states) {
    std::vector<std::string> targets;
    for (const auto& t : ids)
      if (coin(rng)) targets.push_back(t);
    if (targets.empty()) targets.push_back(ids[rng() % ids.size()]);
    int nacts = 1 + static_cast<int>(rng() % static_cast<unsigned>(
                        std::min<size_t>(p.max_actions_per_state, targets.size())));
    for (size_t i = 0; i < targets.size(); ++i) {
      std::string action = "k" + std::to_string(i % static_cast<size_t>(nacts));
      double w = p.integer_weights ? static_cast<double>(int_w(rng)) : real_w(rng);
      T.transitions.push_back({q, action, targets[i], w});
    }
  }
  std::sort(T.transitions.begin(), T.transitions.end());
  return T;
}

// Random boolean/X/F<=k/G<=k formula whose horizon never exceeds the given
// temporal budget, so it is decided by every sufficiently long trace prefix.
inline Formula finite_horizon_body(std::mt19937_64& rng, int budget, int depth) {
  int c = static_cast<int>(rng() % ((budget > 0 && depth > 0) ? 6 : (depth > 0 ? 3 : 1)));
  const char* pool[] = {"p", "q"};
  switch (c) {
    case 0:
      return atom(pool[rng() % 2]);
    case 1:
      return lnot(finite_horizon_body(rng, budget, depth - 1));
    case 2: {
      Formula a = finite_horizon_body(rng, budget, depth - 1);
      Formula b = finite_horizon_body(rng, budget, depth - 1);
      return rng() % 2 ? land(a, b) : lor(a, b);
    }
    case 3:
      return next(finite_horizon_body(rng, budget - 1, depth - 1));
    case 4: {
      int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::min(budget, 3)));
      return bounded_eventually(k, finite_horizon_body(rng, budget - k, depth - 1));
    }
    default: {
      int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::min(budget, 3)));
      return bounded_always(k, finite_horizon_body(rng, budget - k, depth - 1));
    }
  }
}

// Four layers with all mass funnelled downward and a self-loop at the bottom,
// so every execution is absorbed within three steps. With discounted
// accumulation the loop carries weight zero, making depth-4 unrollings exact.
inline StitAutomaton absorbing_automaton(std::mt19937_64& rng, bool discounted) {
  StitAutomaton T;
  T.agent = "alpha";
  T.accumulation = discounted ? AccumulationPolicy::discounted(0.9, 1e-9)
                              : AccumulationPolicy::min();
  auto weight = [&rng]() { return static_cast<double>(rng() % 5) - 2.0; };
  std::vector<std::vector<std::string>> level(4);
  for (int l = 0; l < 4; ++l) {
    int n = 1 + static_cast<int>(rng() % (l == 0 ? 1 : 2));
    for (int i = 0; i < n; ++i) {
      std::string q = "l" + std::to_string(l) + "s" + std::to_string(i);
      level[static_cast<size_t>(l)].push_back(q);
      T.states.insert(q);
      std::set<std::string> atoms;
      if (rng() % 2) atoms.insert("p");
      if (rng() % 2) atoms.insert("q");
      T.labels[q] = atoms;
    }
  }
  T.initial = level[0][0];
  for (int l = 0; l < 3; ++l)
    for (const auto& q : level[static_cast<size_t>(l)]) {
      const auto& targets = level[static_cast<size_t>(l) + 1];
      int acts = 1 + static_cast<int>(rng() % targets.size());
      for (size_t i = 0; i < targets.size(); ++i) {
        std::string action = "k" + std::to_string(i % static_cast<size_t>(acts));
        T.transitions.push_back({q, action, targets[i], weight()});
      }
    }
  for (const auto& q : level[3])
    T.transitions.push_back({q, "stay", q, discounted ? 0.0 : weight()});
  std::sort(T.transitions.begin(), T.transitions.end());
  return T;
}

}  // namespace dau::testing
