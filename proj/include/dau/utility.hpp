#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dau/automaton.hpp"

namespace dau {

// Extremal history utilities reachable under one first action, plus the
// numerical error the computation certifies (0 when exact).
struct ActionInterval {
  std::string action;
  double lower = 0.0;
  double upper = 0.0;
  double certified_error = 0.0;
};

// Deterministic MDP cast: one enabled action per outgoing transition, reward
// = transition weight. Disabled actions are simply absent.
struct StitMdp {
  std::vector<std::string> states;  // sorted
  std::map<std::string, int> index;
  struct Choice {
    std::string action;
    double reward;
    int succ;
  };
  std::vector<std::vector<Choice>> enabled;
  double gamma = 0.0;
};

StitMdp to_mdp(const StitAutomaton& T, double gamma);

// Optimal discounted values within epsilon, by Bellman iteration from zero.
std::vector<double> value_iteration(const StitMdp& mdp, double epsilon);

// Min accumulation: sup/inf over infinite executions of the minimum edge
// weight, computed by enumerating simple executions (acyclic access path
// plus one elementary cycle). Exponential in states; desk scale only.
std::pair<double, double> extremal_min(const StitAutomaton& T);

struct DiscountedExtremes {
  double lower = 0.0;
  double upper = 0.0;
  double certified_error = 0.0;
};

DiscountedExtremes extremal_discounted(const StitAutomaton& T);

// Interval for the automaton's own accumulation policy.
ActionInterval extremal_interval(const StitAutomaton& T, const std::string& action_tag);

// Strictly dominated actions removed. K is dominated by K' when every K
// outcome is at most every K' outcome and not conversely, after widening
// both intervals by their certified errors. Nonempty for nonempty input.
std::set<std::string> undominated(const std::vector<ActionInterval>& intervals);

}  // namespace dau
