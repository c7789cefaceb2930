#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dau/automaton.hpp"
#include "dau/formula.hpp"
#include "dau/temporal.hpp"
#include "dau/utility.hpp"

namespace dau {

// Hard cap on the conditional lookahead depth; enumeration is exponential
// in it, so anything beyond desk scale is rejected outright.
inline constexpr int kMaxTau = 8;

struct Verdict {
  bool holds = false;
  std::set<std::string> optimal_actions;
  std::vector<ActionInterval> intervals;
  std::optional<std::string> failing_action;
  // States named in original-automaton ids (copies mapped back).
  std::optional<Lasso> counterexample;
  std::vector<std::string> notes;
};

// Decides whether every optimal first action guarantees the body. body must
// be pure temporal, dstit over a pure temporal formula, or the negation of
// such a dstit; anything else is rejected with a pointer to oracle-eval.
Verdict check_ought(const StitAutomaton& T, const Formula& body);

// Conditional variant: optimality is assessed over executions whose first
// tau steps are compatible with the condition. tau defaults to the
// condition's syntactic horizon and may not fall below it; a horizon (or
// explicit tau) beyond kMaxTau is an error. An unsatisfiable condition
// yields holds=true with a "vacuous" note and no optimal actions.
Verdict check_conditional_ought(const StitAutomaton& T, const Formula& body,
                                const Formula& condition,
                                std::optional<int> tau = std::nullopt);

// Permission as the dual: holds when some (conditionally) optimal action
// admits an execution satisfying the body. Diagnostics come from the inner
// obligation check; a failing_action there is the permitting witness here.
Verdict check_permission(const StitAutomaton& T, const Formula& body,
                         const Formula& condition = nullptr,
                         std::optional<int> tau = std::nullopt);

// CTL* satisfaction of a state formula at the initial state.
Verdict check_mission(const StitAutomaton& T, const Formula& f);

// Dispatches a parsed query: Ob/Perm wrappers (conditional or not) go to the
// deontic checks, state formulas to check_mission. The formula's agent id is
// interpreted as the modeled agent; a mismatch is noted, not rejected.
Verdict check_query(const StitAutomaton& T, const Formula& query,
                    std::optional<int> tau = std::nullopt);

}  // namespace dau
