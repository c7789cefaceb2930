#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dau/automaton.hpp"
#include "dau/formula.hpp"

namespace dau {

// Ultimately periodic path: prefix states, then the cycle repeated forever.
struct Lasso {
  std::vector<std::string> prefix;
  std::vector<std::string> cycle;  // nonempty
};

// "q0 q1 | c0 c1" (prefix may be empty: "| c0").
std::string format_lasso(const Lasso& l);

struct PathCheckResult {
  bool holds = false;
  // Witness when an existential check succeeds; counterexample when a
  // universal check fails; empty otherwise.
  std::optional<Lasso> lasso;
};

// States satisfying a CTL* state formula. Quantified path subformulas are
// decided per state and replaced by fresh atoms, innermost first.
std::set<std::string> check_state(const TransitionSystem& ts, const Formula& f);

// Every infinite path from q satisfies psi (counterexample lasso on failure).
PathCheckResult check_universal_path(const TransitionSystem& ts,
                                     const std::string& q, const Formula& psi);

// Some infinite path from q satisfies psi (witness lasso on success).
PathCheckResult check_existential_path(const TransitionSystem& ts,
                                       const std::string& q, const Formula& psi);

// Verdict shared by all infinite extensions of the trace. Requires a defined
// syntactic horizon h and |trace| >= h+1.
bool eval_finite_trace(const Formula& psi,
                       const std::vector<std::set<std::string>>& trace);

}  // namespace dau
