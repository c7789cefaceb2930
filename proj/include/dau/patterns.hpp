#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dau/explicit_model.hpp"

namespace dau {

// Obligation propagation schemata checked by brute force on explicit
// models. P1, XREV, FFWD, FREV and P2 are the refuted shapes: each moves
// an obligation across time with no premise tying the step taken to an
// optimal action. V1, V2 and V3 repair them with a tookOpt[ID] premise;
// L1 instead assumes the model keeps the promised choice among the
// optimal ones at the next moment (a structural condition on values).
struct PatternResult {
  enum class Status { ValidOnModel, Counterexample, ConstraintViolated };
  Status status = Status::ValidOnModel;
  std::optional<Index> counterexample;  // set iff status == Counterexample
  // Atom substitution that produced the counterexample, e.g. "phi=p" or
  // "phi=p, psi=q"; for L1 with every substitution below the constraint,
  // the first substitution that violated it.
  std::string instantiation;
  std::string agent;
};

// P1, XREV, FFWD, FREV, P2, V1, V2, V3, L1 in that order.
const std::vector<std::string>& pattern_ids();
// True for the schemata expected to survive the search (V1, V2, V3, L1).
bool pattern_is_valid_claim(const std::string& id);

// Instantiates the schema with every agent and every atom pair of the
// model and scans index by index for a point where the antecedent holds
// and the consequent fails. Substitutions, moments and histories are
// tried in sorted order, so the first hit is deterministic. Points where
// either side is undecided are skipped. For L1 the side condition is
// verified first across all substitutions; a violation is reported as
// ConstraintViolated (with the offending substitution) and no search
// runs. Atom-level promises make that condition degenerate: an atom is
// fixed per moment, so whenever some action could see to psi at the next
// moment, every action trivially does, and the check passes. The gate is
// still evaluated in earnest so that richer substitution families keep
// working if they are ever added. Models shallower than two steps leave
// every consequent undecided past a single real choice point and are
// rejected outright.
PatternResult check_pattern(const ExplicitStitModel& M, const std::string& id);

}  // namespace dau
