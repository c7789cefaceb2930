#include "dau/checker.hpp"

#include <algorithm>
#include <stdexcept>

namespace dau {

namespace {

Lasso map_to_origin(const StitAutomaton& copy, const Lasso& l) {
  Lasso out;
  for (const auto& q : l.prefix) out.prefix.push_back(copy.origin_of(q));
  for (const auto& q : l.cycle) out.cycle.push_back(copy.origin_of(q));
  return out;
}

Formula admissible_body(const Formula& body) {
  FormulaClass c = classify(body);
  if (c.tag != FormulaClass::Tag::CheckerObligation)
    throw std::invalid_argument(
        "body '" + to_string(body) +
        "' is outside the checkable fragment; use oracle-eval on an explicit model");
  switch (c.kind) {
    case FormulaClass::Kind::PlainTemporal:
      return body;
    case FormulaClass::Kind::Dstit:
      return body->kids[0];
    case FormulaClass::Kind::NegDstit:
      return body->kids[0]->kids[0];
  }
  throw std::logic_error("unreachable");
}

// Second step shared by plain and conditional obligations: do the optimal
// first actions guarantee the body?
void decide_guarantee(const StitAutomaton& T, const Formula& body, Verdict& v) {
  FormulaClass c = classify(body);
  Formula phi = admissible_body(body);
  TransitionSystem whole = kripke_view(T);

  if (c.kind == FormulaClass::Kind::Dstit) {
    if (check_universal_path(whole, T.initial, phi).holds) {
      v.holds = false;
      v.notes.push_back(
          "trivial: every execution from the root satisfies the inner formula, "
          "so no action deliberately brings it about");
      return;
    }
  }
  if (c.kind == FormulaClass::Kind::NegDstit) {
    if (check_universal_path(whole, T.initial, phi).holds) {
      v.holds = true;  // nothing any action allows can make the dstit true
      return;
    }
  }

  for (const auto& K : v.optimal_actions) {
    StitAutomaton P = prime(T, K);
    PathCheckResult r = check_universal_path(kripke_view(P), P.initial, phi);
    if (c.kind == FormulaClass::Kind::NegDstit) {
      if (r.holds) {
        v.holds = false;
        v.failing_action = K;
        v.notes.push_back("action " + K +
                          " settles the inner formula on every execution it "
                          "allows, so it deliberately brings it about");
        return;
      }
    } else if (!r.holds) {
      v.holds = false;
      v.failing_action = K;
      if (r.lasso) v.counterexample = map_to_origin(P, *r.lasso);
      return;
    }
  }
  v.holds = true;
}

void note_agent_mismatch(const StitAutomaton& T, const std::string& formula_agent,
                         Verdict& v) {
  if (formula_agent != T.agent)
    v.notes.push_back("formula names agent '" + formula_agent +
                      "'; checked against the modeled agent '" + T.agent + "'");
}

}  // namespace

Verdict check_ought(const StitAutomaton& T, const Formula& body) {
  admissible_body(body);
  Verdict v;
  for (const auto& K : T.actions_at(T.initial))
    v.intervals.push_back(extremal_interval(prime(T, K), K));
  v.optimal_actions = undominated(v.intervals);
  decide_guarantee(T, body, v);
  return v;
}

Verdict check_conditional_ought(const StitAutomaton& T, const Formula& body,
                                const Formula& condition, std::optional<int> tau) {
  admissible_body(body);
  auto h = syntactic_horizon(condition);
  if (!h)
    throw std::invalid_argument("condition '" + to_string(condition) +
                                "' has no finite horizon; only next- and "
                                "bound-built conditions are admissible");
  int t = tau.value_or(*h);
  if (t < *h)
    throw std::invalid_argument("tau=" + std::to_string(t) +
                                " is below the condition's horizon " +
                                std::to_string(*h));
  if (t > kMaxTau)
    throw std::invalid_argument("tau=" + std::to_string(t) + " exceeds the cap " +
                                std::to_string(kMaxTau));
  // The first transition identifies the action under scrutiny, so the
  // effective lookahead is at least one step.
  t = std::max(t, 1);

  Verdict v;
  std::vector<ActionInterval> literal_max;  // lower aggregated by max instead
  for (const auto& K : T.actions_at(T.initial)) {
    // All length-t chains with first action K whose trace satisfies the
    // condition. The trace has t+1 >= h+1 positions, so it decides it.
    std::vector<std::vector<Transition>> fragments;
    std::vector<std::vector<Transition>> partial;
    for (const Transition* first : T.out(T.initial, K)) partial.push_back({*first});
    for (int step = 1; step < t; ++step) {
      std::vector<std::vector<Transition>> grown;
      for (const auto& seq : partial)
        for (const Transition* nx : T.out(seq.back().to)) {
          grown.push_back(seq);
          grown.back().push_back(*nx);
        }
      partial = std::move(grown);
    }
    for (auto& seq : partial) {
      std::vector<std::set<std::string>> trace{T.atoms_of(T.initial)};
      for (const auto& tr : seq) trace.push_back(T.atoms_of(tr.to));
      if (eval_finite_trace(condition, trace)) fragments.push_back(std::move(seq));
    }
    if (fragments.empty()) continue;

    ActionInterval agg;
    ActionInterval lit;
    bool first = true;
    for (const auto& frag : fragments) {
      ActionInterval one = extremal_interval(spine(T, frag), K);
      if (first) {
        agg = lit = one;
        first = false;
      } else {
        agg.lower = std::min(agg.lower, one.lower);
        agg.upper = std::max(agg.upper, one.upper);
        agg.certified_error = std::max(agg.certified_error, one.certified_error);
        lit.lower = std::max(lit.lower, one.lower);
        lit.upper = agg.upper;
        lit.certified_error = agg.certified_error;
      }
    }
    v.intervals.push_back(agg);
    literal_max.push_back(lit);
  }

  if (v.intervals.empty()) {
    v.holds = true;
    v.notes.push_back("vacuous: condition unsatisfiable within lookahead tau=" +
                      std::to_string(t));
    return v;
  }
  v.optimal_actions = undominated(v.intervals);
  if (undominated(literal_max) != v.optimal_actions)
    v.notes.push_back(
        "aggregating fragment lower bounds by max instead of min would select "
        "a different optimal set");
  decide_guarantee(T, body, v);
  return v;
}

Verdict check_permission(const StitAutomaton& T, const Formula& body,
                         const Formula& condition, std::optional<int> tau) {
  Formula negb;
  if (body->op == Op::Dstit)
    negb = lnot(body);
  else if (body->op == Op::Not && body->kids[0]->op == Op::Dstit)
    negb = body->kids[0];
  else
    negb = negate(body);
  Verdict v = condition ? check_conditional_ought(T, negb, condition, tau)
                        : check_ought(T, negb);
  v.holds = !v.holds;
  if (v.holds && v.failing_action)
    v.notes.push_back("witness: optimal action " + *v.failing_action +
                      " admits an execution satisfying the body");
  return v;
}

Verdict check_mission(const StitAutomaton& T, const Formula& f) {
  if (classify_role(f).tag != FormulaClass::Tag::StateFormula)
    throw std::invalid_argument("mission '" + to_string(f) +
                                "' is not a state formula");
  Verdict v;
  v.holds = check_state(kripke_view(T), f).count(T.initial) > 0;
  return v;
}

Verdict check_query(const StitAutomaton& T, const Formula& query,
                    std::optional<int> tau) {
  Verdict v;
  switch (query->op) {
    case Op::Ought:
      v = check_ought(T, query->kids[0]);
      break;
    case Op::CondOught:
      v = check_conditional_ought(T, query->kids[0], query->kids[1], tau);
      break;
    case Op::Perm:
      v = check_permission(T, query->kids[0], nullptr, tau);
      break;
    case Op::CondPerm:
      v = check_permission(T, query->kids[0], query->kids[1], tau);
      break;
    default:
      return check_mission(T, query);
  }
  note_agent_mismatch(T, query->name, v);
  return v;
}

}  // namespace dau
