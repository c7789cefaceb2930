#include "dau/automaton.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "json.hpp"

namespace dau {

namespace {

using nlohmann::ordered_json;

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  auto head = [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
  };
  auto rest = [&](char c) {
    return head(c) || (c >= '0' && c <= '9') || c == '-';
  };
  if (!head(s[0])) return false;
  return std::all_of(s.begin() + 1, s.end(), rest);
}

void sort_unique(std::vector<Transition>& ts) {
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
}

}  // namespace

AccumulationPolicy AccumulationPolicy::discounted(double gamma, double tolerance) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("gamma must lie in (0,1)");
  if (!(tolerance > 0.0))
    throw std::invalid_argument("tolerance must be positive");
  AccumulationPolicy p;
  p.kind = Kind::Discounted;
  p.gamma = gamma;
  p.tolerance = tolerance;
  return p;
}

std::set<std::string> StitAutomaton::action_set() const {
  std::set<std::string> out;
  for (const auto& t : transitions) out.insert(t.action);
  return out;
}

std::vector<std::string> StitAutomaton::actions_at(const std::string& q) const {
  std::set<std::string> acts;
  for (const auto& t : transitions)
    if (t.from == q) acts.insert(t.action);
  return {acts.begin(), acts.end()};
}

std::vector<const Transition*> StitAutomaton::out(const std::string& q) const {
  std::vector<const Transition*> res;
  for (const auto& t : transitions)
    if (t.from == q) res.push_back(&t);
  return res;
}

std::vector<const Transition*> StitAutomaton::out(const std::string& q,
                                                  const std::string& action) const {
  std::vector<const Transition*> res;
  for (const auto& t : transitions)
    if (t.from == q && t.action == action) res.push_back(&t);
  return res;
}

const std::set<std::string>& StitAutomaton::atoms_of(const std::string& q) const {
  static const std::set<std::string> empty;
  auto it = labels.find(q);
  return it == labels.end() ? empty : it->second;
}

std::string StitAutomaton::origin_of(const std::string& q) const {
  auto it = origin.find(q);
  return it == origin.end() ? q : it->second;
}

std::set<std::string> StitAutomaton::reachable() const {
  std::set<std::string> seen;
  std::deque<std::string> work;
  if (states.count(initial)) {
    seen.insert(initial);
    work.push_back(initial);
  }
  while (!work.empty()) {
    std::string q = work.front();
    work.pop_front();
    for (const auto& t : transitions)
      if (t.from == q && states.count(t.to) && seen.insert(t.to).second)
        work.push_back(t.to);
  }
  return seen;
}

bool same_structure(const StitAutomaton& a, const StitAutomaton& b) {
  return a.agent == b.agent && a.accumulation == b.accumulation &&
         a.initial == b.initial && a.states == b.states && a.labels == b.labels &&
         a.finals == b.finals && a.transitions == b.transitions;
}

std::vector<std::string> validate(const StitAutomaton& T) {
  std::vector<std::string> out;
  auto bad = [&](std::string msg) { out.push_back(std::move(msg)); };

  for (const auto& q : T.states)
    if (!valid_name(q)) bad("illegal state name '" + q + "'");
  if (!valid_name(T.agent)) bad("illegal agent name '" + T.agent + "'");
  if (!T.states.count(T.initial))
    bad("initial state '" + T.initial + "' not declared");
  for (const auto& [q, atoms] : T.labels) {
    if (!T.states.count(q)) bad("labels mention unknown state '" + q + "'");
    for (const auto& a : atoms)
      if (!valid_name(a)) bad("illegal atom name '" + a + "'");
  }
  for (const auto& q : T.finals)
    if (!T.states.count(q)) bad("final state '" + q + "' not declared");

  std::map<std::pair<std::string, std::string>, std::string> pair_action;
  for (const auto& t : T.transitions) {
    if (!T.states.count(t.from))
      bad("transition from unknown state '" + t.from + "'");
    if (!T.states.count(t.to)) bad("transition to unknown state '" + t.to + "'");
    if (!valid_name(t.action)) bad("illegal action name '" + t.action + "'");
    if (!std::isfinite(t.weight))
      bad("non-finite weight on (" + t.from + "," + t.action + "," + t.to + ")");
    auto [it, fresh] = pair_action.emplace(std::pair(t.from, t.to), t.action);
    if (!fresh && it->second != t.action)
      bad("duplicate action for pair (" + t.from + "," + t.to + ")");
    else if (!fresh && it->second == t.action)
      bad("conflicting weights on pair (" + t.from + "," + t.to + ")");
  }

  if (T.accumulation.kind == AccumulationPolicy::Kind::Discounted) {
    if (!(T.accumulation.gamma > 0.0 && T.accumulation.gamma < 1.0))
      bad("gamma out of range");
    if (!(T.accumulation.tolerance > 0.0)) bad("tolerance must be positive");
  }

  for (const auto& q : T.reachable()) {
    bool has_out = std::any_of(T.transitions.begin(), T.transitions.end(),
                               [&](const Transition& t) { return t.from == q; });
    if (!has_out) bad("state " + q + " has no outgoing transition");
  }
  return out;
}

StitAutomaton restrict_first_action(const StitAutomaton& T, const std::string& K) {
  auto at_init = T.actions_at(T.initial);
  if (std::find(at_init.begin(), at_init.end(), K) == at_init.end())
    throw std::invalid_argument("action '" + K + "' unavailable at initial state '" +
                                T.initial + "'");
  StitAutomaton R = T;
  R.transitions.clear();
  for (const auto& t : T.transitions)
    if (t.from != T.initial || t.action == K) R.transitions.push_back(t);
  return R;
}

StitAutomaton prime(const StitAutomaton& T, const std::string& K) {
  auto at_init = T.actions_at(T.initial);
  if (std::find(at_init.begin(), at_init.end(), K) == at_init.end())
    throw std::invalid_argument("action '" + K + "' unavailable at initial state '" +
                                T.initial + "'");

  StitAutomaton P;
  P.agent = T.agent;
  P.accumulation = T.accumulation;
  const std::string head_init = "h_" + T.initial;
  const std::string tail_init = "t_" + T.initial;
  P.initial = head_init;

  for (const auto& q : T.states) {
    for (const char* pre : {"h_", "t_"}) {
      std::string c = pre + q;
      P.states.insert(c);
      P.labels[c] = T.atoms_of(q);
      if (T.finals.count(q)) P.finals.insert(c);
      P.origin[c] = T.origin_of(q);
    }
  }
  for (const auto& t : T.transitions) {
    // Head copy: restricted at the initial state, re-entries redirected into
    // the untouched tail copy.
    if (t.from != T.initial || t.action == K) {
      std::string to = t.to == T.initial ? tail_init : "h_" + t.to;
      P.transitions.push_back({"h_" + t.from, t.action, to, t.weight});
    }
    P.transitions.push_back({"t_" + t.from, t.action, "t_" + t.to, t.weight});
  }
  sort_unique(P.transitions);
  return P;
}

StitAutomaton spine(const StitAutomaton& T, const std::vector<Transition>& forced) {
  if (forced.empty()) return T;
  if (forced.front().from != T.initial)
    throw std::invalid_argument("forced sequence must start at the initial state");
  for (size_t i = 0; i < forced.size(); ++i) {
    if (i + 1 < forced.size() && forced[i].to != forced[i + 1].from)
      throw std::invalid_argument("forced sequence is not chained");
    bool known = std::any_of(
        T.transitions.begin(), T.transitions.end(), [&](const Transition& t) {
          return t.from == forced[i].from && t.action == forced[i].action &&
                 t.to == forced[i].to;
        });
    if (!known)
      throw std::invalid_argument("forced step (" + forced[i].from + "," +
                                  forced[i].action + "," + forced[i].to +
                                  ") is not a transition");
  }

  StitAutomaton S;
  S.agent = T.agent;
  S.accumulation = T.accumulation;
  auto sp = [](size_t i) { return "sp_" + std::to_string(i); };
  S.initial = sp(0);

  for (const auto& q : T.states) {
    std::string c = "t_" + q;
    S.states.insert(c);
    S.labels[c] = T.atoms_of(q);
    if (T.finals.count(q)) S.finals.insert(c);
    S.origin[c] = T.origin_of(q);
  }
  for (size_t i = 0; i < forced.size(); ++i) {
    S.states.insert(sp(i));
    S.labels[sp(i)] = T.atoms_of(forced[i].from);
    if (T.finals.count(forced[i].from)) S.finals.insert(sp(i));
    S.origin[sp(i)] = T.origin_of(forced[i].from);
    std::string to = i + 1 < forced.size() ? sp(i + 1) : "t_" + forced[i].to;
    S.transitions.push_back({sp(i), forced[i].action, to, forced[i].weight});
  }
  for (const auto& t : T.transitions)
    S.transitions.push_back({"t_" + t.from, t.action, "t_" + t.to, t.weight});
  sort_unique(S.transitions);
  return S;
}

StitAutomaton reroot(const StitAutomaton& T, const std::string& q) {
  if (!T.states.count(q))
    throw std::invalid_argument("unknown state '" + q + "'");
  StitAutomaton R = T;
  R.initial = q;
  return R;
}

TransitionSystem kripke_view(const StitAutomaton& T) {
  TransitionSystem ts;
  ts.initial = T.initial;
  ts.states = T.states;
  for (const auto& q : T.states) {
    ts.labels[q] = T.atoms_of(q);
    ts.succ[q];
  }
  for (const auto& t : T.transitions) ts.succ[t.from].insert(t.to);
  return ts;
}

StitAutomaton parse_automaton(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("automaton JSON: ") + e.what());
  }
  auto need = [&](const char* key) -> const ordered_json& {
    if (!j.contains(key))
      throw std::runtime_error(std::string("automaton JSON: missing field '") +
                               key + "'");
    return j.at(key);
  };

  StitAutomaton T;
  T.agent = need("agent").get<std::string>();
  const auto& acc = need("accumulation");
  std::string kind = acc.at("kind").get<std::string>();
  if (kind == "min") {
    T.accumulation = AccumulationPolicy::min();
  } else if (kind == "discounted") {
    T.accumulation = AccumulationPolicy::discounted(
        acc.at("gamma").get<double>(), acc.at("tolerance").get<double>());
  } else {
    throw std::runtime_error("automaton JSON: unknown accumulation kind '" + kind +
                             "'");
  }
  T.initial = need("initial").get<std::string>();
  for (const auto& s : need("states")) {
    std::string id = s.at("id").get<std::string>();
    if (T.states.count(id))
      throw std::runtime_error("automaton JSON: duplicate state '" + id + "'");
    T.states.insert(id);
    std::set<std::string> atoms;
    if (s.contains("atoms"))
      for (const auto& a : s.at("atoms")) atoms.insert(a.get<std::string>());
    T.labels[id] = std::move(atoms);
    if (s.value("final", false)) T.finals.insert(id);
  }
  for (const auto& t : need("transitions"))
    T.transitions.push_back({t.at("from").get<std::string>(),
                             t.at("action").get<std::string>(),
                             t.at("to").get<std::string>(),
                             t.at("weight").get<double>()});
  sort_unique(T.transitions);
  return T;
}

std::string automaton_to_json(const StitAutomaton& T) {
  ordered_json j;
  j["agent"] = T.agent;
  if (T.accumulation.kind == AccumulationPolicy::Kind::Min) {
    j["accumulation"] = {{"kind", "min"}};
  } else {
    j["accumulation"] = {{"kind", "discounted"},
                         {"gamma", T.accumulation.gamma},
                         {"tolerance", T.accumulation.tolerance}};
  }
  j["initial"] = T.initial;
  j["states"] = ordered_json::array();
  for (const auto& q : T.states) {
    ordered_json s;
    s["id"] = q;
    s["atoms"] = T.atoms_of(q);
    if (T.finals.count(q)) s["final"] = true;
    j["states"].push_back(std::move(s));
  }
  j["transitions"] = ordered_json::array();
  for (const auto& t : T.transitions)
    j["transitions"].push_back({{"from", t.from},
                                {"action", t.action},
                                {"to", t.to},
                                {"weight", t.weight}});
  return j.dump(2);
}

}  // namespace dau
