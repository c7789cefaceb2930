#include "dau/fixtures.hpp"

#include <map>
#include <stdexcept>

namespace dau {

namespace {

// Two-state reference automaton used across the documentation: staying at a
// pays 1 per step, switching to b then looping pays 5 per step.
const std::string kToy = R"json({
  "agent": "alpha",
  "accumulation": {"kind": "discounted", "gamma": 0.5, "tolerance": 1e-9},
  "initial": "a",
  "states": [
    {"id": "a", "atoms": ["p"]},
    {"id": "b", "atoms": ["q"]}
  ],
  "transitions": [
    {"from": "a", "action": "K1", "to": "a", "weight": 1.0},
    {"from": "a", "action": "K2", "to": "b", "weight": 0.0},
    {"from": "b", "action": "K3", "to": "b", "weight": 5.0}
  ]
})json";

const std::string kToyMin = R"json({
  "agent": "alpha",
  "accumulation": {"kind": "min"},
  "initial": "a",
  "states": [
    {"id": "a", "atoms": ["p"]},
    {"id": "b", "atoms": ["q"]}
  ],
  "transitions": [
    {"from": "a", "action": "K1", "to": "a", "weight": 1.0},
    {"from": "a", "action": "K2", "to": "b", "weight": 0.0},
    {"from": "b", "action": "K3", "to": "b", "weight": 5.0}
  ]
})json";

// Highway entry/exit controller, single agent. Other traffic is not modeled,
// so a collide transition is available from every state except doNotEnter
// and every weight is 0: all actions tie, nothing is ever dominated, and no
// obligation can exclude the collision branch.
const std::string kHighwayA = R"json({
  "agent": "alpha",
  "accumulation": {"kind": "discounted", "gamma": 0.9, "tolerance": 1e-9},
  "initial": "start",
  "notes": [
    "uniform zero weights: every action at every state stays undominated,",
    "so safety obligations fail everywhere the collide branch exists;",
    "atom g (right of way) on passEntry discharges g R !p immediately,",
    "and no reachable state carries p, making A(g R !p) hold from passEntry;",
    "onHighway -> reachExit keeps reachExit within 4 steps of start"
  ],
  "states": [
    {"id": "start", "atoms": ["start"]},
    {"id": "doNotEnter", "atoms": ["doNotEnter"]},
    {"id": "wantEntry", "atoms": ["wantEntry"]},
    {"id": "passEntry", "atoms": ["passEntry", "g"]},
    {"id": "onHighway", "atoms": ["onHighway", "p"]},
    {"id": "wantExit", "atoms": ["wantExit"]},
    {"id": "reachExit", "atoms": ["reachExit"]},
    {"id": "collision", "atoms": ["collision"]}
  ],
  "transitions": [
    {"from": "start", "action": "enter", "to": "wantEntry", "weight": 0.0},
    {"from": "start", "action": "dropOut", "to": "doNotEnter", "weight": 0.0},
    {"from": "start", "action": "collide", "to": "collision", "weight": 0.0},
    {"from": "wantEntry", "action": "advance", "to": "passEntry", "weight": 0.0},
    {"from": "wantEntry", "action": "dropOut", "to": "doNotEnter", "weight": 0.0},
    {"from": "wantEntry", "action": "collide", "to": "collision", "weight": 0.0},
    {"from": "passEntry", "action": "merge", "to": "onHighway", "weight": 0.0},
    {"from": "passEntry", "action": "collide", "to": "collision", "weight": 0.0},
    {"from": "onHighway", "action": "cruiseOn", "to": "wantExit", "weight": 0.0},
    {"from": "onHighway", "action": "exitNow", "to": "reachExit", "weight": 0.0},
    {"from": "onHighway", "action": "collide", "to": "collision", "weight": 0.0},
    {"from": "wantExit", "action": "exit", "to": "reachExit", "weight": 0.0},
    {"from": "wantExit", "action": "collide", "to": "collision", "weight": 0.0},
    {"from": "reachExit", "action": "cruise", "to": "reachExit", "weight": 0.0},
    {"from": "reachExit", "action": "rejoin", "to": "onHighway", "weight": 0.0},
    {"from": "reachExit", "action": "collide", "to": "collision", "weight": 0.0},
    {"from": "doNotEnter", "action": "stay", "to": "doNotEnter", "weight": 0.0},
    {"from": "collision", "action": "crash", "to": "collision", "weight": 0.0}
  ]
})json";

// Modified highway automaton: the other car yields unless alpha refuses to,
// so collision is reachable only through doNotYield. The yield branch is
// weighted far above doNotYield, keeping yield the unique optimal action at
// passEntry; civil cruise outweighs the direct exit at onHighway, so optimal
// histories spend a step in wantExit before reaching the exit (n = 1).
const std::string kHighwayB = R"json({
  "agent": "alpha",
  "accumulation": {"kind": "discounted", "gamma": 0.9, "tolerance": 1e-9},
  "initial": "start",
  "notes": [
    "yield 10 vs doNotYield 1: doNotYield interval [1,1] sits strictly below",
    "yield's [12.61, 17.308], so yield is uniquely optimal at passEntry",
    "(keeps X !collision and the g R !p guarantee on every optimal action);",
    "cruiseOn 5 vs exitNow 1: cruiseOn [6.8, 6.8] dominates exitNow [1,1],",
    "so no optimal action reaches reachExit within 1 step of onHighway;",
    "atom g sits on granted (entered via yield), atom p on onHighway,",
    "reachExit and collision, so both doNotYield branches violate g R !p",
    "while every yield history discharges it at granted"
  ],
  "states": [
    {"id": "start", "atoms": ["start"]},
    {"id": "doNotEnter", "atoms": ["doNotEnter"]},
    {"id": "wantEntry", "atoms": ["wantEntry"]},
    {"id": "passEntry", "atoms": ["passEntry"]},
    {"id": "granted", "atoms": ["granted", "g"]},
    {"id": "onHighway", "atoms": ["onHighway", "p"]},
    {"id": "wantExit", "atoms": ["wantExit"]},
    {"id": "reachExit", "atoms": ["reachExit", "p"]},
    {"id": "collision", "atoms": ["collision", "p"]}
  ],
  "transitions": [
    {"from": "start", "action": "enter", "to": "wantEntry", "weight": 2.0},
    {"from": "start", "action": "dropOut", "to": "doNotEnter", "weight": 0.0},
    {"from": "wantEntry", "action": "advance", "to": "passEntry", "weight": 2.0},
    {"from": "wantEntry", "action": "dropOut", "to": "doNotEnter", "weight": 0.0},
    {"from": "passEntry", "action": "yield", "to": "granted", "weight": 10.0},
    {"from": "passEntry", "action": "doNotYield", "to": "reachExit", "weight": 1.0},
    {"from": "passEntry", "action": "doNotYield", "to": "collision", "weight": 1.0},
    {"from": "granted", "action": "merge", "to": "onHighway", "weight": 2.0},
    {"from": "onHighway", "action": "cruiseOn", "to": "wantExit", "weight": 5.0},
    {"from": "onHighway", "action": "exitNow", "to": "reachExit", "weight": 1.0},
    {"from": "wantExit", "action": "exit", "to": "reachExit", "weight": 2.0},
    {"from": "reachExit", "action": "cruise", "to": "reachExit", "weight": 0.0},
    {"from": "doNotEnter", "action": "stay", "to": "doNotEnter", "weight": 0.0},
    {"from": "collision", "action": "crash", "to": "collision", "weight": 0.0}
  ]
})json";

// Same topology as B with the doNotYield weight raised to 20: its interval
// [20,20] now dominates yield's [12.61, 17.308], making doNotYield the
// unique optimal action at passEntry.
const std::string kHighwayBRed = R"json({
  "agent": "alpha",
  "accumulation": {"kind": "discounted", "gamma": 0.9, "tolerance": 1e-9},
  "initial": "start",
  "notes": [
    "doNotYield 20 vs yield 10: doNotYield [20,20] strictly dominates",
    "yield [12.61, 17.308], so the optimal action at passEntry admits a",
    "next-step collision and guarantees !(g R !p)"
  ],
  "states": [
    {"id": "start", "atoms": ["start"]},
    {"id": "doNotEnter", "atoms": ["doNotEnter"]},
    {"id": "wantEntry", "atoms": ["wantEntry"]},
    {"id": "passEntry", "atoms": ["passEntry"]},
    {"id": "granted", "atoms": ["granted", "g"]},
    {"id": "onHighway", "atoms": ["onHighway", "p"]},
    {"id": "wantExit", "atoms": ["wantExit"]},
    {"id": "reachExit", "atoms": ["reachExit", "p"]},
    {"id": "collision", "atoms": ["collision", "p"]}
  ],
  "transitions": [
    {"from": "start", "action": "enter", "to": "wantEntry", "weight": 2.0},
    {"from": "start", "action": "dropOut", "to": "doNotEnter", "weight": 0.0},
    {"from": "wantEntry", "action": "advance", "to": "passEntry", "weight": 2.0},
    {"from": "wantEntry", "action": "dropOut", "to": "doNotEnter", "weight": 0.0},
    {"from": "passEntry", "action": "yield", "to": "granted", "weight": 10.0},
    {"from": "passEntry", "action": "doNotYield", "to": "reachExit", "weight": 20.0},
    {"from": "passEntry", "action": "doNotYield", "to": "collision", "weight": 20.0},
    {"from": "granted", "action": "merge", "to": "onHighway", "weight": 2.0},
    {"from": "onHighway", "action": "cruiseOn", "to": "wantExit", "weight": 5.0},
    {"from": "onHighway", "action": "exitNow", "to": "reachExit", "weight": 1.0},
    {"from": "wantExit", "action": "exit", "to": "reachExit", "weight": 2.0},
    {"from": "reachExit", "action": "cruise", "to": "reachExit", "weight": 0.0},
    {"from": "doNotEnter", "action": "stay", "to": "doNotEnter", "weight": 0.0},
    {"from": "collision", "action": "crash", "to": "collision", "weight": 0.0}
  ]
})json";

// Two-moment branching tree matching the worked single-agent example:
// values realize Optimal(m) = {K2} and Optimal(mp) = {K4, K5}; goalA marks
// the histories where the running example's goal formula F goalA holds,
// condB marks the single history satisfying the conditioning formula.
const std::string kFig2 = R"json({
  "agents": ["alpha"],
  "moments": [
    {"id": "m"},
    {"id": "mp", "parent": "m"},
    {"id": "c2", "parent": "m"},
    {"id": "h1", "parent": "mp", "atoms": ["condB", "goalA"]},
    {"id": "h2", "parent": "mp", "atoms": ["goalA"]},
    {"id": "h3", "parent": "mp", "atoms": ["goalA"]},
    {"id": "h4", "parent": "mp"},
    {"id": "h5", "parent": "c2", "atoms": ["goalA"]},
    {"id": "h6", "parent": "c2", "atoms": ["goalA"]}
  ],
  "choices": [
    {"agent": "alpha", "moment": "m",
     "actions": {"K1": ["mp"], "K2": ["c2"]}},
    {"agent": "alpha", "moment": "mp",
     "actions": {"K3": ["h1"], "K4": ["h2"], "K5": ["h3", "h4"]}},
    {"agent": "alpha", "moment": "c2",
     "actions": {"K6": ["h5", "h6"]}}
  ],
  "values": {"h1": 3, "h2": 5, "h3": 4, "h4": 6, "h5": 7, "h6": 8}
})json";

// Counterexample tree for the Next propagation patterns: the optimal action
// at m1 leads to m2, so evaluating one step along a non-optimal history
// (through m3) breaks both directions of the Next/Ought exchange.
const std::string kCexNext = R"json({
  "agents": ["alpha"],
  "moments": [
    {"id": "m1"},
    {"id": "m3", "parent": "m1", "atoms": ["psi"]},
    {"id": "m2", "parent": "m1", "atoms": ["phi"]},
    {"id": "h1", "parent": "m3"},
    {"id": "h2", "parent": "m3"},
    {"id": "h3", "parent": "m2"},
    {"id": "h4", "parent": "m2"}
  ],
  "choices": [
    {"agent": "alpha", "moment": "m1",
     "actions": {"K1": ["m3"], "K2": ["m2"]}},
    {"agent": "alpha", "moment": "m3",
     "actions": {"K3": ["h1"], "K4": ["h2"]}},
    {"agent": "alpha", "moment": "m2",
     "actions": {"K5": ["h3"], "K6": ["h4"]}}
  ],
  "values": {"h1": 0, "h2": 1, "h3": 5, "h4": 6}
})json";

// Counterexample tree for the guarded Eventually pattern: at m1 the agent
// ought to reach phi (the optimal action J1 passes through n1), but along
// the non-optimal branch to n2 the only action guaranteeing F phi (Kp, via
// g3) is dominated by Kq, so the obligation evaporates even though the
// agent still could see to F phi.
const std::string kCexBig = R"json({
  "agents": ["alpha"],
  "moments": [
    {"id": "m1"},
    {"id": "n1", "parent": "m1", "atoms": ["phi"]},
    {"id": "n2", "parent": "m1"},
    {"id": "g1", "parent": "n1"},
    {"id": "g2", "parent": "n1"},
    {"id": "g3", "parent": "n2", "atoms": ["phi"]},
    {"id": "g4", "parent": "n2"}
  ],
  "choices": [
    {"agent": "alpha", "moment": "m1",
     "actions": {"J1": ["n1"], "J2": ["n2"]}},
    {"agent": "alpha", "moment": "n1",
     "actions": {"Ka": ["g1"], "Kb": ["g2"]}},
    {"agent": "alpha", "moment": "n2",
     "actions": {"Kp": ["g3"], "Kq": ["g4"]}}
  ],
  "values": {"g1": 10, "g2": 12, "g3": 1, "g4": 9}
})json";

struct Entry {
  bool automaton;
  const std::string* text;
};

const std::map<std::string, Entry>& table() {
  static const std::map<std::string, Entry> t = {
      {"TOY", {true, &kToy}},         {"TOY-MIN", {true, &kToyMin}},
      {"A", {true, &kHighwayA}},      {"B", {true, &kHighwayB}},
      {"B-red", {true, &kHighwayBRed}},
      {"FIG2", {false, &kFig2}},      {"CEX-NEXT", {false, &kCexNext}},
      {"CEX-BIG", {false, &kCexBig}},
  };
  return t;
}

const Entry& lookup(const std::string& name) {
  auto it = table().find(name);
  if (it == table().end()) {
    std::string known;
    for (const auto& [n, e] : table()) known += (known.empty() ? "" : ", ") + n;
    throw std::runtime_error("unknown fixture '" + name + "' (available: " + known +
                             ")");
  }
  return it->second;
}

}  // namespace

std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (const auto& [n, e] : table()) out.push_back(n);
  return out;
}

bool is_automaton_fixture(const std::string& name) {
  auto it = table().find(name);
  return it != table().end() && it->second.automaton;
}

bool is_model_fixture(const std::string& name) {
  auto it = table().find(name);
  return it != table().end() && !it->second.automaton;
}

const std::string& fixture_text(const std::string& name) { return *lookup(name).text; }

StitAutomaton fixture_automaton(const std::string& name) {
  const Entry& e = lookup(name);
  if (!e.automaton)
    throw std::runtime_error("fixture '" + name + "' is an explicit model, not an automaton");
  return parse_automaton(*e.text);
}

ExplicitStitModel fixture_model(const std::string& name) {
  const Entry& e = lookup(name);
  if (e.automaton)
    throw std::runtime_error("fixture '" + name + "' is an automaton, not an explicit model");
  return parse_explicit_model(*e.text);
}

}  // namespace dau
