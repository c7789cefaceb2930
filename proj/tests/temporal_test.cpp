#include "doctest.h"

#include <random>

#include "dau/automaton.hpp"
#include "dau/formula.hpp"
#include "dau/temporal.hpp"
#include "support/oracles.hpp"
#include "support/random_models.hpp"

using namespace dau;

namespace {

const char* kToyJson = R"({ "agent": "alpha",
  "accumulation": {"kind":"discounted","gamma":0.5,"tolerance":1e-9},
  "initial": "a",
  "states": [ {"id":"a","atoms":["p"]}, {"id":"b","atoms":["q"]} ],
  "transitions": [ {"from":"a","action":"K1","to":"a","weight":1.0},
                   {"from":"a","action":"K2","to":"b","weight":0.0},
                   {"from":"b","action":"K3","to":"b","weight":5.0} ] })";

TransitionSystem toy_ts() { return kripke_view(parse_automaton(kToyJson)); }

std::vector<std::set<std::string>> lasso_labels(const TransitionSystem& ts,
                                                const std::vector<std::string>& qs) {
  std::vector<std::set<std::string>> out;
  for (const auto& q : qs) out.push_back(ts.labels.at(q));
  return out;
}

}  // namespace

TEST_CASE("state formulas on the reference system") {
  TransitionSystem ts = toy_ts();
  CHECK(check_state(ts, parse_formula("E F q")) ==
        std::set<std::string>{"a", "b"});
  CHECK(check_state(ts, parse_formula("A G p")) == std::set<std::string>{});
  CHECK(check_state(ts, parse_formula("E G p")) == std::set<std::string>{"a"});
  CHECK(check_state(ts, parse_formula("A G true")) ==
        std::set<std::string>{"a", "b"});
  CHECK(check_state(ts, parse_formula("p | q")) ==
        std::set<std::string>{"a", "b"});
  CHECK(check_state(ts, parse_formula("E X (A G q)")) ==
        std::set<std::string>{"a", "b"});
  CHECK(check_state(ts, parse_formula("A X (A G q)")) ==
        std::set<std::string>{"b"});
  CHECK_THROWS_AS(check_state(ts, parse_formula("F q")), std::invalid_argument);
}

TEST_CASE("universal path checks and counterexamples") {
  TransitionSystem ts = toy_ts();
  auto r = check_universal_path(ts, "a", parse_formula("G (p | q)"));
  CHECK(r.holds);
  CHECK(!r.lasso);

  r = check_universal_path(ts, "a", parse_formula("F q"));
  CHECK(!r.holds);
  REQUIRE(r.lasso);
  CHECK(r.lasso->prefix == std::vector<std::string>{});
  CHECK(r.lasso->cycle == std::vector<std::string>{"a"});
  CHECK(format_lasso(*r.lasso) == "| a");

  r = check_universal_path(ts, "b", parse_formula("G q"));
  CHECK(r.holds);
}

TEST_CASE("existential path checks and witnesses") {
  TransitionSystem ts = toy_ts();
  auto r = check_existential_path(ts, "a", parse_formula("X q"));
  CHECK(r.holds);
  REQUIRE(r.lasso);
  CHECK(r.lasso->prefix == std::vector<std::string>{"a"});
  CHECK(r.lasso->cycle == std::vector<std::string>{"b"});
  CHECK(format_lasso(*r.lasso) == "a | b");

  CHECK(!check_existential_path(ts, "b", parse_formula("F p")).holds);
  CHECK(check_existential_path(ts, "a", parse_formula("p U q")).holds);
  CHECK(check_existential_path(ts, "a", parse_formula("F<=4 q")).holds);
  CHECK(!check_existential_path(ts, "b", parse_formula("X X p")).holds);
  CHECK_THROWS_AS(check_existential_path(ts, "zz", parse_formula("F p")),
                  std::invalid_argument);
}

TEST_CASE("returned lassos really decide the formula") {
  TransitionSystem ts = toy_ts();
  for (const char* text : {"F q", "G p", "p U q", "X X q", "G F p", "F G q"}) {
    Formula psi = parse_formula(text);
    auto ex = check_existential_path(ts, "a", psi);
    if (ex.holds) {
      REQUIRE(ex.lasso);
      CHECK(testing::eval_ltl_on_lasso(psi, lasso_labels(ts, ex.lasso->prefix),
                                       lasso_labels(ts, ex.lasso->cycle)));
    }
    auto un = check_universal_path(ts, "a", psi);
    if (!un.holds) {
      REQUIRE(un.lasso);
      CHECK(!testing::eval_ltl_on_lasso(psi, lasso_labels(ts, un.lasso->prefix),
                                        lasso_labels(ts, un.lasso->cycle)));
    }
  }
}

TEST_CASE("finite trace evaluation") {
  using Atoms = std::set<std::string>;
  CHECK(eval_finite_trace(parse_formula("X p"), {Atoms{"p"}, Atoms{"p"}}));
  CHECK(eval_finite_trace(parse_formula("F<=2 q"),
                          {Atoms{"p"}, Atoms{"p"}, Atoms{"q"}}));
  CHECK(!eval_finite_trace(parse_formula("G<=1 p"), {Atoms{"p"}, Atoms{"q"}}));
  CHECK(eval_finite_trace(parse_formula("p -> X q"), {Atoms{}, Atoms{}}));
  CHECK_THROWS_AS(eval_finite_trace(parse_formula("G p"), {Atoms{"p"}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(eval_finite_trace(parse_formula("X X p"), {Atoms{}, Atoms{}}),
                  std::invalid_argument);
}

TEST_CASE("universal/existential duality on a random corpus") {
  std::mt19937_64 rng(9100);
  testing::AutomatonParams params;
  params.max_states = 5;
  testing::LtlSampler formulas(rng, {"p", "q", "r"});
  int count = 0;
  while (count < 500) {
    StitAutomaton T = testing::random_automaton(rng, params);
    TransitionSystem ts = kripke_view(T);
    Formula psi = formulas.sample(3, 2);
    ++count;
    CAPTURE(to_string(psi));
    bool uni = check_universal_path(ts, ts.initial, psi).holds;
    bool ex = check_existential_path(ts, ts.initial, negate(psi)).holds;
    CHECK(uni == !ex);
  }
}

TEST_CASE("tableau agrees with exhaustive lasso enumeration") {
  std::mt19937_64 rng(9101);
  testing::AutomatonParams params;
  params.max_states = 3;
  testing::LtlSampler formulas(rng, {"p", "q"});
  int count = 0;
  while (count < 500) {
    StitAutomaton T = testing::random_automaton(rng, params);
    TransitionSystem ts = kripke_view(T);
    Formula psi = formulas.sample(3, 2);
    ++count;
    CAPTURE(to_string(psi));
    CAPTURE(automaton_to_json(T));
    bool engine = check_existential_path(ts, ts.initial, psi).holds;
    bool oracle = testing::exists_lasso_satisfying(ts, ts.initial, psi, 8);
    CHECK(engine == oracle);
  }
}

TEST_CASE("reachability via E F matches a direct fixpoint") {
  std::mt19937_64 rng(9102);
  testing::AutomatonParams params;
  params.max_states = 6;
  for (int i = 0; i < 60; ++i) {
    StitAutomaton T = testing::random_automaton(rng, params);
    TransitionSystem ts = kripke_view(T);
    // Least fixpoint of "p or some successor already in the set".
    std::set<std::string> fix;
    for (const auto& [q, atoms] : ts.labels)
      if (atoms.count("p")) fix.insert(q);
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& [q, nxt] : ts.succ)
        for (const auto& s : nxt)
          if (fix.count(s) && fix.insert(q).second) grew = true;
    }
    CHECK(check_state(ts, parse_formula("E F p")) == fix);
  }
}

TEST_CASE("witness lassos stay valid on random systems") {
  std::mt19937_64 rng(9103);
  testing::AutomatonParams params;
  params.max_states = 4;
  testing::LtlSampler formulas(rng, {"p", "q"});
  for (int i = 0; i < 200; ++i) {
    StitAutomaton T = testing::random_automaton(rng, params);
    TransitionSystem ts = kripke_view(T);
    Formula psi = formulas.sample(3, 2);
    auto r = check_existential_path(ts, ts.initial, psi);
    if (!r.holds) continue;
    REQUIRE(r.lasso);
    REQUIRE(!r.lasso->cycle.empty());
    CAPTURE(to_string(psi));
    CAPTURE(format_lasso(*r.lasso));
    // The lasso must be a real path of the system...
    std::vector<std::string> seq = r.lasso->prefix;
    seq.insert(seq.end(), r.lasso->cycle.begin(), r.lasso->cycle.end());
    CHECK(seq.front() == ts.initial);
    for (size_t j = 0; j + 1 < seq.size(); ++j)
      CHECK(ts.succ.at(seq[j]).count(seq[j + 1]));
    CHECK(ts.succ.at(seq.back()).count(r.lasso->cycle.front()));
    // ...and its trace must satisfy the formula.
    CHECK(testing::eval_ltl_on_lasso(psi, lasso_labels(ts, r.lasso->prefix),
                                     lasso_labels(ts, r.lasso->cycle)));
  }
}

TEST_CASE("verdicts are reproducible") {
  TransitionSystem ts = toy_ts();
  for (const char* text : {"F q", "G F p", "p U q"}) {
    Formula psi = parse_formula(text);
    auto a = check_existential_path(ts, "a", psi);
    auto b = check_existential_path(ts, "a", psi);
    CHECK(a.holds == b.holds);
    if (a.lasso) {
      REQUIRE(b.lasso);
      CHECK(a.lasso->prefix == b.lasso->prefix);
      CHECK(a.lasso->cycle == b.lasso->cycle);
    }
  }
}
