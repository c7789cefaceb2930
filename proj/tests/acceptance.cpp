// Release gate: one line per criterion, nonzero exit if any fails.

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dau/automaton.hpp"
#include "dau/checker.hpp"
#include "dau/cli.hpp"
#include "dau/explicit_model.hpp"
#include "dau/fixtures.hpp"
#include "dau/formula.hpp"
#include "dau/patterns.hpp"
#include "dau/temporal.hpp"
#include "dau/utility.hpp"
#include "support/oracles.hpp"
#include "support/random_models.hpp"

using namespace dau;
using nlohmann::ordered_json;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& desc,
            const std::string& detail = "") {
  std::string line = "criterion " + std::to_string(n) + ": " +
                     (ok ? "pass" : "FAIL") + " - " + desc;
  if (!ok && !detail.empty()) line += " (" + detail + ")";
  std::puts(line.c_str());
  if (!ok) ++failures;
}

// ---------------------------------------------------------------- criterion 1

void criterion_case_study() {
  CliResult r = run_cli({"casestudy", "--format", "json"});
  std::string detail;
  bool ok = r.exit_code == 0;
  if (!ok) detail = "exit code " + std::to_string(r.exit_code);
  if (ok) {
    ordered_json j = ordered_json::parse(r.output);
    ok = j["all_match"] == true && j["rows"].size() == 36;
    for (const auto& row : j["rows"]) {
      if (row["match"] == true) continue;
      ok = false;
      detail = "[" + row["fixture"].get<std::string>() + "] " +
               row["row"].get<std::string>() + " expected " +
               row["expected"].get<std::string>() + ", got " +
               row["actual"].get<std::string>();
      break;
    }
    if (ok && j["rows"].size() != 36)
      detail = "row count " + std::to_string(j["rows"].size());
  }
  report(1, ok, "highway case study: all 36 verdict rows match the documented outcomes",
         detail);
}

// ---------------------------------------------------------------- criterion 2

void criterion_discounted_extremes() {
  bool ok = true;
  std::string detail;
  auto expect = [&](double got, double want, const char* what) {
    if (std::fabs(got - want) <= 1e-8) return;
    ok = false;
    if (detail.empty())
      detail = std::string(what) + " = " + std::to_string(got) +
               ", expected " + std::to_string(want);
  };

  StitAutomaton loop;
  loop.agent = "alpha";
  loop.accumulation = AccumulationPolicy::discounted(0.5, 1e-9);
  loop.initial = "c";
  loop.states = {"c"};
  loop.labels["c"] = {};
  loop.transitions = {{"c", "K", "c", 1.0}};
  DiscountedExtremes e = extremal_discounted(loop);
  expect(e.lower, 2.0, "unit self-loop lower");
  expect(e.upper, 2.0, "unit self-loop upper");

  StitAutomaton toy = fixture_automaton("TOY");
  DiscountedExtremes k2 = extremal_discounted(prime(toy, "K2"));
  expect(k2.lower, 5.0, "TOY'K2 lower");
  expect(k2.upper, 5.0, "TOY'K2 upper");
  DiscountedExtremes k1 = extremal_discounted(prime(toy, "K1"));
  expect(k1.lower, 2.0, "TOY'K1 lower");
  expect(k1.upper, 3.5, "TOY'K1 upper");

  std::mt19937_64 rng(220801);
  testing::AutomatonParams params;
  params.max_states = 5;
  params.integer_weights = false;
  params.accumulation = AccumulationPolicy::discounted(0.9, 1e-9);
  int violations = 0;
  for (int i = 0; i < 200; ++i) {
    StitAutomaton T = testing::random_automaton(rng, params);
    DiscountedExtremes x = extremal_discounted(T);
    auto [dlo, dhi] = testing::discounted_depth_bounds(T, 40);
    double wmax = 0.0;
    for (const auto& t : T.transitions)
      wmax = std::max(wmax, std::fabs(t.weight));
    double slack = std::pow(0.9, 40) * wmax / 0.1 + 1e-9;
    if (std::fabs(x.lower - dlo) > slack || std::fabs(x.upper - dhi) > slack)
      ++violations;
  }
  if (violations > 0) {
    ok = false;
    detail = std::to_string(violations) + " tail-bound violations";
  }
  report(2, ok,
         "discounted extremes match closed forms to 1e-8 and a depth-40 "
         "tail-bound oracle on 200 random automata",
         detail);
}

// ---------------------------------------------------------------- criterion 3

// Independent oracle: walk every simple path from the initial state and close
// it over each edge re-entering the path; the execution value is the minimum
// weight on the walked edge list.
std::pair<double, double> enumerated_min_extremes(const StitAutomaton& T) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::vector<std::string> path{T.initial};
  std::vector<double> weights;
  std::set<std::string> on_path{T.initial};

  struct Rec {
    const StitAutomaton& T;
    std::vector<std::string>& path;
    std::vector<double>& weights;
    std::set<std::string>& on_path;
    double& lo;
    double& hi;

    void run() {
      for (const Transition* t : T.out(path.back())) {
        if (on_path.count(t->to)) {
          double v = t->weight;
          for (double w : weights) v = std::min(v, w);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
          continue;
        }
        path.push_back(t->to);
        weights.push_back(t->weight);
        on_path.insert(t->to);
        run();
        on_path.erase(t->to);
        weights.pop_back();
        path.pop_back();
      }
    }
  } rec{T, path, weights, on_path, lo, hi};
  rec.run();
  return {lo, hi};
}

void criterion_min_extremes() {
  std::mt19937_64 rng(220802);
  testing::AutomatonParams params;
  params.max_states = 8;
  params.accumulation = AccumulationPolicy::min();
  int gaps = 0;
  for (int i = 0; i < 200; ++i) {
    StitAutomaton T = testing::random_automaton(rng, params);
    auto engine = extremal_min(T);
    auto oracle = enumerated_min_extremes(T);
    if (engine != oracle) ++gaps;
  }
  report(3, gaps == 0,
         "min-accumulation extremes equal exhaustive simple-execution "
         "enumeration on 200 random automata",
         gaps ? std::to_string(gaps) + " mismatches" : "");
}

// ---------------------------------------------------------------- criterion 4

void criterion_checker_vs_oracle() {
  std::mt19937_64 rng(220803);
  int verdict_gaps = 0, optimal_gaps = 0, invalid = 0;
  for (int trial = 0; trial < 200; ++trial) {
    StitAutomaton T = testing::absorbing_automaton(rng, trial % 2 == 0);
    if (!validate(T).empty()) {
      ++invalid;
      continue;
    }
    Formula body = testing::finite_horizon_body(rng, 4, 4);
    Verdict v = check_ought(T, body);
    ExplicitStitModel M = unroll(T, 6, ValueMode::ExactIfAbsorbing);
    Index root{0, M.histories(0).front()};
    if (v.holds != eval(M, root, ought("alpha", body))) ++verdict_gaps;
    if (v.optimal_actions != optimal_actions(M, "alpha", 0)) ++optimal_gaps;
  }
  bool ok = verdict_gaps == 0 && optimal_gaps == 0 && invalid == 0;
  std::string detail;
  if (!ok)
    detail = std::to_string(verdict_gaps) + " verdict / " +
             std::to_string(optimal_gaps) + " optimal-set gaps, " +
             std::to_string(invalid) + " invalid automata";
  report(4, ok,
         "dominance checker agrees with the unrolled-tree oracle on 200 "
         "absorbing automata (verdicts and optimal sets)",
         detail);
}

// ---------------------------------------------------------------- criterion 5

void criterion_patterns() {
  const std::vector<std::string> invalid = {"P1", "XREV", "FFWD", "FREV", "P2"};
  const std::vector<std::string> valid = {"V1", "V2", "V3", "L1"};
  bool ok = true;
  std::string detail;
  auto fail = [&](const std::string& msg) {
    ok = false;
    if (detail.empty()) detail = msg;
  };

  ExplicitStitModel next_fx = fixture_model("CEX-NEXT");
  ExplicitStitModel big_fx = fixture_model("CEX-BIG");

  for (const auto& id : invalid) {
    bool on_fixture =
        check_pattern(next_fx, id).status ==
            PatternResult::Status::Counterexample ||
        check_pattern(big_fx, id).status == PatternResult::Status::Counterexample;
    if (!on_fixture) fail(id + " survives both counterexample fixtures");
    bool on_random = false;
    for (unsigned long long seed = 0; seed < 1000 && !on_random; ++seed) {
      RandomModelParams p;
      p.depth = seed % 4 == 3 ? 3 : 2;
      p.branching = 2 + static_cast<int>(seed % 2);
      p.agents = 1 + static_cast<int>(seed % 2);
      p.atoms = 2;
      on_random = check_pattern(random_model(p, seed), id).status ==
                  PatternResult::Status::Counterexample;
    }
    if (!on_random) fail(id + " survives 1000 random models");
  }

  for (const auto& id : valid) {
    if (check_pattern(next_fx, id).status ==
            PatternResult::Status::Counterexample ||
        check_pattern(big_fx, id).status ==
            PatternResult::Status::Counterexample)
      fail(id + " falls on a counterexample fixture");
    for (unsigned long long seed = 0; seed < 1000; ++seed) {
      RandomModelParams p;
      p.depth = seed % 4 == 3 ? 3 : 2;
      p.branching = 2 + static_cast<int>(seed % 2);
      p.agents = 1 + static_cast<int>(seed % 2);
      p.atoms = 2;
      if (check_pattern(random_model(p, seed), id).status ==
          PatternResult::Status::Counterexample) {
        fail(id + " falls at seed " + std::to_string(seed));
        break;
      }
    }
  }
  report(5, ok,
         "the five refuted propagation schemata fall on fixtures and under "
         "random search; the four repaired ones survive 1000 seeds each",
         detail);
}

// ---------------------------------------------------------------- criterion 6

void criterion_semantic_laws() {
  int violations = 0;
  for (unsigned long long seed = 0; seed < 1000; ++seed) {
    RandomModelParams p;
    p.depth = seed % 3 == 2 ? 3 : 2;
    p.branching = 3;
    p.agents = 1 + static_cast<int>(seed % 2);
    p.atoms = 2;
    ExplicitStitModel M = random_model(p, seed);
    std::mt19937_64 rng(seed * 2654435761ULL + 0xace5);
    testing::LtlSampler formulas(rng, {"p", "q"});
    Formula A = formulas.sample(2, 1);
    Formula B = formulas.sample(2, 1);
    Formula C = formulas.sample(1, 1);
    const std::string& ag = M.agents[seed % M.agents.size()];

    for (int m = 0; m < static_cast<int>(M.moments.size()); ++m) {
      for (int h : M.histories(m)) {
        if (eval3(M, m, h, perm(ag, A)) !=
            not3(eval3(M, m, h, ought(ag, lnot(A)))))
          ++violations;
        if (eval3(M, m, h, cond_perm(ag, A, C)) !=
            not3(eval3(M, m, h, cond_ought(ag, lnot(A), C))))
          ++violations;
        if (eval3(M, m, h, expath(A)) !=
            not3(eval3(M, m, h, allpaths(lnot(A)))))
          ++violations;
        if (eval3(M, m, h, cstit(ag, A)) == Tri::True &&
            eval3(M, m, h, A) != Tri::True)
          ++violations;
        if (eval3(M, m, h, dstit(ag, A)) == Tri::True) {
          if (eval3(M, m, h, cstit(ag, A)) != Tri::True) ++violations;
          if (eval3(M, m, h, allpaths(A)) != Tri::False) ++violations;
        }
        if (eval3(M, m, h, ought(ag, A)) == Tri::True &&
            eval3(M, m, h, perm(ag, A)) != Tri::True)
          ++violations;
        if (eval3(M, m, h, ought(ag, lor(falsef(), B))) !=
            eval3(M, m, h, ought(ag, B)))
          ++violations;
        if (eval3(M, m, h, ought(ag, lor(A, B))) == Tri::True &&
            eval3(M, m, h, allpaths(lnot(A))) == Tri::True &&
            eval3(M, m, h, ought(ag, B)) != Tri::True)
          ++violations;
      }
    }
  }
  report(6, violations == 0,
         "dualities, agency laws and the obligation-disjunction rule hold at "
         "every index of 1000 random explicit models",
         violations ? std::to_string(violations) + " violations" : "");
}

// ---------------------------------------------------------------- criterion 7

void criterion_temporal() {
  std::mt19937_64 rng(220807);
  testing::AutomatonParams params;
  params.max_states = 3;
  testing::LtlSampler formulas(rng, {"p", "q"});
  int duality_gaps = 0, oracle_gaps = 0;
  for (int i = 0; i < 500; ++i) {
    StitAutomaton T = testing::random_automaton(rng, params);
    TransitionSystem ts = kripke_view(T);
    Formula psi = formulas.sample(3, 2);
    bool uni = check_universal_path(ts, ts.initial, psi).holds;
    bool ex_neg = check_existential_path(ts, ts.initial, negate(psi)).holds;
    if (uni != !ex_neg) ++duality_gaps;
    bool engine = check_existential_path(ts, ts.initial, psi).holds;
    bool oracle = testing::exists_lasso_satisfying(ts, ts.initial, psi, 8);
    if (engine != oracle) ++oracle_gaps;
  }
  bool ok = duality_gaps == 0 && oracle_gaps == 0;
  report(7, ok,
         "path-quantifier duality and lasso-enumeration agreement on 500 "
         "random system/formula pairs",
         ok ? "" : std::to_string(duality_gaps) + " duality / " +
                   std::to_string(oracle_gaps) + " oracle gaps");
}

// ---------------------------------------------------------------- criterion 8

void criterion_reference_tree() {
  ExplicitStitModel M = fixture_model("FIG2");
  bool ok = true;
  std::string detail;
  auto expect = [&](bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    if (detail.empty()) detail = what;
  };

  auto leaf = [&](const std::string& name) {
    return parse_index(M, name + "/" + name).history;
  };
  std::set<int> want;
  for (const char* h : {"h1", "h2", "h3", "h5", "h6"}) want.insert(leaf(h));
  Formula goal = eventually(atom("goalA"));
  expect(proposition(M, 0, goal) == want,
         "membership of the eventually-goal proposition");

  expect(eval3(M, 0, leaf("h5"), cstit("alpha", goal)) == Tri::True,
         "cstit at m/h5");
  expect(eval3(M, 0, leaf("h1"), cstit("alpha", goal)) == Tri::False,
         "cstit at m/h1");
  expect(eval3(M, 0, leaf("h5"), dstit("alpha", goal)) == Tri::True,
         "dstit at m/h5");

  expect(optimal_actions(M, "alpha", 0) == std::set<std::string>{"K2"},
         "optimal set at the root");
  int mp = parse_index(M, "mp/h3").moment;
  expect(optimal_actions(M, "alpha", mp) == std::set<std::string>{"K4", "K5"},
         "optimal set at the deliberation moment");
  report(8, ok,
         "the two-agent reference tree reproduces its documented membership, "
         "agency and optimality judgments",
         detail);
}

}  // namespace

int main() {
  criterion_case_study();
  criterion_discounted_extremes();
  criterion_min_extremes();
  criterion_checker_vs_oracle();
  criterion_patterns();
  criterion_semantic_laws();
  criterion_temporal();
  criterion_reference_tree();
  if (failures == 0) {
    std::puts("all criteria pass");
    return 0;
  }
  std::printf("%d criterion(s) FAILED\n", failures);
  return 1;
}
