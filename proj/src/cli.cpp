#include "dau/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "dau/automaton.hpp"
#include "dau/checker.hpp"
#include "dau/explicit_model.hpp"
#include "dau/fixtures.hpp"
#include "dau/formula.hpp"
#include "dau/patterns.hpp"
#include "dau/temporal.hpp"

namespace dau {

namespace {

using nlohmann::ordered_json;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

std::string fixture_list() {
  std::string out;
  for (const auto& n : fixture_names()) out += (out.empty() ? "" : ", ") + n;
  return out;
}

// A model argument names a file, a bundled fixture, or "fixture:NAME".
std::string model_text(const std::string& arg) {
  if (arg.rfind("fixture:", 0) == 0) return fixture_text(arg.substr(8));
  if (std::filesystem::exists(arg)) {
    std::ifstream in(arg);
    if (!in) throw std::runtime_error("cannot read '" + arg + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }
  for (const auto& n : fixture_names())
    if (n == arg) return fixture_text(arg);
  throw std::runtime_error("no such file or fixture '" + arg +
                           "' (fixtures: " + fixture_list() + ")");
}

bool looks_like_automaton(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  if (!j.is_object()) throw std::runtime_error("model file must hold a JSON object");
  if (j.contains("transitions") || j.contains("agent")) return true;
  if (j.contains("moments") || j.contains("agents")) return false;
  throw std::runtime_error(
      "cannot tell what kind of model this is (expected automaton keys "
      "agent/transitions or explicit-model keys agents/moments)");
}

StitAutomaton automaton_arg(const std::string& arg) {
  std::string text = model_text(arg);
  if (!looks_like_automaton(text))
    throw std::runtime_error("'" + arg +
                             "' is an explicit model; this command runs on "
                             "stit automata");
  return parse_automaton(text);
}

ExplicitStitModel explicit_arg(const std::string& arg) {
  std::string text = model_text(arg);
  if (looks_like_automaton(text))
    throw std::runtime_error("'" + arg +
                             "' is a stit automaton; oracle-eval needs an "
                             "explicit model (fixtures FIG2, CEX-NEXT, "
                             "CEX-BIG, or an unrolled tree)");
  return parse_explicit_model(text);
}

void reroot(StitAutomaton& T, const std::string& from) {
  if (from.empty()) return;
  if (!T.states.count(from)) {
    std::string states;
    for (const auto& q : T.states) states += (states.empty() ? "" : ", ") + q;
    throw std::runtime_error("unknown state '" + from + "' for --from (states: " +
                             states + ")");
  }
  T.initial = from;
}

CliResult render(const ordered_json& report, const std::string& format,
                 const std::vector<std::string>& text_lines, double elapsed_ms,
                 int exit_code) {
  if (format == "json") return {exit_code, report.dump(2) + "\n"};
  std::ostringstream out;
  for (const auto& line : text_lines) out << line << "\n";
  out << "elapsed: " << elapsed_ms << " ms\n";
  return {exit_code, out.str()};
}

CliResult render_error(const std::string& format, const std::string& message) {
  if (format == "json")
    return {2, ordered_json{{"error", message}}.dump(2) + "\n"};
  return {2, "error: " + message + "\n"};
}

std::string join(const std::set<std::string>& xs) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : ", ") + x;
  return out.empty() ? "none" : out;
}

void verdict_into(ordered_json& rep, std::vector<std::string>& lines,
                  const Verdict& v, bool explain) {
  rep["holds"] = v.holds;
  lines.push_back(std::string("verdict: ") + (v.holds ? "holds" : "fails"));
  rep["optimal_actions"] = v.optimal_actions;
  lines.push_back("optimal actions: " + join(v.optimal_actions));
  if (v.failing_action) {
    rep["failing_action"] = *v.failing_action;
    lines.push_back("failing action: " + *v.failing_action);
  }
  rep["notes"] = v.notes;
  for (const auto& n : v.notes) lines.push_back("note: " + n);
  if (explain) {
    ordered_json ivs = ordered_json::array();
    for (const auto& iv : v.intervals) {
      ivs.push_back({{"action", iv.action},
                     {"lower", iv.lower},
                     {"upper", iv.upper},
                     {"certified_error", iv.certified_error}});
      std::ostringstream line;
      line << "interval " << iv.action << ": [" << iv.lower << ", " << iv.upper
           << "] (err<=" << iv.certified_error << ")";
      lines.push_back(line.str());
    }
    rep["intervals"] = ivs;
    if (v.counterexample) {
      rep["counterexample"] = format_lasso(*v.counterexample);
      lines.push_back("counterexample: " + format_lasso(*v.counterexample));
    }
  }
}

CliResult run_validate(const std::string& model, const std::string& format) {
  Timer t;
  std::string text = model_text(model);
  bool is_automaton = looks_like_automaton(text);
  std::vector<std::string> issues;
  if (is_automaton)
    issues = validate(parse_automaton(text));
  else
    issues = validate_model(parse_explicit_model(text));

  ordered_json rep{{"command", "validate"},
                   {"input", model},
                   {"kind", is_automaton ? "automaton" : "explicit-model"},
                   {"ok", issues.empty()},
                   {"issues", issues}};
  std::vector<std::string> lines{
      std::string("kind: ") + (is_automaton ? "automaton" : "explicit-model")};
  if (issues.empty())
    lines.push_back("ok");
  else
    for (const auto& i : issues) lines.push_back("issue: " + i);
  return render(rep, format, lines, t.ms(), issues.empty() ? 0 : 1);
}

CliResult run_check(const std::string& model, const std::string& query,
                    const std::string& from, std::optional<int> tau,
                    const std::string& format, bool explain) {
  Timer t;
  StitAutomaton T = automaton_arg(model);
  reroot(T, from);
  Formula f = parse_formula(query);
  Verdict v = check_query(T, f, tau);

  ordered_json rep{{"command", "check"},
                   {"input", model},
                   {"query", to_string(f)},
                   {"from", T.initial}};
  std::vector<std::string> lines{"query: " + to_string(f),
                                 "model: " + model + " (from " + T.initial + ")"};
  verdict_into(rep, lines, v, explain);
  rep["stats"] = {{"states", T.states.size()},
                  {"transitions", T.transitions.size()}};
  return render(rep, format, lines, t.ms(), v.holds ? 0 : 1);
}

CliResult run_mission(const std::string& model, const std::string& query,
                      const std::string& from, const std::string& format,
                      bool explain) {
  Timer t;
  StitAutomaton T = automaton_arg(model);
  reroot(T, from);
  Formula f = parse_formula(query);
  Verdict v = check_mission(T, f);

  ordered_json rep{{"command", "mission"},
                   {"input", model},
                   {"query", to_string(f)},
                   {"from", T.initial}};
  std::vector<std::string> lines{"query: " + to_string(f),
                                 "model: " + model + " (from " + T.initial + ")"};
  rep["holds"] = v.holds;
  lines.push_back(std::string("verdict: ") + (v.holds ? "holds" : "fails"));
  rep["notes"] = v.notes;
  for (const auto& n : v.notes) lines.push_back("note: " + n);
  if (explain && v.counterexample) {
    rep["counterexample"] = format_lasso(*v.counterexample);
    lines.push_back("counterexample: " + format_lasso(*v.counterexample));
  }
  rep["stats"] = {{"states", T.states.size()},
                  {"transitions", T.transitions.size()}};
  return render(rep, format, lines, t.ms(), v.holds ? 0 : 1);
}

CliResult run_oracle_eval(const std::string& model, const std::string& index,
                          const std::string& query, const std::string& format) {
  Timer t;
  ExplicitStitModel M = explicit_arg(model);
  {
    auto issues = validate_model(M);
    if (!issues.empty())
      throw std::runtime_error("invalid explicit model: " + issues.front());
  }
  Index i = parse_index(M, index);
  Formula f = parse_formula(query);
  Tri value = eval3(M, i.moment, i.history, f);
  const char* shown = value == Tri::True    ? "true"
                      : value == Tri::False ? "false"
                                            : "undecided";

  ordered_json rep{{"command", "oracle-eval"},
                   {"input", model},
                   {"index", format_index(M, i)},
                   {"query", to_string(f)},
                   {"value", shown}};
  rep["stats"] = {{"moments", M.moments.size()},
                  {"histories", M.histories(0).size()},
                  {"depth", M.depth},
                  {"approximate_values", M.approximate_values}};
  std::vector<std::string> lines{"query: " + to_string(f),
                                 "index: " + format_index(M, i),
                                 std::string("value: ") + shown};
  if (value == Tri::Unknown)
    lines.push_back("note: the branch ends before the verdict is fixed; "
                    "unroll deeper for a decision");
  int code = value == Tri::True ? 0 : value == Tri::False ? 1 : 2;
  return render(rep, format, lines, t.ms(), code);
}

RandomModelParams pattern_params(unsigned long long seed) {
  RandomModelParams p;
  p.depth = seed % 4 == 3 ? 3 : 2;
  p.branching = 2 + static_cast<int>(seed % 2);
  p.agents = 1 + static_cast<int>(seed % 2);
  p.atoms = 2;
  return p;
}

CliResult run_patterns(const std::string& which, int seeds,
                       const std::string& format) {
  Timer t;
  std::vector<std::string> selected;
  if (which == "all")
    selected = pattern_ids();
  else {
    (void)pattern_is_valid_claim(which);  // throws on unknown ids
    selected = {which};
  }

  ordered_json rows = ordered_json::array();
  std::vector<std::string> lines;
  bool all_consistent = true;
  for (const auto& id : selected) {
    bool claimed_valid = pattern_is_valid_claim(id);
    bool found_cex = false;
    ordered_json row{{"pattern", id},
                     {"claim", claimed_valid ? "valid" : "refuted"}};
    std::string text = id + (claimed_valid ? " (valid):" : " (refuted):");

    ordered_json fixtures = ordered_json::array();
    for (const std::string fx : {"CEX-NEXT", "CEX-BIG"}) {
      PatternResult r = check_pattern(fixture_model(fx), id);
      ordered_json cell{{"fixture", fx}};
      if (r.status == PatternResult::Status::Counterexample) {
        found_cex = true;
        std::string at = format_index(fixture_model(fx), *r.counterexample);
        cell["counterexample"] = at;
        cell["instantiation"] = r.instantiation;
        text += " " + fx + " falls at " + at + " [" + r.instantiation + "];";
      } else {
        cell["counterexample"] = nullptr;
        text += " " + fx + " safe;";
      }
      fixtures.push_back(cell);
    }
    row["fixtures"] = fixtures;

    ordered_json random{{"seeds", seeds}};
    int gated = 0;
    bool random_hit = false;
    for (unsigned long long seed = 0; seed < static_cast<unsigned long long>(seeds);
         ++seed) {
      PatternResult r = check_pattern(random_model(pattern_params(seed), seed), id);
      if (r.status == PatternResult::Status::ConstraintViolated) ++gated;
      if (r.status != PatternResult::Status::Counterexample) continue;
      found_cex = true;
      random_hit = true;
      random["counterexample_seed"] = seed;
      random["instantiation"] = r.instantiation;
      text += " random search falls at seed " + std::to_string(seed) + ";";
      break;
    }
    if (!random_hit) {
      random["counterexample_seed"] = nullptr;
      text += " " + std::to_string(seeds) + " random models safe;";
    }
    random["constraint_violated"] = gated;
    row["random"] = random;

    bool consistent = claimed_valid ? !found_cex : found_cex;
    row["consistent"] = consistent;
    all_consistent = all_consistent && consistent;
    text += consistent ? " as documented" : " CONTRADICTS the documented claim";
    lines.push_back(text);
    rows.push_back(row);
  }

  ordered_json rep{{"command", "patterns"},
                   {"patterns", rows},
                   {"all_consistent", all_consistent}};
  return render(rep, format, lines, t.ms(), all_consistent ? 0 : 1);
}

struct CaseRow {
  std::string fixture, label, kind, from, query;
  bool expected = false;
  bool probe_trivial = false;
  bool expect_trivial = false;
};

std::vector<CaseRow> case_rows() {
  std::vector<CaseRow> rows;
  auto add = [&rows](std::string fx, std::string label, std::string kind,
                     std::string from, std::string query, bool expected,
                     bool probe = false, bool trivially = false) {
    rows.push_back({std::move(fx), std::move(label), std::move(kind),
                    std::move(from), std::move(query), expected, probe,
                    trivially});
  };
  const std::vector<std::string> reachable = {"start",     "wantEntry",
                                              "passEntry", "onHighway",
                                              "wantExit",  "reachExit",
                                              "collision"};

  add("A", "mu1", "mission", "", "E F onHighway", true);
  add("A", "mu2", "mission", "", "E F<=4 reachExit", true);
  add("A", "mu3", "mission", "", "E G !collision", true);
  for (const auto& s : reachable)
    add("A", "no-collision@" + s, "check", s, "Ob[alpha](G !collision)", false);
  for (const auto& s : reachable)
    if (s != "collision")
      add("A", "conditional-no-collision@" + s, "check", s,
          "Ob[alpha](G !collision | G<=3 !collision)", false);
  for (const auto& s : reachable)
    add("A", "no-next-collision@" + s, "check", s, "Ob[alpha](X !collision)",
        false);
  add("A", "pi1", "check", "start", "Perm[alpha](F<=4 reachExit)", true);
  add("A", "pi2", "check", "passEntry", "Perm[alpha](!dstit[alpha](g R !p))",
      true, true, true);
  add("A", "pi3", "check", "passEntry",
      "Perm[alpha](dstit[alpha](!(g R !p)))", false);

  add("B", "mu1", "mission", "", "E F onHighway", true);
  add("B", "mu2", "mission", "", "E F<=4 reachExit", true);
  add("B", "mu3", "mission", "", "E G !collision", true);
  add("B", "no-next-collision@passEntry", "check", "passEntry",
      "Ob[alpha](X !collision)", true);
  add("B", "revoked-exit-permission@onHighway", "check", "onHighway",
      "Perm[alpha](F<=1 reachExit)", false);
  add("B", "pi2", "check", "passEntry", "Perm[alpha](!dstit[alpha](g R !p))",
      false, true, false);
  add("B", "pi3", "check", "passEntry",
      "Perm[alpha](dstit[alpha](!(g R !p)))", false);

  add("B-red", "pi2", "check", "passEntry",
      "Perm[alpha](!dstit[alpha](g R !p))", true, true, false);
  add("B-red", "pi3", "check", "passEntry",
      "Perm[alpha](dstit[alpha](!(g R !p)))", true);
  add("B-red", "no-next-collision@passEntry", "check", "passEntry",
      "Ob[alpha](X !collision)", false);
  return rows;
}

CliResult run_casestudy(const std::string& fixture, const std::string& format) {
  Timer t;
  if (!fixture.empty() && fixture != "A" && fixture != "B" &&
      fixture != "B-red")
    throw std::runtime_error("unknown case-study fixture '" + fixture +
                             "' (available: A, B, B-red)");

  ordered_json rows = ordered_json::array();
  std::vector<std::string> lines;
  bool all_match = true;
  for (const CaseRow& row : case_rows()) {
    if (!fixture.empty() && row.fixture != fixture) continue;
    StitAutomaton T = fixture_automaton(row.fixture);
    reroot(T, row.from);
    Formula f = parse_formula(row.query);
    Verdict v = row.kind == "mission" ? check_mission(T, f) : check_query(T, f);

    bool trivial = false;
    if (row.probe_trivial)
      trivial =
          check_mission(T, allpaths(release(atom("g"), lnot(atom("p")))))
              .holds;
    bool match = v.holds == row.expected &&
                 (!row.probe_trivial || trivial == row.expect_trivial);
    all_match = all_match && match;

    ordered_json r{{"fixture", row.fixture},
                   {"row", row.label},
                   {"from", row.from.empty() ? T.initial : row.from},
                   {"query", row.query},
                   {"expected", row.expected ? "SAT" : "UNSAT"},
                   {"actual", v.holds ? "SAT" : "UNSAT"}};
    if (row.probe_trivial) {
      r["expected_trivial"] = row.expect_trivial;
      r["trivial"] = trivial;
    }
    r["match"] = match;
    rows.push_back(r);

    std::string line = "[" + row.fixture + "] " + row.label + ": expected " +
                       (row.expected ? "SAT" : "UNSAT") + ", got " +
                       (v.holds ? "SAT" : "UNSAT");
    if (row.probe_trivial && trivial) line += " (trivially)";
    line += match ? "  ok" : "  MISMATCH";
    lines.push_back(line);
  }
  lines.push_back(all_match ? "all rows match" : "some rows MISMATCH");

  ordered_json rep{{"command", "casestudy"},
                   {"fixture", fixture.empty() ? "all" : fixture},
                   {"rows", rows},
                   {"all_match", all_match}};
  return render(rep, format, lines, t.ms(), all_match ? 0 : 1);
}

}  // namespace

CliResult run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Deontic checks over weighted stit automata"};
  app.name("dau-mc");
  app.require_subcommand(0, 1);

  struct {
    std::string model, query, from, format = "text", index, pattern = "all",
                               fixture;
    std::optional<int> tau;
    int seeds = 100;
    bool explain = false;
  } opt;

  auto add_format = [&opt](CLI::App* sub) {
    sub->add_option("--format", opt.format, "Report format")
        ->check(CLI::IsMember({"text", "json"}));
  };

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Check a model file for well-formedness");
  validate_cmd->add_option("model", opt.model, "Model file or fixture")
      ->required();
  add_format(validate_cmd);

  CLI::App* check_cmd = app.add_subcommand(
      "check", "Decide an obligation or permission on a stit automaton");
  check_cmd->add_option("model", opt.model, "Automaton file or fixture")
      ->required();
  check_cmd->add_option("query", opt.query, "Deontic query")->required();
  check_cmd->add_option("--from", opt.from, "Start from this state");
  check_cmd->add_option("--tau", opt.tau,
                        "Conditional lookahead depth (defaults to the "
                        "condition's horizon)");
  check_cmd->add_flag("--explain", opt.explain,
                      "Include utility intervals and counterexamples");
  add_format(check_cmd);

  CLI::App* mission_cmd = app.add_subcommand(
      "mission", "Decide a temporal state formula on a stit automaton");
  mission_cmd->add_option("model", opt.model, "Automaton file or fixture")
      ->required();
  mission_cmd->add_option("query", opt.query, "State formula")->required();
  mission_cmd->add_option("--from", opt.from, "Start from this state");
  mission_cmd->add_flag("--explain", opt.explain, "Include counterexamples");
  add_format(mission_cmd);

  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle-eval", "Evaluate the full grammar at an index of an explicit model");
  oracle_cmd->add_option("model", opt.model, "Explicit-model file or fixture")
      ->required();
  oracle_cmd->add_option("index", opt.index, "Evaluation point, e.g. m/h5")
      ->required();
  oracle_cmd->add_option("query", opt.query, "Formula")->required();
  add_format(oracle_cmd);

  CLI::App* patterns_cmd = app.add_subcommand(
      "patterns", "Search propagation schemata for counterexamples");
  patterns_cmd->add_option("pattern", opt.pattern,
                           "Pattern id (P1, XREV, FFWD, FREV, P2, V1, V2, "
                           "V3, L1) or 'all'");
  patterns_cmd->add_option("--seeds", opt.seeds, "Random models to search")
      ->check(CLI::NonNegativeNumber);
  add_format(patterns_cmd);

  CLI::App* casestudy_cmd = app.add_subcommand(
      "casestudy", "Replay the highway verdict table against the bundled fixtures");
  casestudy_cmd->add_option("--fixture", opt.fixture,
                            "Restrict to one fixture (A, B, B-red)");
  add_format(casestudy_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    return {0, app.help()};
  } catch (const CLI::ParseError& e) {
    return render_error("text", e.what());
  }

  try {
    if (validate_cmd->parsed()) return run_validate(opt.model, opt.format);
    if (check_cmd->parsed())
      return run_check(opt.model, opt.query, opt.from, opt.tau, opt.format,
                       opt.explain);
    if (mission_cmd->parsed())
      return run_mission(opt.model, opt.query, opt.from, opt.format,
                         opt.explain);
    if (oracle_cmd->parsed())
      return run_oracle_eval(opt.model, opt.index, opt.query, opt.format);
    if (patterns_cmd->parsed())
      return run_patterns(opt.pattern, opt.seeds, opt.format);
    if (casestudy_cmd->parsed())
      return run_casestudy(opt.fixture, opt.format);
    return {0, app.help()};
  } catch (const std::exception& e) {
    return render_error(opt.format, e.what());
  }
}

}  // namespace dau
