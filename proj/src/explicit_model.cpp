#include "dau/explicit_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace dau {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& msg) { throw std::runtime_error(msg); }

}  // namespace

int ExplicitStitModel::moment_depth(int m) const {
  int d = 0;
  while (moments[static_cast<size_t>(m)].parent >= 0) {
    m = moments[static_cast<size_t>(m)].parent;
    ++d;
  }
  return d;
}

std::vector<int> ExplicitStitModel::histories(int m) const {
  std::vector<int> out;
  std::vector<int> stack{m};
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    const auto& kids = moments[static_cast<size_t>(q)].children;
    if (kids.empty()) {
      out.push_back(q);
    } else {
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool ExplicitStitModel::passes_through(int h, int m) const {
  for (int q = h; q >= 0; q = moments[static_cast<size_t>(q)].parent)
    if (q == m) return true;
  return false;
}

int ExplicitStitModel::child_toward(int m, int h) const {
  int prev = h;
  for (int q = moments[static_cast<size_t>(h)].parent; q >= 0;
       prev = q, q = moments[static_cast<size_t>(q)].parent)
    if (q == m) return prev;
  throw std::invalid_argument("history " + moments[static_cast<size_t>(h)].name +
                              " does not pass through moment " +
                              moments[static_cast<size_t>(m)].name);
}

std::map<std::string, std::set<int>> ExplicitStitModel::cells(const std::string& agent,
                                                              int m) const {
  if (!std::binary_search(agents.begin(), agents.end(), agent))
    bad("unknown agent '" + agent + "'");
  if (is_leaf(m)) return {{"", {m}}};
  auto ait = choice.find(agent);
  if (ait == choice.end() || !ait->second.count(m))
    bad("no choice for agent " + agent + " at moment " +
        moments[static_cast<size_t>(m)].name);
  std::map<std::string, std::set<int>> out;
  for (const auto& [name, kids] : ait->second.at(m)) {
    std::set<int>& cell = out[name];
    for (int c : kids)
      for (int leaf : histories(c)) cell.insert(leaf);
  }
  return out;
}

std::string ExplicitStitModel::cell_of(const std::string& agent, int m, int h) const {
  if (is_leaf(m)) return "";
  int c = child_toward(m, h);
  for (const auto& [name, kids] : choice.at(agent).at(m))
    if (kids.count(c)) return name;
  bad("history " + moments[static_cast<size_t>(h)].name +
      " is outside every action of " + agent + " at " +
      moments[static_cast<size_t>(m)].name);
}

Index parse_index(const ExplicitStitModel& M, const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) bad("index '" + text + "' is not of the form m/h");
  std::string ms = text.substr(0, slash), hs = text.substr(slash + 1);
  auto mi = M.id_of.find(ms);
  auto hi = M.id_of.find(hs);
  if (mi == M.id_of.end()) bad("unknown moment '" + ms + "'");
  if (hi == M.id_of.end()) bad("unknown history '" + hs + "'");
  if (!M.is_leaf(hi->second)) bad("'" + hs + "' is not a history (leaf)");
  if (!M.passes_through(hi->second, mi->second))
    bad("history " + hs + " does not pass through " + ms);
  return {mi->second, hi->second};
}

std::string format_index(const ExplicitStitModel& M, const Index& i) {
  return M.moments[static_cast<size_t>(i.moment)].name + "/" +
         M.moments[static_cast<size_t>(i.history)].name;
}

std::vector<std::string> validate_model(const ExplicitStitModel& M) {
  std::vector<std::string> out;
  if (M.moments.empty()) return {"model has no moments"};
  if (M.moments[0].parent != -1) out.push_back("root moment has a parent");
  for (size_t i = 1; i < M.moments.size(); ++i) {
    int p = M.moments[i].parent;
    if (p < 0 || p >= static_cast<int>(i)) {
      out.push_back("moment " + M.moments[i].name + " has a bad parent");
      return out;
    }
  }
  for (size_t i = 0; i < M.moments.size(); ++i) {
    std::vector<int> expected;
    for (size_t j = 0; j < M.moments.size(); ++j)
      if (M.moments[j].parent == static_cast<int>(i)) expected.push_back(static_cast<int>(j));
    if (expected != M.moments[i].children)
      out.push_back("inconsistent parent/child links at " + M.moments[i].name);
  }
  if (!out.empty()) return out;

  for (int leaf : M.histories(0))
    if (M.moment_depth(leaf) != M.depth)
      out.push_back("leaf " + M.moments[static_cast<size_t>(leaf)].name + " at depth " +
                    std::to_string(M.moment_depth(leaf)) + ", expected " +
                    std::to_string(M.depth));
  if (M.agents.empty()) out.push_back("no agents declared");

  for (const auto& agent : M.agents) {
    auto ait = M.choice.find(agent);
    for (size_t m = 0; m < M.moments.size(); ++m) {
      const auto& kids = M.moments[m].children;
      bool declared = ait != M.choice.end() && ait->second.count(static_cast<int>(m));
      if (kids.empty()) {
        if (declared)
          out.push_back("choice declared at leaf " + M.moments[m].name + " for agent " +
                        agent);
        continue;
      }
      if (!declared) {
        out.push_back("no choice for agent " + agent + " at moment " + M.moments[m].name);
        continue;
      }
      std::set<int> seen;
      bool overlap = false;
      for (const auto& [name, group] : ait->second.at(static_cast<int>(m))) {
        if (group.empty())
          out.push_back("empty action " + name + " for agent " + agent + " at moment " +
                        M.moments[m].name);
        for (int c : group) {
          if (!std::count(kids.begin(), kids.end(), c))
            out.push_back("action " + name + " at " + M.moments[m].name +
                          " names a non-child");
          if (!seen.insert(c).second) overlap = true;
        }
      }
      if (overlap)
        out.push_back("overlapping actions at " + M.moments[m].name + " for agent " +
                      agent);
      if (seen.size() != kids.size() && !overlap)
        out.push_back("coverage violation at " + M.moments[m].name + " for agent " +
                      agent);
    }
  }
  if (!out.empty()) return out;

  for (size_t m = 0; m < M.moments.size(); ++m) {
    if (M.moments[m].children.empty()) continue;
    std::vector<std::set<int>> combos{
        std::set<int>(M.moments[m].children.begin(), M.moments[m].children.end())};
    for (const auto& agent : M.agents) {
      std::vector<std::set<int>> next;
      for (const auto& base : combos)
        for (const auto& [name, group] : M.choice.at(agent).at(static_cast<int>(m))) {
          std::set<int> inter;
          for (int c : group)
            if (base.count(c)) inter.insert(c);
          next.push_back(std::move(inter));
        }
      combos = std::move(next);
    }
    for (const auto& combo : combos)
      if (combo.empty()) {
        out.push_back("independence violation at moment " + M.moments[m].name);
        break;
      }
  }

  for (int leaf : M.histories(0)) {
    auto it = M.values.find(leaf);
    if (it == M.values.end())
      out.push_back("missing value for history " + M.moments[static_cast<size_t>(leaf)].name);
    else if (!std::isfinite(it->second))
      out.push_back("non-finite value for history " +
                    M.moments[static_cast<size_t>(leaf)].name);
  }
  for (const auto& [id, v] : M.values)
    if (!M.is_leaf(id)) out.push_back("value for non-history " +
                                      M.moments[static_cast<size_t>(id)].name);
  return out;
}

Tri not3(Tri a) {
  if (a == Tri::Unknown) return Tri::Unknown;
  return a == Tri::True ? Tri::False : Tri::True;
}

Tri and3(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::True;
}

Tri or3(Tri a, Tri b) {
  if (a == Tri::True || b == Tri::True) return Tri::True;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::False;
}

namespace {

Tri from_bool(bool b) { return b ? Tri::True : Tri::False; }

// Sure-thing dominance helpers over explicit history sets.

double value_of(const ExplicitStitModel& M, int h) {
  auto it = M.values.find(h);
  if (it == M.values.end())
    bad("missing value for history " + M.moments[static_cast<size_t>(h)].name);
  return it->second;
}

bool set_le(const ExplicitStitModel& M, const std::set<int>& Z, const std::set<int>& Y) {
  for (int a : Z)
    for (int b : Y)
      if (value_of(M, a) > value_of(M, b)) return false;
  return true;
}

std::set<int> intersect(const std::set<int>& a, const std::set<int>& b) {
  std::set<int> out;
  for (int x : a)
    if (b.count(x)) out.insert(x);
  return out;
}

// Products of the other agents' actions at m (one full-set background when
// there is no other agent).
std::vector<std::set<int>> backgrounds(const ExplicitStitModel& M,
                                       const std::string& agent, int m) {
  auto hs = M.histories(m);
  std::vector<std::set<int>> combos{std::set<int>(hs.begin(), hs.end())};
  for (const auto& other : M.agents) {
    if (other == agent) continue;
    std::vector<std::set<int>> next;
    for (const auto& base : combos)
      for (const auto& [name, cell] : M.cells(other, m))
        next.push_back(intersect(base, cell));
    combos = std::move(next);
  }
  return combos;
}

std::set<std::string> undominated_cells(
    const ExplicitStitModel& M, const std::map<std::string, std::set<int>>& cells,
    const std::vector<std::set<int>>& states, const std::set<int>* restrict_to) {
  auto clipped = [&](const std::set<int>& K, const std::set<int>& S) {
    std::set<int> out = intersect(K, S);
    return restrict_to ? intersect(out, *restrict_to) : out;
  };
  auto le = [&](const std::set<int>& K, const std::set<int>& Kp) {
    for (const auto& S : states)
      if (!set_le(M, clipped(K, S), clipped(Kp, S))) return false;
    return true;
  };
  std::set<std::string> out;
  for (const auto& [name, K] : cells) {
    bool dominated = false;
    for (const auto& [name2, Kp] : cells) {
      if (name2 == name) continue;
      if (le(K, Kp) && !le(Kp, K)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.insert(name);
  }
  return out;
}

std::map<std::string, std::set<int>> optimal_cells(const ExplicitStitModel& M,
                                                   const std::string& agent, int m) {
  auto cs = M.cells(agent, m);
  auto opt = undominated_cells(M, cs, backgrounds(M, agent, m), nullptr);
  std::map<std::string, std::set<int>> out;
  for (const auto& name : opt) out[name] = cs.at(name);
  return out;
}

}  // namespace

std::set<std::string> optimal_actions(const ExplicitStitModel& M,
                                      const std::string& agent, int m) {
  if (M.is_leaf(m))
    throw std::invalid_argument("optimal_actions at leaf " +
                                M.moments[static_cast<size_t>(m)].name);
  auto cells = optimal_cells(M, agent, m);
  std::set<std::string> out;
  for (const auto& [name, _] : cells) out.insert(name);
  return out;
}

std::set<std::string> conditional_optimal(const ExplicitStitModel& M,
                                          const std::string& agent, int m,
                                          const std::set<int>& X) {
  auto cs = M.cells(agent, m);
  std::map<std::string, std::set<int>> meeting;
  for (const auto& [name, K] : cs)
    if (!intersect(K, X).empty()) meeting[name] = K;
  if (meeting.empty()) return {};
  return undominated_cells(M, meeting, backgrounds(M, agent, m), &X);
}

namespace {

struct Ev {
  const ExplicitStitModel& M;

  std::vector<int> rest(int m, int h) const {
    std::vector<int> path;
    std::vector<int> up;
    for (int q = h; q != m; q = M.moments[static_cast<size_t>(q)].parent) up.push_back(q);
    path.push_back(m);
    for (auto it = up.rbegin(); it != up.rend(); ++it) path.push_back(*it);
    return path;
  }

  Tri all_histories(int m, const Formula& f) const {
    Tri acc = Tri::True;
    for (int h : M.histories(m)) acc = and3(acc, go(m, h, f));
    return acc;
  }

  Tri ought(int m, const std::string& agent, const Formula& body) const {
    Tri acc = Tri::True;
    for (const auto& [name, K] : optimal_cells(M, agent, m))
      for (int h : K) acc = and3(acc, go(m, h, body));
    return acc;
  }

  Tri cond_ought(int m, const std::string& agent, const Formula& body,
                 const Formula& cond) const {
    std::set<int> X;
    for (int h : M.histories(m)) {
      Tri c = go(m, h, cond);
      if (c == Tri::Unknown) return Tri::Unknown;
      if (c == Tri::True) X.insert(h);
    }
    auto opt = conditional_optimal(M, agent, m, X);
    auto cs = M.cells(agent, m);
    Tri acc = Tri::True;
    for (const auto& name : opt)
      for (int h : cs.at(name)) acc = and3(acc, go(m, h, body));
    return acc;
  }

  Tri go(int m, int h, const Formula& f) const {
    switch (f->op) {
      case Op::Atom:
        return from_bool(M.moments[static_cast<size_t>(m)].atoms.count(f->name) > 0);
      case Op::True:
        return Tri::True;
      case Op::False:
        return Tri::False;
      case Op::Not:
        return not3(go(m, h, f->kids[0]));
      case Op::And:
        return and3(go(m, h, f->kids[0]), go(m, h, f->kids[1]));
      case Op::Or:
        return or3(go(m, h, f->kids[0]), go(m, h, f->kids[1]));
      case Op::Implies:
        return or3(not3(go(m, h, f->kids[0])), go(m, h, f->kids[1]));
      case Op::AllPaths:
        return all_histories(m, f->kids[0]);
      case Op::ExistsPath:
        return not3(all_histories(m, lnot(f->kids[0])));
      case Op::Next:
      case Op::DauNext: {
        if (M.is_leaf(m)) return Tri::Unknown;
        return go(M.child_toward(m, h), h, f->kids[0]);
      }
      case Op::Eventually: {
        auto path = rest(m, h);
        Tri acc = Tri::False;
        for (auto it = path.rbegin(); it != path.rend(); ++it)
          acc = or3(go(*it, h, f->kids[0]), acc);
        return acc;
      }
      case Op::Always: {
        auto path = rest(m, h);
        Tri acc = Tri::True;
        for (auto it = path.rbegin(); it != path.rend(); ++it)
          acc = and3(go(*it, h, f->kids[0]), acc);
        return acc;
      }
      case Op::Until: {
        auto path = rest(m, h);
        Tri acc = Tri::False;
        for (auto it = path.rbegin(); it != path.rend(); ++it)
          acc = or3(go(*it, h, f->kids[1]), and3(go(*it, h, f->kids[0]), acc));
        return acc;
      }
      case Op::Release: {
        auto path = rest(m, h);
        Tri acc = Tri::True;
        for (auto it = path.rbegin(); it != path.rend(); ++it)
          acc = and3(go(*it, h, f->kids[1]), or3(go(*it, h, f->kids[0]), acc));
        return acc;
      }
      case Op::BoundedEventually: {
        auto path = rest(m, h);
        Tri acc = Tri::False;
        for (size_t i = 0; i < path.size() && i <= static_cast<size_t>(f->bound); ++i)
          acc = or3(acc, go(path[i], h, f->kids[0]));
        if (static_cast<size_t>(f->bound) >= path.size()) acc = or3(acc, Tri::Unknown);
        return acc;
      }
      case Op::BoundedAlways: {
        auto path = rest(m, h);
        Tri acc = Tri::True;
        for (size_t i = 0; i < path.size() && i <= static_cast<size_t>(f->bound); ++i)
          acc = and3(acc, go(path[i], h, f->kids[0]));
        if (static_cast<size_t>(f->bound) >= path.size()) acc = and3(acc, Tri::Unknown);
        return acc;
      }
      case Op::Cstit: {
        auto cs = M.cells(f->name, m);
        const auto& mine = cs.at(M.cell_of(f->name, m, h));
        Tri acc = Tri::True;
        for (int hp : mine) acc = and3(acc, go(m, hp, f->kids[0]));
        return acc;
      }
      case Op::Dstit: {
        auto cs = M.cells(f->name, m);
        const auto& mine = cs.at(M.cell_of(f->name, m, h));
        Tri inside = Tri::True;
        for (int hp : mine) inside = and3(inside, go(m, hp, f->kids[0]));
        return and3(inside, not3(all_histories(m, f->kids[0])));
      }
      case Op::Ought:
        return ought(m, f->name, f->kids[0]);
      case Op::Perm:
        return not3(ought(m, f->name, lnot(f->kids[0])));
      case Op::CondOught:
        return cond_ought(m, f->name, f->kids[0], f->kids[1]);
      case Op::CondPerm:
        return not3(cond_ought(m, f->name, lnot(f->kids[0]), f->kids[1]));
      case Op::TookOptimal: {
        if (M.is_leaf(m)) return Tri::True;
        auto opt = optimal_actions(M, f->name, m);
        return from_bool(opt.count(M.cell_of(f->name, m, h)) > 0);
      }
    }
    throw std::logic_error("unreachable");
  }
};

}  // namespace

Tri eval3(const ExplicitStitModel& M, int m, int h, const Formula& f) {
  return Ev{M}.go(m, h, f);
}

bool eval(const ExplicitStitModel& M, const Index& i, const Formula& f) {
  Tri r = eval3(M, i.moment, i.history, f);
  if (r == Tri::Unknown)
    bad("'" + to_string(f) + "' is undecided at depth " + std::to_string(M.depth) +
        " from " + format_index(M, i));
  return r == Tri::True;
}

std::set<int> proposition(const ExplicitStitModel& M, int m, const Formula& f) {
  std::set<int> out;
  for (int h : M.histories(m)) {
    Tri r = eval3(M, m, h, f);
    if (r == Tri::Unknown)
      bad("'" + to_string(f) + "' is undecided at depth " + std::to_string(M.depth) +
          " from " + format_index(M, {m, h}));
    if (r == Tri::True) out.insert(h);
  }
  return out;
}

ExplicitStitModel unroll(const StitAutomaton& T, int d, ValueMode mode) {
  if (d < 1) throw std::invalid_argument("unroll depth must be positive");
  {
    auto diags = validate(T);
    if (!diags.empty()) throw std::invalid_argument("invalid automaton: " + diags[0]);
  }
  ExplicitStitModel M;
  M.agents = {T.agent};
  M.depth = d;
  M.approximate_values = mode == ValueMode::PartialWithBounds;
  bool discounted = T.accumulation.kind == AccumulationPolicy::Kind::Discounted;
  double gamma = T.accumulation.gamma;

  struct Item {
    int id;
    std::string state;
    int depth;
    double acc;  // discounted prefix sum, or running min
  };
  M.moments.push_back({T.initial, -1, {}, T.atoms_of(T.initial)});
  M.id_of[T.initial] = 0;
  std::vector<Item> stack{
      {0, T.initial, 0,
       discounted ? 0.0 : std::numeric_limits<double>::infinity()}};
  while (!stack.empty()) {
    Item cur = stack.back();
    stack.pop_back();
    if (cur.depth == d) {
      const std::string& q = cur.state;
      if (mode == ValueMode::ExactIfAbsorbing) {
        auto outs = T.out(q);
        bool absorbing = outs.size() == 1 && outs[0]->to == q;
        if (!absorbing)
          bad("state " + q + " at the depth-" + std::to_string(d) +
              " frontier is not absorbing");
        if (discounted && outs[0]->weight != 0.0)
          bad("frontier state " + q + " is absorbing with nonzero weight");
        M.values[cur.id] = discounted ? cur.acc : std::min(cur.acc, outs[0]->weight);
      } else {
        M.values[cur.id] = cur.acc;
      }
      continue;
    }
    std::string name = M.moments[static_cast<size_t>(cur.id)].name;
    std::vector<Item> born;
    for (const Transition* t : T.out(cur.state)) {
      int id = static_cast<int>(M.moments.size());
      std::string child_name = name + "-" + t->to;
      M.moments.push_back({child_name, cur.id, {}, T.atoms_of(t->to)});
      M.id_of[child_name] = id;
      M.moments[static_cast<size_t>(cur.id)].children.push_back(id);
      M.choice[T.agent][cur.id][t->action].insert(id);
      double acc = discounted ? cur.acc + std::pow(gamma, cur.depth) * t->weight
                              : std::min(cur.acc, t->weight);
      born.push_back({id, t->to, cur.depth + 1, acc});
    }
    for (auto it = born.rbegin(); it != born.rend(); ++it) stack.push_back(*it);
  }
  return M;
}

ExplicitStitModel random_model(const RandomModelParams& params,
                               unsigned long long seed) {
  if (params.depth < 1 || params.branching < 1 || params.agents < 1 ||
      params.atoms < 0 || params.value_hi < params.value_lo)
    throw std::invalid_argument("bad random model parameters");
  std::mt19937_64 rng(seed);
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
  auto u01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  ExplicitStitModel M;
  M.depth = params.depth;
  for (int a = 0; a < params.agents; ++a) M.agents.push_back("ag" + std::to_string(a));
  std::sort(M.agents.begin(), M.agents.end());
  std::vector<std::string> atom_names;
  for (int i = 0; i < params.atoms; ++i)
    atom_names.push_back(std::string(1, static_cast<char>('p' + i % 4)) +
                         (i < 4 ? "" : std::to_string(i / 4)));

  auto random_atoms = [&] {
    std::set<std::string> out;
    for (const auto& a : atom_names)
      if (pick(2)) out.insert(a);
    return out;
  };

  M.moments.push_back({"n0", -1, {}, random_atoms()});
  M.id_of["n0"] = 0;
  std::vector<std::pair<int, int>> frontier{{0, 0}};  // id, depth
  while (!frontier.empty()) {
    auto [id, dep] = frontier.front();
    frontier.erase(frontier.begin());
    if (dep == params.depth) {
      M.values[id] = params.value_lo + u01() * (params.value_hi - params.value_lo);
      continue;
    }
    // Per-agent group counts whose product fits the branching budget.
    std::vector<int> groups;
    int prod = 1;
    for (size_t a = 0; a < M.agents.size(); ++a) {
      int g = (prod * 2 <= params.branching && pick(2)) ? 2 : 1;
      groups.push_back(g);
      prod *= g;
    }
    int extra = params.branching > prod ? pick(params.branching - prod + 1) : 0;
    std::vector<int> cell_sizes(static_cast<size_t>(prod), 1);
    for (int e = 0; e < extra; ++e) cell_sizes[static_cast<size_t>(pick(prod))]++;

    std::vector<std::vector<int>> cell_children(static_cast<size_t>(prod));
    for (int c = 0; c < prod; ++c)
      for (int k = 0; k < cell_sizes[static_cast<size_t>(c)]; ++k) {
        int cid = static_cast<int>(M.moments.size());
        std::string nm = "n" + std::to_string(cid);
        M.moments.push_back({nm, id, {}, random_atoms()});
        M.id_of[nm] = cid;
        M.moments[static_cast<size_t>(id)].children.push_back(cid);
        cell_children[static_cast<size_t>(c)].push_back(cid);
        frontier.push_back({cid, dep + 1});
      }
    // Cell index c encodes one group per agent, mixed radix over `groups`.
    for (size_t a = 0; a < M.agents.size(); ++a) {
      int radix = 1;
      for (size_t b = a + 1; b < M.agents.size(); ++b)
        radix *= groups[b];
      for (int c = 0; c < prod; ++c) {
        int g = (c / radix) % groups[a];
        auto& cell = M.choice[M.agents[a]][id]["K" + std::to_string(g + 1)];
        for (int cid : cell_children[static_cast<size_t>(c)]) cell.insert(cid);
      }
    }
  }
  return M;
}

ExplicitStitModel parse_explicit_model(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) bad("model must be a JSON object");
  auto need = [&](const char* key) -> const ordered_json& {
    if (!j.contains(key)) bad(std::string("missing field '") + key + "'");
    return j.at(key);
  };

  ExplicitStitModel M;
  for (const auto& a : need("agents")) M.agents.push_back(a.get<std::string>());
  std::sort(M.agents.begin(), M.agents.end());
  M.agents.erase(std::unique(M.agents.begin(), M.agents.end()), M.agents.end());

  for (const auto& mj : need("moments")) {
    Moment m;
    m.name = mj.at("id").get<std::string>();
    if (M.id_of.count(m.name)) bad("duplicate moment '" + m.name + "'");
    if (mj.contains("parent") && !mj.at("parent").is_null()) {
      std::string p = mj.at("parent").get<std::string>();
      auto it = M.id_of.find(p);
      if (it == M.id_of.end())
        bad("moment " + m.name + " has parent '" + p + "' not declared before it");
      m.parent = it->second;
    } else if (!M.moments.empty()) {
      bad("moment " + m.name + " lacks a parent but is not first");
    }
    if (mj.contains("atoms"))
      for (const auto& a : mj.at("atoms")) m.atoms.insert(a.get<std::string>());
    int id = static_cast<int>(M.moments.size());
    M.id_of[m.name] = id;
    if (m.parent >= 0) M.moments[static_cast<size_t>(m.parent)].children.push_back(id);
    M.moments.push_back(std::move(m));
  }
  if (M.moments.empty()) bad("model has no moments");

  for (const auto& cj : need("choices")) {
    std::string agent = cj.at("agent").get<std::string>();
    std::string mname = cj.at("moment").get<std::string>();
    auto mit = M.id_of.find(mname);
    if (mit == M.id_of.end()) bad("choice at unknown moment '" + mname + "'");
    for (const auto& [action, kids] : cj.at("actions").items())
      for (const auto& kid : kids) {
        auto kit = M.id_of.find(kid.get<std::string>());
        if (kit == M.id_of.end())
          bad("action " + action + " names unknown moment '" +
              kid.get<std::string>() + "'");
        M.choice[agent][mit->second][action].insert(kit->second);
      }
  }

  for (const auto& [name, v] : need("values").items()) {
    auto it = M.id_of.find(name);
    if (it == M.id_of.end()) bad("value for unknown moment '" + name + "'");
    M.values[it->second] = v.get<double>();
  }
  if (j.contains("approximate")) M.approximate_values = j.at("approximate").get<bool>();
  M.depth = M.moments.empty() ? 0 : M.moment_depth(M.histories(0).front());
  return M;
}

std::string explicit_model_to_json(const ExplicitStitModel& M) {
  ordered_json j;
  j["agents"] = M.agents;
  ordered_json moments = ordered_json::array();
  for (const auto& m : M.moments) {
    ordered_json mj;
    mj["id"] = m.name;
    if (m.parent >= 0) mj["parent"] = M.moments[static_cast<size_t>(m.parent)].name;
    if (!m.atoms.empty()) mj["atoms"] = m.atoms;
    moments.push_back(std::move(mj));
  }
  j["moments"] = std::move(moments);
  ordered_json choices = ordered_json::array();
  for (const auto& [agent, per_moment] : M.choice)
    for (const auto& [mid, actions] : per_moment) {
      ordered_json cj;
      cj["agent"] = agent;
      cj["moment"] = M.moments[static_cast<size_t>(mid)].name;
      ordered_json aj;
      for (const auto& [name, kids] : actions) {
        std::vector<std::string> names;
        for (int k : kids) names.push_back(M.moments[static_cast<size_t>(k)].name);
        aj[name] = names;
      }
      cj["actions"] = std::move(aj);
      choices.push_back(std::move(cj));
    }
  j["choices"] = std::move(choices);
  ordered_json values;
  for (const auto& [id, v] : M.values)
    values[M.moments[static_cast<size_t>(id)].name] = v;
  j["values"] = std::move(values);
  if (M.approximate_values) j["approximate"] = true;
  return j.dump(2) + "\n";
}

}  // namespace dau
