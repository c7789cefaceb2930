#include "dau/temporal.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dau {

namespace {

// Negation normal form over pure temporal formulas; bounded operators must be
// expanded away beforehand.
Formula nnf(const Formula& f, bool positive) {
  switch (f->op) {
    case Op::Atom: return positive ? f : lnot(f);
    case Op::True: return positive ? truef() : falsef();
    case Op::False: return positive ? falsef() : truef();
    case Op::Not: return nnf(f->kids[0], !positive);
    case Op::And:
      return positive ? land(nnf(f->kids[0], true), nnf(f->kids[1], true))
                      : lor(nnf(f->kids[0], false), nnf(f->kids[1], false));
    case Op::Or:
      return positive ? lor(nnf(f->kids[0], true), nnf(f->kids[1], true))
                      : land(nnf(f->kids[0], false), nnf(f->kids[1], false));
    case Op::Implies:
      return positive ? lor(nnf(f->kids[0], false), nnf(f->kids[1], true))
                      : land(nnf(f->kids[0], true), nnf(f->kids[1], false));
    case Op::Next: return next(nnf(f->kids[0], positive));
    case Op::Eventually:
      return positive ? eventually(nnf(f->kids[0], true))
                      : always(nnf(f->kids[0], false));
    case Op::Always:
      return positive ? always(nnf(f->kids[0], true))
                      : eventually(nnf(f->kids[0], false));
    case Op::Until:
      return positive ? until(nnf(f->kids[0], true), nnf(f->kids[1], true))
                      : release(nnf(f->kids[0], false), nnf(f->kids[1], false));
    case Op::Release:
      return positive ? release(nnf(f->kids[0], true), nnf(f->kids[1], true))
                      : until(nnf(f->kids[0], false), nnf(f->kids[1], false));
    default:
      throw std::invalid_argument("not a pure temporal formula: " + to_string(f));
  }
}

bool is_temporal_op(Op op) {
  return op == Op::Next || op == Op::Until || op == Op::Release ||
         op == Op::Eventually || op == Op::Always;
}

// Closure tableau for pure LTL in NNF. Product states pair a system state
// with one guessed bit per temporal subformula; transition rules propagate
// the standard one-step unfoldings, and U/F bits owe a discharge witnessed
// by the acceptance sets.
struct Tableau {
  const TransitionSystem& ts;
  std::vector<std::string> state_ids;
  std::map<std::string, int> state_index;
  Formula psi;
  std::vector<Formula> elementary;       // temporal subformulas, bit order
  std::map<std::string, int> elem_of;    // printed form -> bit
  std::vector<int> accept_bits;          // bits of Until/Eventually nodes

  Tableau(const TransitionSystem& system, Formula nnf_psi)
      : ts(system), psi(std::move(nnf_psi)) {
    std::set<std::string> all = ts.states;
    for (const auto& [q, _] : ts.labels) all.insert(q);
    for (const auto& q : all) {
      state_index[q] = static_cast<int>(state_ids.size());
      state_ids.push_back(q);
    }
    collect(psi);
    if (elementary.size() > 16)
      throw std::invalid_argument("temporal formula too large: " +
                                  std::to_string(elementary.size()) +
                                  " temporal subformulas");
    for (size_t i = 0; i < elementary.size(); ++i)
      if (elementary[i]->op == Op::Until || elementary[i]->op == Op::Eventually)
        accept_bits.push_back(static_cast<int>(i));
  }

  void collect(const Formula& f) {
    for (const auto& k : f->kids) collect(k);
    if (is_temporal_op(f->op)) {
      std::string key = to_string(f);
      if (!elem_of.count(key)) {
        elem_of[key] = static_cast<int>(elementary.size());
        elementary.push_back(f);
      }
    }
  }

  bool has_atom(int q, const std::string& atom) const {
    auto it = ts.labels.find(state_ids[static_cast<size_t>(q)]);
    return it != ts.labels.end() && it->second.count(atom) > 0;
  }

  bool eval(const Formula& f, int q, uint32_t bits) const {
    switch (f->op) {
      case Op::Atom: return has_atom(q, f->name);
      case Op::True: return true;
      case Op::False: return false;
      case Op::Not: return !eval(f->kids[0], q, bits);
      case Op::And: return eval(f->kids[0], q, bits) && eval(f->kids[1], q, bits);
      case Op::Or: return eval(f->kids[0], q, bits) || eval(f->kids[1], q, bits);
      case Op::Implies:
        return !eval(f->kids[0], q, bits) || eval(f->kids[1], q, bits);
      default:
        return (bits >> elem_of.at(to_string(f))) & 1u;
    }
  }

  bool consistent(int q, uint32_t s, int q2, uint32_t s2) const {
    for (size_t i = 0; i < elementary.size(); ++i) {
      const Formula& e = elementary[i];
      bool cur = (s >> i) & 1u;
      bool nxt = (s2 >> i) & 1u;
      bool want;
      switch (e->op) {
        case Op::Next: want = eval(e->kids[0], q2, s2); break;
        case Op::Until:
          want = eval(e->kids[1], q, s) || (eval(e->kids[0], q, s) && nxt);
          break;
        case Op::Release:
          want = eval(e->kids[1], q, s) && (eval(e->kids[0], q, s) || nxt);
          break;
        case Op::Eventually: want = eval(e->kids[0], q, s) || nxt; break;
        case Op::Always: want = eval(e->kids[0], q, s) && nxt; break;
        default: want = cur; break;
      }
      if (cur != want) return false;
    }
    return true;
  }

  // Bit i's obligation is discharged at (q,s): the eventuality is off or its
  // goal holds now.
  bool discharged(int bit, int q, uint32_t s) const {
    const Formula& e = elementary[static_cast<size_t>(bit)];
    bool on = (s >> bit) & 1u;
    if (!on) return true;
    const Formula& goal = e->op == Op::Until ? e->kids[1] : e->kids[0];
    return eval(goal, q, s);
  }
};

struct Product {
  std::vector<std::pair<int, uint32_t>> nodes;  // discovery order
  std::map<std::pair<int, uint32_t>, int> index;
  std::vector<std::vector<int>> adj;
  std::vector<int> initials;
};

Product build_product(const Tableau& tb, int q0) {
  Product p;
  const uint32_t limit = 1u << tb.elementary.size();
  auto intern = [&](int q, uint32_t s) {
    auto key = std::pair(q, s);
    auto it = p.index.find(key);
    if (it != p.index.end()) return it->second;
    int id = static_cast<int>(p.nodes.size());
    p.index.emplace(key, id);
    p.nodes.push_back(key);
    p.adj.emplace_back();
    return id;
  };

  std::deque<int> work;
  for (uint32_t s = 0; s < limit; ++s)
    if (tb.eval(tb.psi, q0, s)) {
      p.initials.push_back(intern(q0, s));
      work.push_back(p.initials.back());
    }
  std::set<int> expanded;
  while (!work.empty()) {
    int id = work.front();
    work.pop_front();
    if (!expanded.insert(id).second) continue;
    auto [q, s] = p.nodes[static_cast<size_t>(id)];
    auto su = tb.ts.succ.find(tb.state_ids[static_cast<size_t>(q)]);
    if (su == tb.ts.succ.end()) continue;
    for (const auto& q2name : su->second) {
      int q2 = tb.state_index.at(q2name);
      for (uint32_t s2 = 0; s2 < limit; ++s2) {
        if (!tb.consistent(q, s, q2, s2)) continue;
        int id2 = intern(q2, s2);
        p.adj[static_cast<size_t>(id)].push_back(id2);
        work.push_back(id2);
      }
    }
  }
  return p;
}

// Iterative Tarjan; returns component id per node, components numbered in a
// deterministic order.
std::vector<int> tarjan_scc(const Product& p, int& count) {
  int n = static_cast<int>(p.nodes.size());
  std::vector<int> idx(static_cast<size_t>(n), -1), low(static_cast<size_t>(n), 0),
      comp(static_cast<size_t>(n), -1);
  std::vector<bool> on_stack(static_cast<size_t>(n), false);
  std::vector<int> stk;
  int next_index = 0;
  count = 0;

  struct Frame {
    int v;
    size_t child;
  };
  for (int root = 0; root < n; ++root) {
    if (idx[static_cast<size_t>(root)] != -1) continue;
    std::vector<Frame> call{{root, 0}};
    while (!call.empty()) {
      Frame& f = call.back();
      size_t v = static_cast<size_t>(f.v);
      if (f.child == 0) {
        idx[v] = low[v] = next_index++;
        stk.push_back(f.v);
        on_stack[v] = true;
      }
      bool descended = false;
      while (f.child < p.adj[v].size()) {
        int w = p.adj[v][f.child++];
        size_t wu = static_cast<size_t>(w);
        if (idx[wu] == -1) {
          call.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[wu]) low[v] = std::min(low[v], idx[wu]);
      }
      if (descended) continue;
      if (low[v] == idx[v]) {
        while (true) {
          int w = stk.back();
          stk.pop_back();
          on_stack[static_cast<size_t>(w)] = false;
          comp[static_cast<size_t>(w)] = count;
          if (w == f.v) break;
        }
        ++count;
      }
      int parent_low = low[v];
      call.pop_back();
      if (!call.empty()) {
        size_t pv = static_cast<size_t>(call.back().v);
        low[pv] = std::min(low[pv], parent_low);
      }
    }
  }
  return comp;
}

// Shortest path by BFS over deterministic adjacency; returns node sequence
// from a source to the first goal found, or empty if unreachable.
std::vector<int> bfs_path(const Product& p, const std::vector<int>& sources,
                          const std::vector<char>& goal,
                          const std::vector<char>& allowed, bool min_one_step) {
  std::vector<int> parent(p.nodes.size(), -2);
  std::deque<int> work;
  if (!min_one_step) {
    for (int s : sources)
      if (goal[static_cast<size_t>(s)]) return {s};
  }
  for (int s : sources)
    if (parent[static_cast<size_t>(s)] == -2) {
      parent[static_cast<size_t>(s)] = -1;
      work.push_back(s);
    }
  // On a min-one-step search a source may be re-entered; track goal hits on
  // edges instead of marking sources as visited goals.
  while (!work.empty()) {
    int v = work.front();
    work.pop_front();
    for (int w : p.adj[static_cast<size_t>(v)]) {
      size_t wu = static_cast<size_t>(w);
      if (!allowed[wu]) continue;
      if (goal[wu]) {
        std::vector<int> path{w, v};
        for (int c = v; parent[static_cast<size_t>(c)] != -1;
             c = parent[static_cast<size_t>(c)])
          path.push_back(parent[static_cast<size_t>(c)]);
        std::reverse(path.begin(), path.end());
        return path;
      }
      if (parent[wu] == -2) {
        parent[wu] = v;
        work.push_back(w);
      }
    }
  }
  return {};
}

struct ProductLasso {
  std::vector<int> prefix;  // nodes before the cycle
  std::vector<int> cycle;   // nonempty; closes back to its own front
};

std::optional<ProductLasso> find_accepting_lasso(const Tableau& tb,
                                                 const Product& p) {
  if (p.initials.empty()) return std::nullopt;
  int ncomp = 0;
  std::vector<int> comp = tarjan_scc(p, ncomp);

  // Nontrivial components that touch every acceptance set.
  std::vector<char> comp_nontrivial(static_cast<size_t>(ncomp), 0);
  std::vector<std::vector<char>> comp_hits(
      static_cast<size_t>(ncomp),
      std::vector<char>(tb.accept_bits.size(), 0));
  for (size_t v = 0; v < p.nodes.size(); ++v) {
    for (int w : p.adj[v])
      if (comp[static_cast<size_t>(w)] == comp[v]) comp_nontrivial[static_cast<size_t>(comp[v])] = 1;
    auto [q, s] = p.nodes[v];
    for (size_t i = 0; i < tb.accept_bits.size(); ++i)
      if (tb.discharged(tb.accept_bits[i], q, s))
        comp_hits[static_cast<size_t>(comp[v])][i] = 1;
  }
  std::vector<char> accepting_node(p.nodes.size(), 0);
  bool any = false;
  for (size_t v = 0; v < p.nodes.size(); ++v) {
    int c = comp[v];
    if (!comp_nontrivial[static_cast<size_t>(c)]) continue;
    bool all = true;
    for (size_t i = 0; i < tb.accept_bits.size(); ++i)
      all = all && comp_hits[static_cast<size_t>(c)][i];
    if (all) {
      accepting_node[v] = 1;
      any = true;
    }
  }
  if (!any) return std::nullopt;

  std::vector<char> everywhere(p.nodes.size(), 1);
  std::vector<int> to_scc =
      bfs_path(p, p.initials, accepting_node, everywhere, false);
  if (to_scc.empty()) return std::nullopt;

  int u = to_scc.back();
  int target_comp = comp[static_cast<size_t>(u)];
  std::vector<char> in_comp(p.nodes.size(), 0);
  for (size_t v = 0; v < p.nodes.size(); ++v)
    in_comp[v] = comp[v] == target_comp;

  // Walk the component visiting a discharge state for every acceptance set,
  // then close the loop.
  std::vector<int> cycle{u};
  int pos = u;
  int steps = 0;
  for (size_t i = 0; i < tb.accept_bits.size(); ++i) {
    std::vector<char> goal(p.nodes.size(), 0);
    for (size_t v = 0; v < p.nodes.size(); ++v) {
      auto [q, s] = p.nodes[v];
      goal[v] = in_comp[v] && tb.discharged(tb.accept_bits[i], q, s);
    }
    std::vector<int> leg = bfs_path(p, {pos}, goal, in_comp, false);
    for (size_t j = 1; j < leg.size(); ++j) {
      cycle.push_back(leg[j]);
      ++steps;
    }
    if (!leg.empty()) pos = leg.back();
  }
  std::vector<char> home(p.nodes.size(), 0);
  home[static_cast<size_t>(u)] = 1;
  std::vector<int> back = bfs_path(p, {pos}, home, in_comp, steps == 0);
  for (size_t j = 1; j + 1 < back.size(); ++j) cycle.push_back(back[j]);

  ProductLasso out;
  out.prefix.assign(to_scc.begin(), to_scc.end() - 1);
  out.cycle = std::move(cycle);
  return out;
}

Lasso project(const Tableau& tb, const Product& p, const ProductLasso& pl) {
  Lasso l;
  for (int v : pl.prefix)
    l.prefix.push_back(tb.state_ids[static_cast<size_t>(p.nodes[static_cast<size_t>(v)].first)]);
  for (int v : pl.cycle)
    l.cycle.push_back(tb.state_ids[static_cast<size_t>(p.nodes[static_cast<size_t>(v)].first)]);
  return l;
}

// Existential LTL check on a prepared system: psi must be pure temporal.
PathCheckResult ltl_exists(const TransitionSystem& ts, const std::string& q,
                           const Formula& psi) {
  if (!ts.states.count(q))
    throw std::invalid_argument("unknown state '" + q + "'");
  Formula norm = nnf(expand_bounded(psi), true);
  Tableau tb(ts, norm);
  Product p = build_product(tb, tb.state_index.at(q));
  auto pl = find_accepting_lasso(tb, p);
  if (!pl) return {false, std::nullopt};
  return {true, project(tb, p, *pl)};
}

// Replaces every A/E-quantified subformula by a fresh atom decided per state,
// innermost first; extends the working system's labels in place.
Formula reduce_state_nodes(TransitionSystem& working, const Formula& f,
                           int& counter) {
  if (f->op == Op::AllPaths || f->op == Op::ExistsPath) {
    Formula body = reduce_state_nodes(working, f->kids[0], counter);
    std::string fresh = "@s" + std::to_string(counter++);
    for (const auto& q : working.states) {
      bool holds;
      if (f->op == Op::ExistsPath) {
        holds = ltl_exists(working, q, body).holds;
      } else {
        holds = !ltl_exists(working, q, lnot(body)).holds;
      }
      if (holds) working.labels[q].insert(fresh);
    }
    return atom(fresh);
  }
  if (f->kids.empty()) return f;
  std::vector<Formula> kids;
  bool changed = false;
  for (const auto& k : f->kids) {
    kids.push_back(reduce_state_nodes(working, k, counter));
    changed = changed || kids.back().get() != k.get();
  }
  if (!changed) return f;
  auto n = std::make_shared<Node>();
  n->op = f->op;
  n->name = f->name;
  n->bound = f->bound;
  n->kids = std::move(kids);
  return n;
}

bool eval_prop(const Formula& f, const std::set<std::string>& atoms) {
  switch (f->op) {
    case Op::Atom: return atoms.count(f->name) > 0;
    case Op::True: return true;
    case Op::False: return false;
    case Op::Not: return !eval_prop(f->kids[0], atoms);
    case Op::And: return eval_prop(f->kids[0], atoms) && eval_prop(f->kids[1], atoms);
    case Op::Or: return eval_prop(f->kids[0], atoms) || eval_prop(f->kids[1], atoms);
    case Op::Implies:
      return !eval_prop(f->kids[0], atoms) || eval_prop(f->kids[1], atoms);
    default:
      throw std::logic_error("residual non-propositional node: " + to_string(f));
  }
}

}  // namespace

std::string format_lasso(const Lasso& l) {
  std::ostringstream os;
  for (size_t i = 0; i < l.prefix.size(); ++i) {
    if (i) os << ' ';
    os << l.prefix[i];
  }
  os << (l.prefix.empty() ? "| " : " | ");
  for (size_t i = 0; i < l.cycle.size(); ++i) {
    if (i) os << ' ';
    os << l.cycle[i];
  }
  return os.str();
}

std::set<std::string> check_state(const TransitionSystem& ts, const Formula& f) {
  if (classify_role(f).tag != FormulaClass::Tag::StateFormula)
    throw std::invalid_argument("not a state formula: " + to_string(f));
  TransitionSystem working = ts;
  int counter = 0;
  Formula g = reduce_state_nodes(working, f, counter);
  std::set<std::string> out;
  for (const auto& q : working.states)
    if (eval_prop(g, working.labels.at(q))) out.insert(q);
  return out;
}

PathCheckResult check_universal_path(const TransitionSystem& ts,
                                     const std::string& q, const Formula& psi) {
  if (!is_path_formula(psi))
    throw std::invalid_argument("not a path formula: " + to_string(psi));
  TransitionSystem working = ts;
  int counter = 0;
  Formula g = reduce_state_nodes(working, psi, counter);
  PathCheckResult ex = ltl_exists(working, q, lnot(g));
  return {!ex.holds, ex.lasso};
}

PathCheckResult check_existential_path(const TransitionSystem& ts,
                                       const std::string& q, const Formula& psi) {
  if (!is_path_formula(psi))
    throw std::invalid_argument("not a path formula: " + to_string(psi));
  TransitionSystem working = ts;
  int counter = 0;
  Formula g = reduce_state_nodes(working, psi, counter);
  return ltl_exists(working, q, g);
}

bool eval_finite_trace(const Formula& psi,
                       const std::vector<std::set<std::string>>& trace) {
  auto h = syntactic_horizon(psi);
  if (!h)
    throw std::invalid_argument("formula has no finite horizon: " + to_string(psi));
  if (trace.size() < static_cast<size_t>(*h) + 1)
    throw std::invalid_argument("trace shorter than horizon+1");
  Formula e = expand_bounded(psi);
  struct Ev {
    const std::vector<std::set<std::string>>& tr;
    bool run(const Formula& f, size_t pos) {
      switch (f->op) {
        case Op::Atom: return tr[pos].count(f->name) > 0;
        case Op::True: return true;
        case Op::False: return false;
        case Op::Not: return !run(f->kids[0], pos);
        case Op::And: return run(f->kids[0], pos) && run(f->kids[1], pos);
        case Op::Or: return run(f->kids[0], pos) || run(f->kids[1], pos);
        case Op::Implies: return !run(f->kids[0], pos) || run(f->kids[1], pos);
        case Op::Next: return run(f->kids[0], pos + 1);
        default:
          throw std::invalid_argument("operator without finite horizon: " +
                                      to_string(f));
      }
    }
  } ev{trace};
  return ev.run(e, 0);
}

}  // namespace dau
