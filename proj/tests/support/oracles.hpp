#pragma once

// Independent reference implementations the engine under test is checked
// against. Everything here favors obviousness over speed.

#include <functional>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dau/automaton.hpp"
#include "dau/formula.hpp"

namespace dau::testing {

// Evaluates a pure LTL formula on the ultimately periodic word
// prefix . cycle^omega by least/greatest fixpoint iteration on the lasso
// graph. No Buchi machinery involved.
class LassoEval {
 public:
  LassoEval(const std::vector<std::set<std::string>>& prefix,
            const std::vector<std::set<std::string>>& cycle)
      : p_(prefix.size()), n_(prefix.size() + cycle.size()) {
    for (const auto& s : prefix) labels_.push_back(s);
    for (const auto& s : cycle) labels_.push_back(s);
  }

  bool at(const Formula& f, size_t pos) { return vals(expand_bounded(f))[pos]; }
  bool holds(const Formula& f) { return at(f, 0); }

 private:
  size_t p_, n_;
  std::vector<std::set<std::string>> labels_;
  std::map<std::string, std::vector<char>> memo_;

  size_t next(size_t i) const { return i + 1 < n_ ? i + 1 : p_; }

  const std::vector<char>& vals(const Formula& f) {
    std::string key = to_string(f);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<char> v(n_, 0);
    switch (f->op) {
      case Op::Atom:
        for (size_t i = 0; i < n_; ++i) v[i] = labels_[i].count(f->name) > 0;
        break;
      case Op::True: v.assign(n_, 1); break;
      case Op::False: break;
      case Op::Not: {
        auto k = vals(f->kids[0]);
        for (size_t i = 0; i < n_; ++i) v[i] = !k[i];
        break;
      }
      case Op::And: {
        auto a = vals(f->kids[0]), b = vals(f->kids[1]);
        for (size_t i = 0; i < n_; ++i) v[i] = a[i] && b[i];
        break;
      }
      case Op::Or: {
        auto a = vals(f->kids[0]), b = vals(f->kids[1]);
        for (size_t i = 0; i < n_; ++i) v[i] = a[i] || b[i];
        break;
      }
      case Op::Implies: {
        auto a = vals(f->kids[0]), b = vals(f->kids[1]);
        for (size_t i = 0; i < n_; ++i) v[i] = !a[i] || b[i];
        break;
      }
      case Op::Next: {
        auto k = vals(f->kids[0]);
        for (size_t i = 0; i < n_; ++i) v[i] = k[next(i)];
        break;
      }
      case Op::Eventually: {
        auto k = vals(f->kids[0]);
        for (size_t r = 0; r <= n_; ++r)
          for (size_t i = n_; i-- > 0;) v[i] = k[i] || v[next(i)];
        break;
      }
      case Op::Until: {
        auto a = vals(f->kids[0]), b = vals(f->kids[1]);
        for (size_t r = 0; r <= n_; ++r)
          for (size_t i = n_; i-- > 0;) v[i] = b[i] || (a[i] && v[next(i)]);
        break;
      }
      case Op::Always: {
        auto k = vals(f->kids[0]);
        v.assign(n_, 1);
        for (size_t r = 0; r <= n_; ++r)
          for (size_t i = n_; i-- > 0;) v[i] = k[i] && v[next(i)];
        break;
      }
      case Op::Release: {
        auto a = vals(f->kids[0]), b = vals(f->kids[1]);
        v.assign(n_, 1);
        for (size_t r = 0; r <= n_; ++r)
          for (size_t i = n_; i-- > 0;) v[i] = b[i] && (a[i] || v[next(i)]);
        break;
      }
      default:
        throw std::invalid_argument("lasso oracle: unsupported operator");
    }
    return memo_.emplace(std::move(key), std::move(v)).first->second;
  }
};

inline bool eval_ltl_on_lasso(const Formula& f,
                              const std::vector<std::set<std::string>>& prefix,
                              const std::vector<std::set<std::string>>& cycle) {
  return LassoEval(prefix, cycle).holds(f);
}

// Exhaustively enumerates every ultimately periodic path from q with
// prefix+cycle length <= bound and reports whether one satisfies f.
inline bool exists_lasso_satisfying(const TransitionSystem& ts,
                                    const std::string& q, const Formula& f,
                                    int bound) {
  std::vector<std::string> walk{q};
  auto labels_of = [&](const std::string& s) {
    auto it = ts.labels.find(s);
    return it == ts.labels.end() ? std::set<std::string>{} : it->second;
  };

  struct Rec {
    const TransitionSystem& ts;
    const Formula& f;
    int bound;
    std::vector<std::string>& walk;
    std::function<std::set<std::string>(const std::string&)> labels_of;

    bool run() {
      size_t last = walk.size() - 1;
      for (size_t i = 0; i < last; ++i) {
        if (walk[i] != walk[last]) continue;
        std::vector<std::set<std::string>> pre, cyc;
        for (size_t j = 0; j < i; ++j) pre.push_back(labels_of(walk[j]));
        for (size_t j = i; j < last; ++j) cyc.push_back(labels_of(walk[j]));
        if (eval_ltl_on_lasso(f, pre, cyc)) return true;
      }
      if (walk.size() > static_cast<size_t>(bound)) return false;
      auto it = ts.succ.find(walk.back());
      if (it == ts.succ.end()) return false;
      for (const auto& nxt : it->second) {
        walk.push_back(nxt);
        bool found = run();
        walk.pop_back();
        if (found) return true;
      }
      return false;
    }
  } rec{ts, f, bound, walk, labels_of};
  return rec.run();
}

// Extremal depth-bounded discounted partial sums, by dynamic programming
// over all length-depth tactic prefixes.
inline std::pair<double, double> discounted_depth_bounds(const StitAutomaton& T,
                                                         int depth) {
  const double gamma = T.accumulation.gamma;
  std::vector<std::string> ids(T.states.begin(), T.states.end());
  std::map<std::string, int> idx;
  for (size_t i = 0; i < ids.size(); ++i) idx[ids[i]] = static_cast<int>(i);
  std::vector<double> lo(ids.size(), 0.0), hi(ids.size(), 0.0);
  for (int d = 0; d < depth; ++d) {
    std::vector<double> nlo(ids.size(), 0.0), nhi(ids.size(), 0.0);
    for (size_t q = 0; q < ids.size(); ++q) {
      bool first = true;
      for (const Transition* t : T.out(ids[q])) {
        size_t s = static_cast<size_t>(idx.at(t->to));
        double vlo = t->weight + gamma * lo[s];
        double vhi = t->weight + gamma * hi[s];
        if (first) {
          nlo[q] = vlo;
          nhi[q] = vhi;
          first = false;
        } else {
          nlo[q] = std::min(nlo[q], vlo);
          nhi[q] = std::max(nhi[q], vhi);
        }
      }
    }
    lo = nlo;
    hi = nhi;
  }
  size_t root = static_cast<size_t>(idx.at(T.initial));
  return {lo[root], hi[root]};
}

// Random pure-LTL sampler with a budget of temporal operators.
class LtlSampler {
 public:
  LtlSampler(std::mt19937_64& rng, std::vector<std::string> atoms)
      : rng_(rng), atoms_(std::move(atoms)) {}

  Formula sample(int depth, int temporal_budget) {
    return go(depth, temporal_budget);
  }

 private:
  std::mt19937_64& rng_;
  std::vector<std::string> atoms_;

  int pick(int n) { return static_cast<int>(rng_() % static_cast<unsigned>(n)); }

  Formula leaf() {
    int c = pick(static_cast<int>(atoms_.size()) + 1);
    if (c == static_cast<int>(atoms_.size())) return pick(2) ? truef() : falsef();
    return atom(atoms_[static_cast<size_t>(c)]);
  }

  Formula go(int depth, int budget) {
    if (depth <= 0) return leaf();
    int c = pick(budget > 0 ? 9 : 4);
    switch (c) {
      case 0: return leaf();
      case 1: return lnot(go(depth - 1, budget));
      case 2: return land(go(depth - 1, budget), go(depth - 1, budget));
      case 3: return lor(go(depth - 1, budget), go(depth - 1, budget));
      case 4: return next(go(depth - 1, budget - 1));
      case 5: return eventually(go(depth - 1, budget - 1));
      case 6: return always(go(depth - 1, budget - 1));
      case 7: return until(go(depth - 1, budget - 1), go(depth - 1, budget - 1));
      default:
        return release(go(depth - 1, budget - 1), go(depth - 1, budget - 1));
    }
  }
};

}  // namespace dau::testing
