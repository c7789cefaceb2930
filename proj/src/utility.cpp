#include "dau/utility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dau {

StitMdp to_mdp(const StitAutomaton& T, double gamma) {
  StitMdp m;
  m.gamma = gamma;
  for (const auto& q : T.states) {
    m.index[q] = static_cast<int>(m.states.size());
    m.states.push_back(q);
  }
  m.enabled.resize(m.states.size());
  for (const auto& t : T.transitions)
    m.enabled[static_cast<size_t>(m.index.at(t.from))].push_back(
        {t.action, t.weight, m.index.at(t.to)});
  return m;
}

std::vector<double> value_iteration(const StitMdp& mdp, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const double gamma = mdp.gamma;
  const double stop = gamma >= 0.5 ? epsilon * (1.0 - gamma) / gamma : epsilon;
  std::vector<double> v(mdp.states.size(), 0.0);
  std::vector<double> nv(mdp.states.size(), 0.0);
  while (true) {
    double delta = 0.0;
    for (size_t q = 0; q < mdp.states.size(); ++q) {
      if (mdp.enabled[q].empty()) {
        nv[q] = 0.0;
        continue;
      }
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& c : mdp.enabled[q])
        best = std::max(best, c.reward + gamma * v[static_cast<size_t>(c.succ)]);
      nv[q] = best;
      delta = std::max(delta, std::fabs(nv[q] - v[q]));
    }
    v = nv;
    if (delta <= stop) return v;
  }
}

std::pair<double, double> extremal_min(const StitAutomaton& T) {
  if (T.accumulation.kind != AccumulationPolicy::Kind::Min)
    throw std::invalid_argument("automaton does not use Min accumulation");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  bool found = false;

  // DFS over simple paths; closing any edge back into the path yields one
  // simple execution whose value is the minimum weight walked.
  std::vector<std::string> path;
  std::map<std::string, size_t> on_path;

  struct Rec {
    const StitAutomaton& T;
    std::vector<std::string>& path;
    std::map<std::string, size_t>& on_path;
    double& lo;
    double& hi;
    bool& found;

    void run(const std::string& q, double running_min) {
      on_path[q] = path.size();
      path.push_back(q);
      for (const Transition* t : T.out(q)) {
        double m = std::min(running_min, t->weight);
        if (on_path.count(t->to)) {
          lo = std::min(lo, m);
          hi = std::max(hi, m);
          found = true;
        } else {
          run(t->to, m);
        }
      }
      path.pop_back();
      on_path.erase(q);
    }
  } rec{T, path, on_path, lo, hi, found};
  rec.run(T.initial, std::numeric_limits<double>::infinity());

  if (!found)
    throw std::invalid_argument("no infinite execution from the initial state");
  return {lo, hi};
}

DiscountedExtremes extremal_discounted(const StitAutomaton& T) {
  if (T.accumulation.kind != AccumulationPolicy::Kind::Discounted)
    throw std::invalid_argument("automaton does not use Discounted accumulation");
  const double gamma = T.accumulation.gamma;
  const double eps = T.accumulation.tolerance;

  StitMdp up = to_mdp(T, gamma);
  std::vector<double> vu = value_iteration(up, eps);

  StitAutomaton neg = T;
  for (auto& t : neg.transitions) t.weight = -t.weight;
  StitMdp down = to_mdp(neg, gamma);
  std::vector<double> vl = value_iteration(down, eps);

  int root = up.index.at(T.initial);
  return {-vl[static_cast<size_t>(root)], vu[static_cast<size_t>(root)], eps};
}

ActionInterval extremal_interval(const StitAutomaton& T,
                                 const std::string& action_tag) {
  ActionInterval iv;
  iv.action = action_tag;
  if (T.accumulation.kind == AccumulationPolicy::Kind::Min) {
    auto [lo, hi] = extremal_min(T);
    iv.lower = lo;
    iv.upper = hi;
    iv.certified_error = 0.0;
  } else {
    DiscountedExtremes e = extremal_discounted(T);
    iv.lower = e.lower;
    iv.upper = e.upper;
    iv.certified_error = e.certified_error;
  }
  return iv;
}

std::set<std::string> undominated(const std::vector<ActionInterval>& intervals) {
  if (intervals.empty())
    throw std::invalid_argument("undominated: empty interval set");
  std::set<std::string> out;
  for (const auto& k : intervals) {
    bool dominated = false;
    for (const auto& k2 : intervals) {
      if (&k2 == &k) continue;
      bool le = k.upper + k.certified_error <= k2.lower - k2.certified_error;
      bool ge = k2.upper + k2.certified_error <= k.lower - k.certified_error;
      if (le && !ge) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.insert(k.action);
  }
  return out;
}

}  // namespace dau
