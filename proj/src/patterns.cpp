#include "dau/patterns.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

#include "dau/formula.hpp"

namespace dau {

namespace {

const std::vector<std::string> kIds = {"P1", "XREV", "FFWD", "FREV", "P2",
                                       "V1", "V2",   "V3",   "L1"};

void require_known(const std::string& id) {
  if (std::find(kIds.begin(), kIds.end(), id) != kIds.end()) return;
  std::string all;
  for (const auto& k : kIds) all += (all.empty() ? "" : ", ") + k;
  throw std::runtime_error("unknown pattern '" + id + "' (available: " + all +
                           ")");
}

bool takes_two_atoms(const std::string& id) {
  return id == "V3" || id == "L1";
}

struct Schema {
  Formula ante;
  Formula cons;
};

Schema instantiate(const std::string& id, const std::string& ag,
                   const Formula& phi, const Formula& psi) {
  if (id == "P1")
    return {ought(ag, next(phi)), dau_next(ought(ag, phi))};
  if (id == "XREV")
    return {dau_next(ought(ag, phi)), ought(ag, next(phi))};
  if (id == "FFWD")
    return {ought(ag, eventually(phi)), eventually(ought(ag, phi))};
  if (id == "FREV")
    return {eventually(ought(ag, phi)), ought(ag, eventually(phi))};
  if (id == "P2")
    return {land(land(ought(ag, eventually(phi)),
                      lnot(cstit(ag, eventually(phi)))),
                 dau_next(expath(cstit(ag, eventually(phi))))),
            dau_next(ought(ag, eventually(phi)))};
  if (id == "V1")
    return {land(ought(ag, next(phi)), took_optimal(ag)),
            dau_next(ought(ag, phi))};
  if (id == "V2")
    return {land(land(ought(ag, eventually(phi)), took_optimal(ag)),
                 allpaths(lnot(phi))),
            dau_next(ought(ag, eventually(phi)))};
  if (id == "V3")
    return {land(land(ought(ag, lor(phi, next(psi))), cstit(ag, lnot(phi))),
                 took_optimal(ag)),
            dau_next(ought(ag, psi))};
  // L1
  return {land(land(ought(ag, lor(phi, next(psi))), cstit(ag, lnot(phi))),
               dau_next(expath(cstit(ag, psi)))),
          dau_next(ought(ag, psi))};
}

// L1's side condition: whenever a cell of ag refutes phi throughout and one
// of its histories reaches a next moment where ag could still see to psi,
// every optimal action at that next moment must guarantee psi.
bool l1_constraint_holds(const ExplicitStitModel& M, const std::string& ag,
                         const Formula& phi, const Formula& psi) {
  Formula reachable = expath(cstit(ag, psi));
  Formula kept = ought(ag, psi);
  for (int m = 0; m < static_cast<int>(M.moments.size()); ++m) {
    if (M.is_leaf(m)) continue;
    for (const auto& [name, K] : M.cells(ag, m)) {
      bool refutes = true;
      for (int h : K)
        if (eval3(M, m, h, phi) != Tri::False) {
          refutes = false;
          break;
        }
      if (!refutes) continue;
      for (int h : K) {
        int next_m = M.child_toward(m, h);
        if (eval3(M, next_m, h, reachable) != Tri::True) continue;
        if (eval3(M, next_m, h, kept) != Tri::True) return false;
      }
    }
  }
  return true;
}

}  // namespace

const std::vector<std::string>& pattern_ids() { return kIds; }

bool pattern_is_valid_claim(const std::string& id) {
  require_known(id);
  return id == "V1" || id == "V2" || id == "V3" || id == "L1";
}

PatternResult check_pattern(const ExplicitStitModel& M, const std::string& id) {
  require_known(id);
  if (M.depth < 2)
    throw std::runtime_error("model depth " + std::to_string(M.depth) +
                             " is insufficient for pattern search (need at "
                             "least 2)");
  std::set<std::string> atoms;
  for (const auto& mo : M.moments) atoms.insert(mo.atoms.begin(), mo.atoms.end());

  std::vector<std::pair<std::string, std::string>> subs;
  for (const auto& a : atoms) {
    if (takes_two_atoms(id))
      for (const auto& b : atoms) subs.emplace_back(a, b);
    else
      subs.emplace_back(a, "");
  }

  if (id == "L1") {
    for (const auto& ag : M.agents)
      for (const auto& [pa, pb] : subs)
        if (!l1_constraint_holds(M, ag, atom(pa), atom(pb))) {
          PatternResult r;
          r.status = PatternResult::Status::ConstraintViolated;
          r.instantiation = "phi=" + pa + ", psi=" + pb;
          r.agent = ag;
          return r;
        }
  }

  for (const auto& ag : M.agents) {
    for (const auto& [pa, pb] : subs) {
      Formula phi = atom(pa);
      Formula psi = pb.empty() ? falsef() : atom(pb);
      std::string inst = "phi=" + pa + (pb.empty() ? "" : ", psi=" + pb);
      Schema s = instantiate(id, ag, phi, psi);
      for (int m = 0; m < static_cast<int>(M.moments.size()); ++m) {
        for (int h : M.histories(m)) {
          if (eval3(M, m, h, s.ante) != Tri::True) continue;
          if (eval3(M, m, h, s.cons) != Tri::False) continue;
          PatternResult r;
          r.status = PatternResult::Status::Counterexample;
          r.counterexample = Index{m, h};
          r.instantiation = inst;
          r.agent = ag;
          return r;
        }
      }
    }
  }
  return PatternResult{};
}

}  // namespace dau
