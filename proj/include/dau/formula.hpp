#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dau {

enum class Op {
  Atom,
  True,
  False,
  Not,
  And,
  Or,
  Implies,
  AllPaths,
  ExistsPath,
  Next,
  Eventually,
  Always,
  Until,
  Release,
  BoundedEventually,
  BoundedAlways,
  Cstit,
  Dstit,
  Ought,
  CondOught,
  Perm,
  CondPerm,
  DauNext,
  TookOptimal,
};

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
  Op op;
  std::string name;  // atom name, or agent id for stit/deontic operators
  int bound = 0;     // F<=n / G<=n
  std::vector<Formula> kids;  // CondOught/CondPerm: kids[0]=body, kids[1]=condition
};

struct ParseError : std::runtime_error {
  size_t position;
  ParseError(const std::string& what, size_t pos)
      : std::runtime_error(what), position(pos) {}
};

// Constructors.
Formula atom(std::string name);
Formula truef();
Formula falsef();
Formula lnot(Formula a);
Formula land(Formula a, Formula b);
Formula lor(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula allpaths(Formula a);
Formula expath(Formula a);
Formula next(Formula a);
Formula eventually(Formula a);
Formula always(Formula a);
Formula until(Formula a, Formula b);
Formula release(Formula a, Formula b);
Formula bounded_eventually(int n, Formula a);
Formula bounded_always(int n, Formula a);
Formula cstit(std::string agent, Formula a);
Formula dstit(std::string agent, Formula a);
Formula ought(std::string agent, Formula body);
Formula cond_ought(std::string agent, Formula body, Formula condition);
Formula perm(std::string agent, Formula body);
Formula cond_perm(std::string agent, Formula body, Formula condition);
Formula dau_next(Formula a);
Formula took_optimal(std::string agent);

bool equal(const Formula& a, const Formula& b);

// Concrete syntax. parse accepts the full query grammar (Ob/Perm wrappers,
// state and path formulas, oracle extensions cstit/tookOpt/XX).
Formula parse_formula(std::string_view text);
std::string to_string(const Formula& f);

// True when f contains no stit/deontic operator anywhere (pure CTL*).
bool is_pure_temporal(const Formula& f);
// Pure CTL* state formula: propositional over atoms and A/E-quantified paths.
bool is_state_formula(const Formula& f);
// Pure CTL* path formula (every state formula qualifies).
bool is_path_formula(const Formula& f);

struct FormulaClass {
  enum class Tag { StateFormula, PathFormula, CheckerObligation, OracleOnly };
  enum class Kind { PlainTemporal, Dstit, NegDstit };
  Tag tag;
  Kind kind = Kind::PlainTemporal;  // meaningful iff tag == CheckerObligation
};

// Admissibility as an obligation body: pure temporal formulas, dstit over a
// pure temporal formula, and the negation of such a dstit, in that order of
// dispatch; everything else needs the explicit oracle.
FormulaClass classify(const Formula& f);
// Role of f as a standalone query: StateFormula / PathFormula for pure CTL*
// formulas, CheckerObligation for dstit-shaped bodies, OracleOnly otherwise.
FormulaClass classify_role(const Formula& f);

// Smallest t such that any prefix of t+1 trace positions decides f. Defined
// only for propositional connectives, Next, and the bounded operators.
std::optional<int> syntactic_horizon(const Formula& f);

// Rewrites F<=n / G<=n into nested Next; other operators are untouched.
Formula expand_bounded(const Formula& f);

// Negation pushed one level, dualizing quantifiers and temporal operators.
Formula negate(const Formula& f);

}  // namespace dau
