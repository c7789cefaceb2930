#include "dau/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace dau {

namespace {

Formula mk(Op op, std::string name, int bound, std::vector<Formula> kids) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->name = std::move(name);
  n->bound = bound;
  n->kids = std::move(kids);
  return n;
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

Formula atom(std::string name) { return mk(Op::Atom, std::move(name), 0, {}); }
Formula truef() { return mk(Op::True, "", 0, {}); }
Formula falsef() { return mk(Op::False, "", 0, {}); }
Formula lnot(Formula a) { return mk(Op::Not, "", 0, {std::move(a)}); }
Formula land(Formula a, Formula b) { return mk(Op::And, "", 0, {std::move(a), std::move(b)}); }
Formula lor(Formula a, Formula b) { return mk(Op::Or, "", 0, {std::move(a), std::move(b)}); }
Formula implies(Formula a, Formula b) { return mk(Op::Implies, "", 0, {std::move(a), std::move(b)}); }
Formula allpaths(Formula a) { return mk(Op::AllPaths, "", 0, {std::move(a)}); }
Formula expath(Formula a) { return mk(Op::ExistsPath, "", 0, {std::move(a)}); }
Formula next(Formula a) { return mk(Op::Next, "", 0, {std::move(a)}); }
Formula eventually(Formula a) { return mk(Op::Eventually, "", 0, {std::move(a)}); }
Formula always(Formula a) { return mk(Op::Always, "", 0, {std::move(a)}); }
Formula until(Formula a, Formula b) { return mk(Op::Until, "", 0, {std::move(a), std::move(b)}); }
Formula release(Formula a, Formula b) { return mk(Op::Release, "", 0, {std::move(a), std::move(b)}); }

Formula bounded_eventually(int n, Formula a) {
  require(n >= 0, "bound must be nonnegative");
  return mk(Op::BoundedEventually, "", n, {std::move(a)});
}

Formula bounded_always(int n, Formula a) {
  require(n >= 0, "bound must be nonnegative");
  return mk(Op::BoundedAlways, "", n, {std::move(a)});
}

Formula cstit(std::string agent, Formula a) {
  return mk(Op::Cstit, std::move(agent), 0, {std::move(a)});
}
Formula dstit(std::string agent, Formula a) {
  return mk(Op::Dstit, std::move(agent), 0, {std::move(a)});
}
Formula ought(std::string agent, Formula body) {
  return mk(Op::Ought, std::move(agent), 0, {std::move(body)});
}
Formula cond_ought(std::string agent, Formula body, Formula condition) {
  require(is_path_formula(condition), "condition must be a pure path formula");
  return mk(Op::CondOught, std::move(agent), 0, {std::move(body), std::move(condition)});
}
Formula perm(std::string agent, Formula body) {
  return mk(Op::Perm, std::move(agent), 0, {std::move(body)});
}
Formula cond_perm(std::string agent, Formula body, Formula condition) {
  require(is_path_formula(condition), "condition must be a pure path formula");
  return mk(Op::CondPerm, std::move(agent), 0, {std::move(body), std::move(condition)});
}
Formula dau_next(Formula a) { return mk(Op::DauNext, "", 0, {std::move(a)}); }
Formula took_optimal(std::string agent) {
  return mk(Op::TookOptimal, std::move(agent), 0, {});
}

bool equal(const Formula& a, const Formula& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->op != b->op || a->name != b->name || a->bound != b->bound ||
      a->kids.size() != b->kids.size())
    return false;
  for (size_t i = 0; i < a->kids.size(); ++i)
    if (!equal(a->kids[i], b->kids[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  End, Ident, Nat, Bang, Amp, Bar, Arrow, LParen, RParen, LBrack, RBrack, Le,
  KwTrue, KwFalse, KwU, KwR, KwX, KwXX, KwF, KwG, KwA, KwE, KwOb, KwPerm,
  KwDstit, KwCstit, KwTookOpt,
};

struct Token {
  Tok kind;
  std::string text;
  size_t pos;
  long value = 0;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

Tok keyword(const std::string& s) {
  if (s == "true") return Tok::KwTrue;
  if (s == "false") return Tok::KwFalse;
  if (s == "U") return Tok::KwU;
  if (s == "R") return Tok::KwR;
  if (s == "X") return Tok::KwX;
  if (s == "XX") return Tok::KwXX;
  if (s == "F") return Tok::KwF;
  if (s == "G") return Tok::KwG;
  if (s == "A") return Tok::KwA;
  if (s == "E") return Tok::KwE;
  if (s == "Ob") return Tok::KwOb;
  if (s == "Perm") return Tok::KwPerm;
  if (s == "dstit") return Tok::KwDstit;
  if (s == "cstit") return Tok::KwCstit;
  if (s == "tookOpt") return Tok::KwTookOpt;
  return Tok::Ident;
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    size_t start = i;
    if (ident_start(c)) {
      ++i;
      while (i < n && ident_char(text[i])) {
        // '-' belongs to the name only when it keeps the name going; "a->b"
        // must break before the arrow.
        if (text[i] == '-' && (i + 1 >= n || !ident_char(text[i + 1]))) break;
        ++i;
      }
      std::string s(text.substr(start, i - start));
      out.push_back({keyword(s), s, start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      ++i;
      while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      std::string s(text.substr(start, i - start));
      if (s.size() > 4) throw ParseError("malformed bound: " + s, start);
      out.push_back({Tok::Nat, s, start, std::stol(s)});
      continue;
    }
    switch (c) {
      case '!': out.push_back({Tok::Bang, "!", start}); ++i; break;
      case '&': out.push_back({Tok::Amp, "&", start}); ++i; break;
      case '|': out.push_back({Tok::Bar, "|", start}); ++i; break;
      case '(': out.push_back({Tok::LParen, "(", start}); ++i; break;
      case ')': out.push_back({Tok::RParen, ")", start}); ++i; break;
      case '[': out.push_back({Tok::LBrack, "[", start}); ++i; break;
      case ']': out.push_back({Tok::RBrack, "]", start}); ++i; break;
      case '-':
        if (i + 1 < n && text[i + 1] == '>') {
          out.push_back({Tok::Arrow, "->", start});
          i += 2;
        } else {
          throw ParseError("unexpected character '-'", start);
        }
        break;
      case '<':
        if (i + 1 < n && text[i + 1] == '=') {
          out.push_back({Tok::Le, "<=", start});
          i += 2;
        } else {
          throw ParseError("unexpected character '<'", start);
        }
        break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
  }
  out.push_back({Tok::End, "", n});
  return out;
}

// ---------------------------------------------------------------------------
// Parser. Precedence: unary > U/R > & > | > ->, with U/R and -> right
// associative. Directly inside Ob(...)/Perm(...) a '|' at depth 0 separates
// body from condition, so disjunctive bodies need their own parentheses.

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  Formula run() {
    Formula f = formula(false);
    expect(Tok::End, "trailing input after formula");
    return f;
  }

 private:
  std::vector<Token> toks_;
  size_t at_ = 0;

  const Token& cur() const { return toks_[at_]; }
  bool is(Tok k) const { return cur().kind == k; }
  Token take() { return toks_[at_++]; }

  void expect(Tok k, const char* msg) {
    if (!is(k)) throw ParseError(msg, cur().pos);
    ++at_;
  }

  Formula formula(bool stop_at_bar) { return impl(stop_at_bar); }

  Formula impl(bool stop_at_bar) {
    Formula lhs = disj(stop_at_bar);
    if (is(Tok::Arrow)) {
      take();
      return implies(lhs, impl(stop_at_bar));
    }
    return lhs;
  }

  Formula disj(bool stop_at_bar) {
    Formula lhs = conj();
    while (is(Tok::Bar)) {
      if (stop_at_bar) break;
      take();
      lhs = lor(lhs, conj());
    }
    return lhs;
  }

  Formula conj() {
    Formula lhs = untilrel();
    while (is(Tok::Amp)) {
      take();
      lhs = land(lhs, untilrel());
    }
    return lhs;
  }

  Formula untilrel() {
    Formula lhs = unary();
    if (is(Tok::KwU)) {
      take();
      return until(lhs, untilrel());
    }
    if (is(Tok::KwR)) {
      take();
      return release(lhs, untilrel());
    }
    return lhs;
  }

  Formula unary() {
    switch (cur().kind) {
      case Tok::Bang: take(); return lnot(unary());
      case Tok::KwX: take(); return next(unary());
      case Tok::KwXX: take(); return dau_next(unary());
      case Tok::KwA: take(); return allpaths(unary());
      case Tok::KwE: take(); return expath(unary());
      case Tok::KwF: {
        take();
        if (is(Tok::Le)) {
          int n = nat();
          return bounded_eventually(n, unary());
        }
        return eventually(unary());
      }
      case Tok::KwG: {
        take();
        if (is(Tok::Le)) {
          int n = nat();
          return bounded_always(n, unary());
        }
        return always(unary());
      }
      default: return primary();
    }
  }

  int nat() {
    expect(Tok::Le, "expected '<='");
    if (!is(Tok::Nat)) throw ParseError("malformed bound", cur().pos);
    return static_cast<int>(take().value);
  }

  std::string bracket_id() {
    expect(Tok::LBrack, "expected '['");
    if (!is(Tok::Ident)) throw ParseError("expected agent name", cur().pos);
    std::string id = take().text;
    expect(Tok::RBrack, "expected ']'");
    return id;
  }

  Formula primary() {
    switch (cur().kind) {
      case Tok::KwTrue: take(); return truef();
      case Tok::KwFalse: take(); return falsef();
      case Tok::Ident: return atom(take().text);
      case Tok::LParen: {
        take();
        Formula f = formula(false);
        expect(Tok::RParen, "expected ')'");
        return f;
      }
      case Tok::KwOb: return deontic(true);
      case Tok::KwPerm: return deontic(false);
      case Tok::KwDstit:
      case Tok::KwCstit: {
        bool d = take().kind == Tok::KwDstit;
        std::string agent = bracket_id();
        expect(Tok::LParen, "expected '('");
        Formula body = formula(false);
        expect(Tok::RParen, "expected ')'");
        return d ? dstit(agent, body) : cstit(agent, body);
      }
      case Tok::KwTookOpt: {
        take();
        return took_optimal(bracket_id());
      }
      default:
        throw ParseError("expected formula, got '" + cur().text + "'", cur().pos);
    }
  }

  Formula deontic(bool obligation) {
    size_t where = cur().pos;
    take();
    std::string agent = bracket_id();
    expect(Tok::LParen, "expected '('");
    Formula body = formula(true);
    Formula condition;
    if (is(Tok::Bar)) {
      take();
      condition = formula(false);
      if (!is_path_formula(condition))
        throw ParseError("condition must be a pure path formula", where);
    }
    expect(Tok::RParen, "expected ')'");
    if (condition)
      return obligation ? cond_ought(agent, body, condition)
                        : cond_perm(agent, body, condition);
    return obligation ? ought(agent, body) : perm(agent, body);
  }
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Printer. Minimal parentheses; bar_sensitive forces parens around any Or
// that would otherwise print a '|' at depth 0 inside a deontic body.

namespace {

int precedence(Op op) {
  switch (op) {
    case Op::Implies: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    case Op::Until:
    case Op::Release: return 4;
    case Op::Not:
    case Op::Next:
    case Op::DauNext:
    case Op::Eventually:
    case Op::Always:
    case Op::BoundedEventually:
    case Op::BoundedAlways:
    case Op::AllPaths:
    case Op::ExistsPath: return 5;
    default: return 6;
  }
}

void print(std::ostream& os, const Formula& f, int ctx, bool bar_sensitive);

void print_paren(std::ostream& os, const Formula& f) {
  os << '(';
  print(os, f, 0, false);
  os << ')';
}

void print_body(std::ostream& os, const Formula& f) {
  print(os, f, 0, true);
}

void print(std::ostream& os, const Formula& f, int ctx, bool bar_sensitive) {
  const int prec = precedence(f->op);
  bool wrap = prec < ctx || (bar_sensitive && f->op == Op::Or);
  if (wrap) {
    print_paren(os, f);
    return;
  }
  switch (f->op) {
    case Op::Atom: os << f->name; break;
    case Op::True: os << "true"; break;
    case Op::False: os << "false"; break;
    case Op::Not:
      os << '!';
      print(os, f->kids[0], 5, bar_sensitive);
      break;
    case Op::Next:
      os << "X ";
      print(os, f->kids[0], 5, bar_sensitive);
      break;
    case Op::DauNext:
      os << "XX ";
      print(os, f->kids[0], 5, bar_sensitive);
      break;
    case Op::Eventually:
      os << "F ";
      print(os, f->kids[0], 5, bar_sensitive);
      break;
    case Op::Always:
      os << "G ";
      print(os, f->kids[0], 5, bar_sensitive);
      break;
    case Op::BoundedEventually:
      os << "F<=" << f->bound << ' ';
      print(os, f->kids[0], 5, bar_sensitive);
      break;
    case Op::BoundedAlways:
      os << "G<=" << f->bound << ' ';
      print(os, f->kids[0], 5, bar_sensitive);
      break;
    case Op::AllPaths:
      os << "A ";
      print(os, f->kids[0], 5, bar_sensitive);
      break;
    case Op::ExistsPath:
      os << "E ";
      print(os, f->kids[0], 5, bar_sensitive);
      break;
    case Op::And:
      print(os, f->kids[0], 3, bar_sensitive);
      os << " & ";
      print(os, f->kids[1], 4, bar_sensitive);
      break;
    case Op::Or:
      print(os, f->kids[0], 2, bar_sensitive);
      os << " | ";
      print(os, f->kids[1], 3, bar_sensitive);
      break;
    case Op::Implies:
      print(os, f->kids[0], 2, bar_sensitive);
      os << " -> ";
      print(os, f->kids[1], 1, bar_sensitive);
      break;
    case Op::Until:
      print(os, f->kids[0], 5, bar_sensitive);
      os << " U ";
      print(os, f->kids[1], 4, bar_sensitive);
      break;
    case Op::Release:
      print(os, f->kids[0], 5, bar_sensitive);
      os << " R ";
      print(os, f->kids[1], 4, bar_sensitive);
      break;
    case Op::Cstit:
      os << "cstit[" << f->name << ']';
      print_paren(os, f->kids[0]);
      break;
    case Op::Dstit:
      os << "dstit[" << f->name << ']';
      print_paren(os, f->kids[0]);
      break;
    case Op::TookOptimal:
      os << "tookOpt[" << f->name << ']';
      break;
    case Op::Ought:
    case Op::Perm:
      os << (f->op == Op::Ought ? "Ob[" : "Perm[") << f->name << "](";
      print_body(os, f->kids[0]);
      os << ')';
      break;
    case Op::CondOught:
    case Op::CondPerm:
      os << (f->op == Op::CondOught ? "Ob[" : "Perm[") << f->name << "](";
      print_body(os, f->kids[0]);
      os << " | ";
      print(os, f->kids[1], 0, false);
      os << ')';
      break;
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::ostringstream os;
  print(os, f, 0, false);
  return os.str();
}

// ---------------------------------------------------------------------------
// Classification

bool is_pure_temporal(const Formula& f) {
  switch (f->op) {
    case Op::Cstit:
    case Op::Dstit:
    case Op::Ought:
    case Op::CondOught:
    case Op::Perm:
    case Op::CondPerm:
    case Op::DauNext:
    case Op::TookOptimal:
      return false;
    default:
      break;
  }
  return std::all_of(f->kids.begin(), f->kids.end(),
                     [](const Formula& k) { return is_pure_temporal(k); });
}

bool is_state_formula(const Formula& f) {
  switch (f->op) {
    case Op::Atom:
    case Op::True:
    case Op::False:
      return true;
    case Op::Not:
      return is_state_formula(f->kids[0]);
    case Op::And:
    case Op::Or:
    case Op::Implies:
      return is_state_formula(f->kids[0]) && is_state_formula(f->kids[1]);
    case Op::AllPaths:
    case Op::ExistsPath:
      return is_path_formula(f->kids[0]);
    default:
      return false;
  }
}

bool is_path_formula(const Formula& f) { return is_pure_temporal(f); }

FormulaClass classify(const Formula& f) {
  using Tag = FormulaClass::Tag;
  using Kind = FormulaClass::Kind;
  if (is_pure_temporal(f)) return {Tag::CheckerObligation, Kind::PlainTemporal};
  if (f->op == Op::Dstit && is_pure_temporal(f->kids[0]))
    return {Tag::CheckerObligation, Kind::Dstit};
  if (f->op == Op::Not && f->kids[0]->op == Op::Dstit &&
      is_pure_temporal(f->kids[0]->kids[0]))
    return {Tag::CheckerObligation, Kind::NegDstit};
  return {Tag::OracleOnly, Kind::PlainTemporal};
}

FormulaClass classify_role(const Formula& f) {
  using Tag = FormulaClass::Tag;
  if (is_state_formula(f)) return {Tag::StateFormula, FormulaClass::Kind::PlainTemporal};
  if (is_pure_temporal(f)) return {Tag::PathFormula, FormulaClass::Kind::PlainTemporal};
  FormulaClass c = classify(f);
  if (c.tag == Tag::CheckerObligation) return c;
  return {Tag::OracleOnly, FormulaClass::Kind::PlainTemporal};
}

// ---------------------------------------------------------------------------
// Horizon, bounded expansion, negation

std::optional<int> syntactic_horizon(const Formula& f) {
  switch (f->op) {
    case Op::Atom:
    case Op::True:
    case Op::False:
      return 0;
    case Op::Not:
      return syntactic_horizon(f->kids[0]);
    case Op::And:
    case Op::Or:
    case Op::Implies: {
      auto a = syntactic_horizon(f->kids[0]);
      auto b = syntactic_horizon(f->kids[1]);
      if (!a || !b) return std::nullopt;
      return std::max(*a, *b);
    }
    case Op::Next: {
      auto a = syntactic_horizon(f->kids[0]);
      if (!a) return std::nullopt;
      return 1 + *a;
    }
    case Op::BoundedEventually:
    case Op::BoundedAlways: {
      auto a = syntactic_horizon(f->kids[0]);
      if (!a) return std::nullopt;
      return f->bound + *a;
    }
    default:
      return std::nullopt;
  }
}

Formula expand_bounded(const Formula& f) {
  switch (f->op) {
    case Op::BoundedEventually: {
      Formula q = expand_bounded(f->kids[0]);
      Formula acc = q;
      for (int i = 0; i < f->bound; ++i) acc = lor(q, next(acc));
      return acc;
    }
    case Op::BoundedAlways: {
      Formula q = expand_bounded(f->kids[0]);
      Formula acc = q;
      for (int i = 0; i < f->bound; ++i) acc = land(q, next(acc));
      return acc;
    }
    default: {
      if (f->kids.empty()) return f;
      std::vector<Formula> kids;
      kids.reserve(f->kids.size());
      bool changed = false;
      for (const auto& k : f->kids) {
        kids.push_back(expand_bounded(k));
        changed = changed || kids.back().get() != k.get();
      }
      if (!changed) return f;
      return mk(f->op, f->name, f->bound, std::move(kids));
    }
  }
}

Formula negate(const Formula& f) {
  switch (f->op) {
    case Op::True: return falsef();
    case Op::False: return truef();
    case Op::Atom: return lnot(f);
    case Op::Not: return f->kids[0];
    case Op::And: return lor(negate(f->kids[0]), negate(f->kids[1]));
    case Op::Or: return land(negate(f->kids[0]), negate(f->kids[1]));
    case Op::Implies: return land(f->kids[0], negate(f->kids[1]));
    case Op::AllPaths: return expath(negate(f->kids[0]));
    case Op::ExistsPath: return allpaths(negate(f->kids[0]));
    case Op::Next: return next(negate(f->kids[0]));
    case Op::DauNext: return dau_next(negate(f->kids[0]));
    case Op::Eventually: return always(negate(f->kids[0]));
    case Op::Always: return eventually(negate(f->kids[0]));
    case Op::Until: return release(negate(f->kids[0]), negate(f->kids[1]));
    case Op::Release: return until(negate(f->kids[0]), negate(f->kids[1]));
    case Op::BoundedEventually: return bounded_always(f->bound, negate(f->kids[0]));
    case Op::BoundedAlways: return bounded_eventually(f->bound, negate(f->kids[0]));
    default:
      // Deontic operators have no structural dual here; the checker handles
      // Perm/Ought duality itself.
      return lnot(f);
  }
}

}  // namespace dau
