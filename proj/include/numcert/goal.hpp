#ifndef NUMCERT_GOAL_HPP
#define NUMCERT_GOAL_HPP

// Text syntax for goals.
//
//   expr := sum;  sum := prod ('+' prod)*;  prod := atom ('*' atom)*
//   atom := INT | '(' expr ')' | atom '^' INT
//   goal := expr '=' expr | expr '<' expr | expr 'in' (N|N0|C)
//         | 'prime' INT | 'composite' INT | 'gcd(' INT ',' INT ')=' INT
//         | INT '^' INT '==' INT 'mod' INT | '!dvd(' INT ',' INT ')'
//
// Integers up to 10 in expressions are literals; larger ones, and every
// integer in the keyword forms, become canonical numerals.

#include <cctype>
#include <string>
#include <string_view>

#include "numcert/term.hpp"

namespace numcert {

namespace detail {

class GoalParser {
 public:
  explicit GoalParser(std::string_view text) : text_(text) {}

  Statement parse() {
    Statement s = statement();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return s;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(pos_, what); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(std::string_view token) {
    skip_space();
    return text_.substr(pos_, token.size()) == token;
  }

  bool accept(std::string_view token) {
    if (!peek(token)) return false;
    pos_ += token.size();
    return true;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  /// A keyword must not run into a following identifier character.
  bool accept_word(std::string_view word) {
    if (!peek(word)) return false;
    std::size_t end = pos_ + word.size();
    if (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end]))) return false;
    pos_ = end;
    return true;
  }

  bool at_digit() {
    skip_space();
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }

  Integer integer() {
    if (!at_digit()) fail("expected integer");
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return Integer(std::string(text_.substr(start, pos_ - start)));
  }

  static Term expr_int(const Integer& v) {
    return v <= kMaxLiteral ? Term::lit(v.convert_to<int>()) : to_numeral(v);
  }

  Term int_slot() { return to_numeral(integer()); }

  Term expr() {
    Term t = prod();
    while (accept("+")) t = Term::add(t, prod());
    return t;
  }

  Term prod() {
    Term t = atom();
    while (accept("*")) t = Term::mul(t, atom());
    return t;
  }

  Term atom() {
    Term t = primary();
    while (!peek("==") && accept("^")) t = Term::pow(t, primary());
    return t;
  }

  Term primary() {
    if (accept("(")) {
      Term t = expr();
      expect(")");
      return t;
    }
    return expr_int(integer());
  }

  Statement statement() {
    std::size_t start = (skip_space(), pos_);
    if (accept_word("prime")) return Statement::prm(int_slot());
    if (accept_word("composite")) return Statement::nprm(int_slot());
    if (accept("gcd(")) {
      Term a = int_slot();
      expect(",");
      Term b = int_slot();
      expect(")");
      expect("=");
      return Statement::gcd_eq(a, b, int_slot());
    }
    if (accept("!dvd(")) {
      Term a = int_slot();
      expect(",");
      Term b = int_slot();
      expect(")");
      return Statement::ndvd(a, b);
    }
    Term lhs = expr();
    if (accept("==")) {
      if (!lhs.is_pow() || !is_plain_int(lhs.lhs()) || !is_plain_int(lhs.rhs())) {
        pos_ = start;
        fail("modular goal needs INT '^' INT on the left");
      }
      Term residue = int_slot();
      if (!accept_word("mod")) fail("expected 'mod'");
      Term modulus = int_slot();
      return Statement::pmod(canonical(lhs.lhs()), canonical(lhs.rhs()), residue, modulus);
    }
    if (accept("=")) return Statement::eq(lhs, expr());
    if (accept("<")) return Statement::lt(lhs, expr());
    if (accept_word("in")) {
      if (accept_word("N0")) return Statement::el_n0(lhs);
      if (accept_word("N")) return Statement::el_n(lhs);
      if (accept_word("C")) return Statement::el_c(lhs);
      fail("expected N, N0 or C");
    }
    fail("expected '=', '<', '==' or 'in'");
  }

  static bool is_plain_int(const Term& t) { return t.is_lit() || is_numeral(t); }
  static Term canonical(const Term& t) { return to_numeral(eval(t)); }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline bool is_int_slot_term(const Term& t) { return is_numeral(t); }

inline std::string render_int_slot(const Term& t) {
  if (!is_numeral(t)) {
    throw Error(ErrorKind::OutOfDomain, "expected a canonical numeral: " + debug_string(t));
  }
  return eval(t).str();
}

enum class Position { Top, SumRight, ProdLeft, ProdRight, PowBase, PowExp };

inline std::string render_term(const Term& t, Position where) {
  if (t.is_lit()) return std::to_string(t.value());
  if (is_numeral(t) && eval(t) > kMaxLiteral) return eval(t).str();
  std::string out;
  bool parens = false;
  switch (t.kind()) {
    case TermKind::Add:
      out = render_term(t.lhs(), Position::Top) + " + " + render_term(t.rhs(), Position::SumRight);
      parens = where != Position::Top;
      break;
    case TermKind::Mul:
      out = render_term(t.lhs(), Position::ProdLeft) + "*" +
            render_term(t.rhs(), Position::ProdRight);
      parens = where == Position::ProdRight || where == Position::PowBase ||
               where == Position::PowExp;
      break;
    case TermKind::Pow:
      out = render_term(t.lhs(), Position::PowBase) + "^" + render_term(t.rhs(), Position::PowExp);
      parens = where == Position::PowExp;
      break;
    default:
      throw Error(ErrorKind::UnboundVariable, "cannot render a metavariable");
  }
  return parens ? "(" + out + ")" : out;
}

}  // namespace detail

inline Statement parse_goal(std::string_view text) { return detail::GoalParser(text).parse(); }

inline std::string render_term(const Term& t) { return detail::render_term(t, detail::Position::Top); }

/// Inverse of parse_goal: the output reparses to an identical statement.
inline std::string render_goal(const Statement& s) {
  using detail::render_int_slot;
  switch (s.head()) {
    case Head::Eq: return render_term(s.arg(0)) + " = " + render_term(s.arg(1));
    case Head::Lt: return render_term(s.arg(0)) + " < " + render_term(s.arg(1));
    case Head::ElN: return render_term(s.arg(0)) + " in N";
    case Head::ElN0: return render_term(s.arg(0)) + " in N0";
    case Head::ElC: return render_term(s.arg(0)) + " in C";
    case Head::Prm: return "prime " + render_int_slot(s.arg(0));
    case Head::NPrm: return "composite " + render_int_slot(s.arg(0));
    case Head::GcdEq:
      return "gcd(" + render_int_slot(s.arg(0)) + "," + render_int_slot(s.arg(1)) +
             ")=" + render_int_slot(s.arg(2));
    case Head::NDvd:
      return "!dvd(" + render_int_slot(s.arg(0)) + "," + render_int_slot(s.arg(1)) + ")";
    case Head::PMod:
      return render_int_slot(s.arg(0)) + "^" + render_int_slot(s.arg(1)) +
             " == " + render_int_slot(s.arg(2)) + " mod " + render_int_slot(s.arg(3));
  }
  return {};
}

}  // namespace numcert

#endif  // NUMCERT_GOAL_HPP
