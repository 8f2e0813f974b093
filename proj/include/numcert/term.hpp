#ifndef NUMCERT_TERM_HPP
#define NUMCERT_TERM_HPP

// Term and statement languages, canonical base-4 numerals and the
// unbounded-integer semantics used as the test and search oracle.

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "numcert/errors.hpp"

namespace numcert {

using Integer = boost::multiprecision::cpp_int;

inline constexpr int kBase = 4;
inline constexpr int kMaxLiteral = 10;

namespace detail {

constexpr std::size_t mix(std::size_t h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace detail

enum class TermKind : std::uint8_t { Lit, Add, Mul, Pow, Var };

struct TermNode;

/// Immutable arithmetic expression. Copies share structure; equality is
/// structural with a pointer and hash fast path.
class Term {
 public:
  Term() = default;

  static Term lit(int value);
  static Term add(Term lhs, Term rhs);
  static Term mul(Term lhs, Term rhs);
  static Term pow(Term base, Term exponent);
  /// Metavariable, only meaningful inside rule patterns.
  static Term var(int id);
  static Term var(std::string_view name);

  explicit operator bool() const noexcept { return node_ != nullptr; }

  TermKind kind() const noexcept;
  /// Literal value, or metavariable id.
  int value() const noexcept;
  const Term& lhs() const noexcept;
  const Term& rhs() const noexcept;
  std::size_t hash() const noexcept;

  bool is_lit() const noexcept { return node_ && kind() == TermKind::Lit; }
  bool is_lit(int v) const noexcept { return is_lit() && value() == v; }
  bool is_add() const noexcept { return node_ && kind() == TermKind::Add; }
  bool is_mul() const noexcept { return node_ && kind() == TermKind::Mul; }
  bool is_pow() const noexcept { return node_ && kind() == TermKind::Pow; }
  bool is_var() const noexcept { return node_ && kind() == TermKind::Var; }

  bool same_node(const Term& other) const noexcept {
    return node_ == other.node_;
  }
  const TermNode* get() const noexcept { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b) noexcept;

 private:
  explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}
  static Term make(TermKind kind, int value, Term lhs, Term rhs);

  std::shared_ptr<const TermNode> node_;
};

struct TermNode {
  TermKind kind;
  int value;
  std::size_t hash;
  Term lhs;
  Term rhs;
};

inline TermKind Term::kind() const noexcept { return node_->kind; }
inline int Term::value() const noexcept { return node_->value; }
inline const Term& Term::lhs() const noexcept { return node_->lhs; }
inline const Term& Term::rhs() const noexcept { return node_->rhs; }
inline std::size_t Term::hash() const noexcept { return node_ ? node_->hash : 0; }

inline Term Term::make(TermKind kind, int value, Term lhs, Term rhs) {
  std::size_t h = detail::mix(static_cast<std::size_t>(kind) + 1,
                              static_cast<std::size_t>(value));
  h = detail::mix(h, lhs.hash());
  h = detail::mix(h, rhs.hash());
  return Term(std::make_shared<const TermNode>(
      TermNode{kind, value, h, std::move(lhs), std::move(rhs)}));
}

inline Term Term::lit(int value) {
  if (value < 0 || value > kMaxLiteral) {
    throw Error(ErrorKind::OutOfRange,
                "literal " + std::to_string(value) + " outside [0,10]");
  }
  static const std::array<Term, kMaxLiteral + 1> literals = [] {
    std::array<Term, kMaxLiteral + 1> out;
    for (int v = 0; v <= kMaxLiteral; ++v) out[v] = make(TermKind::Lit, v, {}, {});
    return out;
  }();
  return literals[static_cast<std::size_t>(value)];
}

inline Term Term::add(Term lhs, Term rhs) {
  return make(TermKind::Add, 0, std::move(lhs), std::move(rhs));
}
inline Term Term::mul(Term lhs, Term rhs) {
  return make(TermKind::Mul, 0, std::move(lhs), std::move(rhs));
}
inline Term Term::pow(Term base, Term exponent) {
  return make(TermKind::Pow, 0, std::move(base), std::move(exponent));
}
inline Term Term::var(int id) { return make(TermKind::Var, id, {}, {}); }

inline bool operator==(const Term& a, const Term& b) noexcept {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->hash != b.node_->hash) return false;
  if (a.kind() != b.kind() || a.value() != b.value()) return false;
  return a.lhs() == b.lhs() && a.rhs() == b.rhs();
}

/// The Horner step 4*prefix + digit.
inline Term horner(Term prefix, Term digit) {
  return Term::add(Term::mul(Term::lit(kBase), std::move(prefix)), std::move(digit));
}

// Metavariable names are interned process-wide so that patterns can carry a
// small integer id.
namespace detail {

struct MetaNames {
  std::mutex mutex;
  std::vector<std::string> names;
};

inline MetaNames& meta_names() {
  static MetaNames table;
  return table;
}

}  // namespace detail

inline int meta_id(std::string_view name) {
  auto& table = detail::meta_names();
  std::lock_guard lock(table.mutex);
  for (std::size_t i = 0; i < table.names.size(); ++i) {
    if (table.names[i] == name) return static_cast<int>(i);
  }
  table.names.emplace_back(name);
  return static_cast<int>(table.names.size() - 1);
}

inline std::string meta_name(int id) {
  auto& table = detail::meta_names();
  std::lock_guard lock(table.mutex);
  if (id < 0 || static_cast<std::size_t>(id) >= table.names.size()) {
    return "?" + std::to_string(id);
  }
  return table.names[static_cast<std::size_t>(id)];
}

inline Term Term::var(std::string_view name) { return var(meta_id(name)); }

// ---------------------------------------------------------------------------
// Statements

enum class Head : std::uint8_t { Eq, Lt, ElN, ElN0, ElC, NDvd, NPrm, Prm, GcdEq, PMod };

inline constexpr std::array<Head, 10> kAllHeads = {
    Head::Eq,   Head::Lt,   Head::ElN, Head::ElN0,  Head::ElC,
    Head::NDvd, Head::NPrm, Head::Prm, Head::GcdEq, Head::PMod};

constexpr int arity(Head head) {
  switch (head) {
    case Head::Eq:
    case Head::Lt:
    case Head::NDvd: return 2;
    case Head::ElN:
    case Head::ElN0:
    case Head::ElC:
    case Head::NPrm:
    case Head::Prm: return 1;
    case Head::GcdEq: return 3;
    case Head::PMod: return 4;
  }
  return 0;
}

constexpr std::string_view head_name(Head head) {
  switch (head) {
    case Head::Eq: return "eq";
    case Head::Lt: return "lt";
    case Head::ElN: return "elN";
    case Head::ElN0: return "elN0";
    case Head::ElC: return "elC";
    case Head::NDvd: return "ndvd";
    case Head::NPrm: return "nprm";
    case Head::Prm: return "prm";
    case Head::GcdEq: return "gcdeq";
    case Head::PMod: return "pmod";
  }
  return "";
}

inline std::optional<Head> head_from_name(std::string_view name) {
  for (Head h : kAllHeads) {
    if (head_name(h) == name) return h;
  }
  return std::nullopt;
}

class Statement {
 public:
  Statement() = default;
  Statement(Head head, std::initializer_list<Term> args) : head_(head) {
    if (static_cast<int>(args.size()) != numcert::arity(head)) {
      throw Error(ErrorKind::SchemaError,
                  std::string("wrong argument count for ") +
                      std::string(head_name(head)));
    }
    std::size_t i = 0;
    for (const Term& t : args) args_[i++] = t;
  }

  static Statement eq(Term a, Term b) { return {Head::Eq, {std::move(a), std::move(b)}}; }
  static Statement lt(Term a, Term b) { return {Head::Lt, {std::move(a), std::move(b)}}; }
  static Statement el_n(Term a) { return {Head::ElN, {std::move(a)}}; }
  static Statement el_n0(Term a) { return {Head::ElN0, {std::move(a)}}; }
  static Statement el_c(Term a) { return {Head::ElC, {std::move(a)}}; }
  static Statement ndvd(Term a, Term b) { return {Head::NDvd, {std::move(a), std::move(b)}}; }
  static Statement nprm(Term n) { return {Head::NPrm, {std::move(n)}}; }
  static Statement prm(Term n) { return {Head::Prm, {std::move(n)}}; }
  static Statement gcd_eq(Term a, Term b, Term g) {
    return {Head::GcdEq, {std::move(a), std::move(b), std::move(g)}};
  }
  static Statement pmod(Term base, Term exponent, Term residue, Term modulus) {
    return {Head::PMod,
            {std::move(base), std::move(exponent), std::move(residue), std::move(modulus)}};
  }

  Head head() const noexcept { return head_; }
  int arity() const noexcept { return numcert::arity(head_); }
  const Term& arg(int i) const noexcept { return args_[static_cast<std::size_t>(i)]; }
  std::span<const Term> args() const noexcept {
    return {args_.data(), static_cast<std::size_t>(arity())};
  }

  std::size_t hash() const noexcept {
    std::size_t h = static_cast<std::size_t>(head_) * 0x100000001b3ULL;
    for (const Term& t : args()) h = detail::mix(h, t.hash());
    return h;
  }

  friend bool operator==(const Statement& a, const Statement& b) noexcept {
    if (a.head_ != b.head_) return false;
    for (int i = 0; i < a.arity(); ++i) {
      if (!(a.arg(i) == b.arg(i))) return false;
    }
    return true;
  }

 private:
  Head head_ = Head::Eq;
  std::array<Term, 4> args_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept { return t.hash(); }
};
struct StatementHash {
  std::size_t operator()(const Statement& s) const noexcept { return s.hash(); }
};

// ---------------------------------------------------------------------------
// Semantics

inline bool contains_pow(const Term& t) {
  if (!t) return false;
  switch (t.kind()) {
    case TermKind::Pow: return true;
    case TermKind::Add:
    case TermKind::Mul: return contains_pow(t.lhs()) || contains_pow(t.rhs());
    default: return false;
  }
}

inline bool is_ground(const Term& t) {
  if (!t) return false;
  switch (t.kind()) {
    case TermKind::Lit: return true;
    case TermKind::Var: return false;
    default: return is_ground(t.lhs()) && is_ground(t.rhs());
  }
}

inline bool is_ground(const Statement& s) {
  for (const Term& t : s.args()) {
    if (!is_ground(t)) return false;
  }
  return true;
}

/// Largest exponent the oracle will expand directly.
inline constexpr unsigned kMaxEvalExponent = 1u << 16;

inline Integer eval(const Term& t) {
  switch (t.kind()) {
    case TermKind::Lit: return Integer(t.value());
    case TermKind::Add: return eval(t.lhs()) + eval(t.rhs());
    case TermKind::Mul: return eval(t.lhs()) * eval(t.rhs());
    case TermKind::Pow: {
      Integer e = eval(t.rhs());
      if (e > kMaxEvalExponent) {
        throw Error(ErrorKind::OutOfDomain, "exponent too large to evaluate");
      }
      return boost::multiprecision::pow(eval(t.lhs()), e.convert_to<unsigned>());
    }
    case TermKind::Var:
      throw Error(ErrorKind::UnboundVariable, "metavariable " + meta_name(t.value()));
  }
  return 0;
}

inline Term to_numeral(const Integer& k) {
  if (k < 0) throw Error(ErrorKind::OutOfDomain, "negative integer");
  if (k < kBase) return Term::lit(k.convert_to<int>());
  std::vector<int> digits;
  Integer rest = k;
  while (rest > 0) {
    digits.push_back(static_cast<int>(rest % kBase));
    rest /= kBase;
  }
  Term t = Term::lit(digits.back());
  for (auto it = digits.rbegin() + 1; it != digits.rend(); ++it) {
    t = horner(std::move(t), Term::lit(*it));
  }
  return t;
}

inline Term to_numeral(std::uint64_t k) {
  if (k < kBase) return Term::lit(static_cast<int>(k));
  return horner(to_numeral(k / kBase), Term::lit(static_cast<int>(k % kBase)));
}

inline Term to_numeral(int k) {
  if (k < 0) throw Error(ErrorKind::OutOfDomain, "negative integer");
  return to_numeral(static_cast<std::uint64_t>(k));
}

enum class NumeralMode { canonical, extended };

namespace detail {

inline bool is_digit_lit(const Term& t) { return t.is_lit() && t.value() < kBase; }

inline bool horner_parts(const Term& t, Term& prefix, Term& digit) {
  if (!t.is_add() || !t.lhs().is_mul() || !t.lhs().lhs().is_lit(kBase)) return false;
  prefix = t.lhs().rhs();
  digit = t.rhs();
  return true;
}

}  // namespace detail

/// Canonical: 0..3, or 4n+a with n a nonzero numeral and a a digit.
/// Extended also admits 4..10 in the most significant position and the
/// zero-dropped form 4n.
inline bool is_numeral(const Term& t, NumeralMode mode = NumeralMode::canonical) {
  if (!t) return false;
  if (t.is_lit()) {
    return mode == NumeralMode::extended ? true : t.value() < kBase;
  }
  Term prefix, digit;
  if (detail::horner_parts(t, prefix, digit)) {
    return detail::is_digit_lit(digit) && !prefix.is_lit(0) && is_numeral(prefix, mode);
  }
  if (mode == NumeralMode::extended && t.is_mul() && t.lhs().is_lit(kBase)) {
    return !t.rhs().is_lit(0) && is_numeral(t.rhs(), mode);
  }
  return false;
}

inline bool is_prime(const Integer& n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (Integer d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

inline Integer gcd(Integer a, Integer b) {
  while (b != 0) {
    Integer r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline Integer powmod(Integer base, Integer exponent, const Integer& modulus) {
  if (modulus == 1) return 0;
  Integer result = 1;
  base %= modulus;
  while (exponent > 0) {
    if ((exponent & 1) != 0) result = result * base % modulus;
    base = base * base % modulus;
    exponent >>= 1;
  }
  return result;
}

/// Truth under standard arithmetic on nonnegative integers. Non-ground
/// statements are never true.
inline bool statement_holds(const Statement& s) {
  if (!is_ground(s)) return false;
  auto value = [&](int i) { return eval(s.arg(i)); };
  try {
    switch (s.head()) {
      case Head::Eq: return value(0) == value(1);
      case Head::Lt: return value(0) < value(1);
      case Head::ElN: return value(0) >= 1;
      case Head::ElN0:
      case Head::ElC: return true;
      case Head::NDvd: {
        Integer a = value(0), b = value(1);
        if (a == 0) return b != 0;
        return b % a != 0;
      }
      case Head::NPrm: return !is_prime(value(0));
      case Head::Prm: return is_prime(value(0));
      case Head::GcdEq: return gcd(value(0), value(1)) == value(2);
      case Head::PMod: {
        Integer n = value(3);
        if (n == 0) return false;
        return powmod(value(0), value(1), n) == value(2) % n;
      }
    }
  } catch (const Error&) {
    return false;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Compact prefix rendering (pl/tm/exp heads), used in diagnostics.

inline std::string debug_string(const Term& t) {
  if (!t) return "<null>";
  switch (t.kind()) {
    case TermKind::Lit: return std::to_string(t.value());
    case TermKind::Var: return meta_name(t.value());
    case TermKind::Add: return "pl[" + debug_string(t.lhs()) + "," + debug_string(t.rhs()) + "]";
    case TermKind::Mul: return "tm[" + debug_string(t.lhs()) + "," + debug_string(t.rhs()) + "]";
    case TermKind::Pow: return "exp[" + debug_string(t.lhs()) + "," + debug_string(t.rhs()) + "]";
  }
  return "";
}

inline std::string debug_string(const Statement& s) {
  std::string out(head_name(s.head()));
  out += '[';
  for (int i = 0; i < s.arity(); ++i) {
    if (i) out += ',';
    out += debug_string(s.arg(i));
  }
  out += ']';
  return out;
}

}  // namespace numcert

#endif  // NUMCERT_TERM_HPP
