#ifndef NUMCERT_RULES_HPP
#define NUMCERT_RULES_HPP

// Inference-rule schemas and the one-sided first-order matcher shared by
// synthesis and checking.

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "numcert/term.hpp"

namespace numcert {

/// Finite map from metavariable id to ground term.
class Substitution {
 public:
  const Term* find(int var) const noexcept {
    for (const auto& [id, term] : bindings_) {
      if (id == var) return &term;
    }
    return nullptr;
  }

  void bind(int var, Term term) { bindings_.emplace_back(var, std::move(term)); }

  std::size_t size() const noexcept { return bindings_.size(); }
  bool empty() const noexcept { return bindings_.empty(); }

  const std::vector<std::pair<int, Term>>& bindings() const noexcept { return bindings_; }

  /// Order-insensitive comparison.
  friend bool operator==(const Substitution& a, const Substitution& b) {
    if (a.size() != b.size()) return false;
    for (const auto& [id, term] : a.bindings_) {
      const Term* other = b.find(id);
      if (!other || !(*other == term)) return false;
    }
    return true;
  }

 private:
  std::vector<std::pair<int, Term>> bindings_;
};

namespace detail {

inline bool match_into(const Term& pattern, const Term& subject, Substitution& s) {
  if (!subject) return false;
  if (pattern.is_var()) {
    if (const Term* bound = s.find(pattern.value())) return *bound == subject;
    s.bind(pattern.value(), subject);
    return true;
  }
  if (pattern.kind() != subject.kind()) return false;
  if (pattern.is_lit()) return pattern.value() == subject.value();
  return match_into(pattern.lhs(), subject.lhs(), s) &&
         match_into(pattern.rhs(), subject.rhs(), s);
}

inline bool match_into(const Statement& pattern, const Statement& subject, Substitution& s) {
  if (pattern.head() != subject.head()) return false;
  for (int i = 0; i < pattern.arity(); ++i) {
    if (!match_into(pattern.arg(i), subject.arg(i), s)) return false;
  }
  return true;
}

}  // namespace detail

/// Extends `s` so that pattern[s] == subject. Repeated metavariables must
/// bind structurally identical terms.
inline std::optional<Substitution> match(const Term& pattern, const Term& subject,
                                         Substitution s = {}) {
  if (!detail::match_into(pattern, subject, s)) return std::nullopt;
  return s;
}

inline std::optional<Substitution> match(const Statement& pattern, const Statement& subject,
                                         Substitution s = {}) {
  if (!detail::match_into(pattern, subject, s)) return std::nullopt;
  return s;
}

inline Term instantiate(const Term& pattern, const Substitution& s) {
  switch (pattern.kind()) {
    case TermKind::Lit: return pattern;
    case TermKind::Var: {
      const Term* bound = s.find(pattern.value());
      if (!bound) {
        throw Error(ErrorKind::UnboundVariable, "metavariable " + meta_name(pattern.value()));
      }
      return *bound;
    }
    case TermKind::Add: return Term::add(instantiate(pattern.lhs(), s), instantiate(pattern.rhs(), s));
    case TermKind::Mul: return Term::mul(instantiate(pattern.lhs(), s), instantiate(pattern.rhs(), s));
    case TermKind::Pow: return Term::pow(instantiate(pattern.lhs(), s), instantiate(pattern.rhs(), s));
  }
  return pattern;
}

inline Statement instantiate(const Statement& pattern, const Substitution& s) {
  switch (pattern.arity()) {
    case 1: return Statement(pattern.head(), {instantiate(pattern.arg(0), s)});
    case 2:
      return Statement(pattern.head(),
                       {instantiate(pattern.arg(0), s), instantiate(pattern.arg(1), s)});
    case 3:
      return Statement(pattern.head(), {instantiate(pattern.arg(0), s),
                                        instantiate(pattern.arg(1), s),
                                        instantiate(pattern.arg(2), s)});
    case 4:
      return Statement(pattern.head(),
                       {instantiate(pattern.arg(0), s), instantiate(pattern.arg(1), s),
                        instantiate(pattern.arg(2), s), instantiate(pattern.arg(3), s)});
  }
  return pattern;
}

inline void collect_vars(const Term& t, std::vector<int>& out) {
  if (!t) return;
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t.value()) == out.end()) out.push_back(t.value());
    return;
  }
  if (t.is_lit()) return;
  collect_vars(t.lhs(), out);
  collect_vars(t.rhs(), out);
}

inline void collect_vars(const Statement& s, std::vector<int>& out) {
  for (const Term& t : s.args()) collect_vars(t, out);
}

struct RuleSchema {
  std::string label;
  std::vector<Statement> hyps;
  Statement concl;

  /// Metavariables in binding order: conclusion first, then hypotheses.
  std::vector<int> meta_vars() const {
    std::vector<int> out;
    collect_vars(concl, out);
    for (const Statement& h : hyps) collect_vars(h, out);
    return out;
  }
};

/// Trial-division stage bounds and the primes each stage divides by.
inline constexpr int kStage1Bound = 25;
inline constexpr int kStage2Bound = 841;
inline constexpr std::array<int, 2> kStage1Primes = {2, 3};
inline constexpr std::array<int, 9> kStage2Primes = {2, 3, 5, 7, 11, 13, 17, 19, 23};

class Registry {
 public:
  const RuleSchema* find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    return it == index_.end() ? nullptr : &rules_[it->second];
  }

  const RuleSchema& lookup(std::string_view label) const {
    const RuleSchema* rule = find(label);
    if (!rule) throw Error(ErrorKind::UnknownRule, std::string(label));
    return *rule;
  }

  std::span<const RuleSchema> rules() const noexcept { return rules_; }

  static const Registry& instance() {
    static const Registry registry = build();
    return registry;
  }

 private:
  void add(std::string label, std::vector<Statement> hyps, Statement concl) {
    index_.emplace(label, rules_.size());
    rules_.push_back(RuleSchema{std::move(label), std::move(hyps), std::move(concl)});
  }

  static Registry build();

  std::vector<RuleSchema> rules_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline const Registry& registry() { return Registry::instance(); }

inline const RuleSchema& lookup(std::string_view label) { return registry().lookup(label); }

/// Label of the literal sum fact m+n=k (2 <= n <= m).
inline std::string sum_fact_label(int m, int n) {
  return std::to_string(m) + "p" + std::to_string(n) + "e" + std::to_string(m + n);
}
/// Label of the literal product fact m*n=k (2 <= n <= m).
inline std::string product_fact_label(int m, int n) {
  return std::to_string(m) + "t" + std::to_string(n) + "e" + std::to_string(m * n);
}
inline std::string order_fact_label(int x, int y) {
  return std::to_string(x) + "lt" + std::to_string(y);
}

inline Registry Registry::build() {
  Registry r;
  auto v = [](std::string_view name) { return Term::var(name); };
  auto n = [](int k) { return Term::lit(k); };
  auto dec = [](Term a, Term b) { return horner(std::move(a), std::move(b)); };
  auto add = [](Term a, Term b) { return Term::add(std::move(a), std::move(b)); };
  auto mul = [](Term a, Term b) { return Term::mul(std::move(a), std::move(b)); };
  auto pw = [](Term a, Term b) { return Term::pow(std::move(a), std::move(b)); };
  using S = Statement;

  const Term A = v("A"), B = v("B"), C = v("C"), D = v("D"), E = v("E"), F = v("F"),
             G = v("G"), K = v("K"), L = v("L"), M = v("M"), N = v("N"), P = v("P"),
             Q = v("Q"), R = v("R");

  // Literal closure facts.
  for (int k = 0; k <= 4; ++k) r.add(std::to_string(k) + "nn0", {}, S::el_n0(n(k)));
  for (int k = 1; k <= kMaxLiteral; ++k) r.add(std::to_string(k) + "nn", {}, S::el_n(n(k)));
  r.add("nnnn0i", {S::el_n(A)}, S::el_n0(A));
  r.add("nn0addcli", {S::el_n0(A), S::el_n0(B)}, S::el_n0(add(A, B)));
  r.add("nn0mulcli", {S::el_n0(A), S::el_n0(B)}, S::el_n0(mul(A, B)));
  r.add("nn0cni", {S::el_n0(A)}, S::el_c(A));

  // Numeral closure.
  r.add("decclc", {S::el_n0(M), S::el_n0(A)}, S::el_n0(dec(M, A)));
  r.add("decnncl", {S::el_n(M)}, S::el_n(mul(n(4), M)));
  r.add("decnncl2", {S::el_n(M)}, S::el_n(dec(M, n(0))));
  r.add("decnnclc", {S::el_n0(M), S::el_n(A)}, S::el_n(dec(M, A)));
  r.add("eqeltri", {S::eq(A, B), S::el_n(B)}, S::el_n(A));

  // Extended-numeral conversions.
  for (int k = 4; k <= kMaxLiteral; ++k) {
    r.add("dec" + std::to_string(k), {}, S::eq(dec(n(k / 4), n(k % 4)), n(k)));
  }
  r.add("dec0u", {S::el_n0(N)}, S::eq(dec(N, n(0)), mul(n(4), N)));
  r.add("dec0h", {S::el_n0(A)}, S::eq(dec(n(0), A), A));

  // Ordering.
  r.add("declti", {S::el_n(A), S::el_n0(B), S::el_n0(C), S::lt(C, n(4))},
        S::lt(C, dec(A, B)));
  r.add("declt", {S::el_n0(A), S::el_n0(B), S::el_n(C), S::lt(B, C)},
        S::lt(dec(A, B), dec(A, C)));
  r.add("decltc",
        {S::el_n0(A), S::el_n0(B), S::el_n0(C), S::el_n0(D), S::lt(B, n(4)), S::lt(A, C)},
        S::lt(dec(A, B), dec(C, D)));
  for (int x = 0; x <= kMaxLiteral; ++x) {
    for (int y = x + 1; y <= kMaxLiteral; ++y) r.add(order_fact_label(x, y), {}, S::lt(n(x), n(y)));
  }
  r.add("breqtri", {S::lt(A, B), S::eq(B, C)}, S::lt(A, C));
  r.add("eqbrtrri", {S::eq(A, B), S::lt(A, C)}, S::lt(B, C));

  // Successor.
  r.add("decsuc", {S::el_n0(A), S::el_n0(B), S::eq(C, add(B, n(1))), S::eq(dec(A, B), N)},
        S::eq(dec(A, C), add(N, n(1))));
  r.add("decsucc2", {S::el_n0(A), S::eq(B, add(A, n(1))), S::eq(dec(A, n(3)), N)},
        S::eq(dec(B, n(0)), add(N, n(1))));

  // Addition.
  r.add("decadd",
        {S::el_n0(A), S::el_n0(B), S::el_n0(C), S::el_n0(D), S::eq(dec(A, B), M),
         S::eq(dec(C, D), N), S::eq(E, add(A, C)), S::eq(F, add(B, D))},
        S::eq(dec(E, F), add(M, N)));
  r.add("decaddc",
        {S::el_n0(A), S::el_n0(B), S::el_n0(C), S::el_n0(D), S::el_n0(F), S::eq(dec(A, B), M),
         S::eq(dec(C, D), N), S::eq(E, add(add(A, C), n(1))), S::eq(add(n(4), F), add(B, D))},
        S::eq(dec(E, F), add(M, N)));

  // Multiplication.
  r.add("decmac",
        {S::el_n0(A), S::el_n0(B), S::el_n0(C), S::el_n0(D), S::el_n0(P), S::el_n0(F),
         S::el_n0(G), S::eq(dec(A, B), M), S::eq(dec(C, D), N),
         S::eq(E, add(mul(A, P), add(C, G))), S::eq(dec(G, F), add(mul(B, P), D))},
        S::eq(dec(E, F), add(mul(M, P), N)));
  r.add("decma2c",
        {S::el_n0(A), S::el_n0(B), S::el_n0(C), S::el_n0(D), S::el_n0(M), S::el_n0(F),
         S::el_n0(G), S::eq(dec(A, B), P), S::eq(dec(C, D), N),
         S::eq(E, add(mul(M, A), add(C, G))), S::eq(dec(G, F), add(mul(M, B), D))},
        S::eq(dec(E, F), add(mul(M, P), N)));
  r.add("decmul1c",
        {S::el_n0(A), S::el_n0(B), S::el_n0(P), S::el_n0(F), S::el_n0(G), S::eq(dec(A, B), M),
         S::eq(E, add(mul(A, P), G)), S::eq(dec(G, F), mul(B, P))},
        S::eq(dec(E, F), mul(M, P)));
  r.add("decmul2c",
        {S::el_n0(A), S::el_n0(B), S::el_n0(M), S::el_n0(F), S::el_n0(G), S::eq(dec(A, B), P),
         S::eq(E, add(mul(M, A), G)), S::eq(dec(G, F), mul(M, B))},
        S::eq(dec(E, F), mul(M, P)));

  // Equality glue and field identities.
  r.add("eqid", {}, S::eq(A, A));
  r.add("eqcomi", {S::eq(A, B)}, S::eq(B, A));
  r.add("eqtri", {S::eq(A, B), S::eq(B, C)}, S::eq(A, C));
  r.add("eqtr3i", {S::eq(A, B), S::eq(A, C)}, S::eq(B, C));
  r.add("addid1i", {S::el_c(A)}, S::eq(add(A, n(0)), A));
  r.add("addid2i", {S::el_c(A)}, S::eq(add(n(0), A), A));
  r.add("mulid1i", {S::el_c(A)}, S::eq(mul(A, n(1)), A));
  r.add("mulid2i", {S::el_c(A)}, S::eq(mul(n(1), A), A));
  r.add("mul01i", {S::el_c(A)}, S::eq(mul(A, n(0)), n(0)));
  r.add("mul02i", {S::el_c(A)}, S::eq(mul(n(0), A), n(0)));
  r.add("addcomi", {S::el_c(A), S::el_c(B)}, S::eq(add(A, B), add(B, A)));
  r.add("mulcomi", {S::el_c(A), S::el_c(B)}, S::eq(mul(A, B), mul(B, A)));
  for (int k = 2; k <= kMaxLiteral; ++k) {
    r.add("df-" + std::to_string(k), {}, S::eq(n(k), add(n(k - 1), n(1))));
  }
  for (int a = 2; a <= kMaxLiteral; ++a) {
    for (int b = 2; b <= a; ++b) {
      if (a + b <= kMaxLiteral) r.add(sum_fact_label(a, b), {}, S::eq(add(n(a), n(b)), n(a + b)));
      if (a * b <= kMaxLiteral) {
        r.add(product_fact_label(a, b), {}, S::eq(mul(n(a), n(b)), n(a * b)));
      }
    }
  }

  // Divisibility and primality.
  r.add("ndvdsi",
        {S::el_n0(Q), S::el_n(A), S::el_n(R), S::eq(B, add(mul(A, Q), R)), S::lt(R, A)},
        S::ndvd(A, B));
  r.add("nprmi",
        {S::el_n(A), S::el_n(B), S::lt(n(1), A), S::lt(n(1), B), S::eq(N, mul(A, B))},
        S::nprm(N));
  r.add("dec2dvds1", {S::el_n0(A)}, S::ndvd(n(2), dec(A, n(1))));
  r.add("dec2dvds3", {S::el_n0(A)}, S::ndvd(n(2), dec(A, n(3))));
  r.add("dec2nprm", {S::el_n(A)}, S::nprm(dec(A, n(2))));
  r.add("prm2", {}, S::prm(n(2)));
  r.add("prm3", {}, S::prm(n(3)));
  {
    std::vector<S> hyps = {S::el_n(N), S::lt(n(1), N), S::lt(N, to_numeral(kStage1Bound))};
    for (int p : kStage1Primes) hyps.push_back(S::ndvd(to_numeral(p), N));
    r.add("prmlt25", std::move(hyps), S::prm(N));
  }
  {
    std::vector<S> hyps = {S::el_n(N), S::lt(n(1), N), S::lt(N, to_numeral(kStage2Bound))};
    for (int p : kStage2Primes) hyps.push_back(S::ndvd(to_numeral(p), N));
    r.add("prmlt841", std::move(hyps), S::prm(N));
  }
  r.add("gcdi",
        {S::el_n0(K), S::el_n0(R), S::el_n0(N), S::eq(M, add(mul(K, N), R)), S::gcd_eq(N, R, G)},
        S::gcd_eq(M, N, G));
  r.add("gcdn1", {S::el_n0(N)}, S::gcd_eq(N, n(1), n(1)));
  r.add("gcdn0", {S::el_n0(N)}, S::gcd_eq(N, n(0), N));

  // Modular exponentiation.
  r.add("pm1",
        {S::el_n0(A), S::el_n(N), S::el_n0(Q), S::el_n0(R), S::eq(A, add(mul(Q, N), R)),
         S::lt(R, N)},
        S::pmod(A, n(1), R, N));
  r.add("modxai",
        {S::el_n(N), S::el_n0(D), S::el_n0(M), S::el_n0(K), S::el_n0(L), S::eq(E, add(B, C)),
         S::eq(add(mul(D, N), M), mul(K, L)), S::pmod(A, B, K, N), S::pmod(A, C, L, N)},
        S::pmod(A, E, M, N));
  r.add("exp1", {}, S::eq(pw(P, n(1)), P));
  r.add("expsucci", {S::eq(K, pw(P, E)), S::eq(L, mul(K, P)), S::eq(F, add(E, n(1)))},
        S::eq(L, pw(P, F)));

  // Pocklington. The displayed form writes gcd(a^g-1,N)=1; without
  // subtraction it reads C+1 = a^g and gcd(C,N)=1.
  r.add("pockthi",
        {S::prm(P), S::el_n(G), S::el_n(B), S::el_n(E), S::el_n(A), S::eq(M, mul(G, P)),
         S::eq(N, add(M, n(1))), S::eq(M, mul(B, pw(P, E))), S::lt(B, pw(P, E)),
         S::pmod(A, M, n(1), N), S::eq(add(C, n(1)), pw(A, G)), S::gcd_eq(C, N, n(1))},
        S::prm(N));
  r.add("pockthi-variant",
        {S::prm(P), S::el_n(G), S::el_n(B), S::el_n(E), S::el_n(A), S::eq(M, mul(G, P)),
         S::eq(N, add(M, n(1))), S::eq(M, mul(B, pw(P, E))), S::lt(B, pw(P, E)),
         S::pmod(A, M, n(1), N), S::pmod(A, G, K, N), S::eq(K, add(L, n(1))), S::el_n(L),
         S::gcd_eq(N, L, n(1))},
        S::prm(N));
  return r;
}

}  // namespace numcert

#endif  // NUMCERT_RULES_HPP
