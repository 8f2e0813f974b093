#ifndef NUMCERT_SYNTH_ARITH_HPP
#define NUMCERT_SYNTH_ARITH_HPP

// Constructive proofs of closure, ordering, successor, addition and
// multiplication goals over base-4 numerals.

#include <array>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "numcert/proof.hpp"
#include "numcert/rules.hpp"
#include "numcert/term.hpp"

namespace numcert {

/// An alternative spelling of a numeral: `proof` proves Eq(numeral, term).
struct Alias {
  Term term;
  Proof proof;
};

/// Result of writing a numeral n as 4a+b: `proof` proves Eq(4a+b, n).
struct Promotion {
  Term prefix;
  Term digit;
  Proof proof;
};

/// Proof synthesizer. Holds a memo table of sub-proofs, so repeated
/// sub-goals share one node; call clear() to release it. Not thread-safe;
/// use one instance per thread.
class Prover {
 public:
  Proof reflexivity(const Term& t) {
    return memo(Tag::Refl, {t}, {}, [&] { return node("eqid", Statement::eq(t, t)); });
  }

  Alias identity(const Term& t) { return Alias{t, reflexivity(t)}; }

  /// Eq(<eval x>, x) for x a sum or product of two literals with value <= 10.
  Proof basic_eq(const Term& x) {
    if (!(x.is_add() || x.is_mul()) || !x.lhs().is_lit() || !x.rhs().is_lit()) {
      throw Error(ErrorKind::OutOfRange, "basic fact needs two literal operands: " + debug_string(x));
    }
    int a = x.lhs().value(), b = x.rhs().value();
    int v = x.is_add() ? a + b : a * b;
    if (v > kMaxLiteral) throw Error(ErrorKind::OutOfRange, debug_string(x) + " exceeds 10");
    return memo(Tag::Basic, {x}, {}, [&] { return basic_eq_impl(x, a, b, v); });
  }

  Proof prove_mem_n0(const Term& t) {
    return memo(Tag::ElN0, {t}, {}, [&]() -> Proof {
      Statement goal = Statement::el_n0(t);
      Term prefix, digit;
      switch (t.kind()) {
        case TermKind::Lit:
          if (t.value() <= 4) return node(std::to_string(t.value()) + "nn0", goal);
          return node("nnnn0i", goal, {prove_mem_n(t)});
        case TermKind::Add:
          if (detail::horner_parts(t, prefix, digit)) {
            return node("decclc", goal, {prove_mem_n0(prefix), prove_mem_n0(digit)});
          }
          return node("nn0addcli", goal, {prove_mem_n0(t.lhs()), prove_mem_n0(t.rhs())});
        case TermKind::Mul:
          return node("nn0mulcli", goal, {prove_mem_n0(t.lhs()), prove_mem_n0(t.rhs())});
        default:
          throw Error(ErrorKind::OutOfDomain, "no closure proof for " + debug_string(t));
      }
    });
  }

  Proof prove_mem_n(const Term& t) {
    return memo(Tag::ElN, {t}, {}, [&]() -> Proof {
      if (contains_pow(t) || !is_ground(t)) {
        throw Error(ErrorKind::OutOfDomain, "no closure proof for " + debug_string(t));
      }
      if (eval(t) == 0) throw Error(ErrorKind::ZeroValue, debug_string(t));
      Statement goal = Statement::el_n(t);
      Term prefix, digit;
      if (t.is_lit()) return node(std::to_string(t.value()) + "nn", goal);
      if (detail::horner_parts(t, prefix, digit)) {
        if (digit.is_lit(0)) {
          Term zero_dropped = Term::mul(Term::lit(kBase), prefix);
          Proof conv = node("dec0u", Statement::eq(t, zero_dropped), {prove_mem_n0(prefix)});
          Proof inner = node("decnncl", Statement::el_n(zero_dropped), {prove_mem_n(prefix)});
          return node("eqeltri", goal, {conv, inner});
        }
        if (eval(digit) >= 1) {
          return node("decnnclc", goal, {prove_mem_n0(prefix), prove_mem_n(digit)});
        }
      }
      if (t.is_mul() && t.lhs().is_lit(kBase)) {
        return node("decnncl", goal, {prove_mem_n(t.rhs())});
      }
      Proof to_numeral_pf = numeralize(t);
      return node("eqeltri", goal, {eqcomi(to_numeral_pf), prove_mem_n(lhs(to_numeral_pf))});
    });
  }

  Proof prove_mem_c(const Term& t) {
    return memo(Tag::ElC, {t}, {}, [&] {
      return node("nn0cni", Statement::el_c(t), {prove_mem_n0(t)});
    });
  }

  Promotion promote(const Term& n) {
    if (n.is_lit() && n.value() < kBase) {
      return Promotion{Term::lit(0), n,
                       memo(Tag::Dec0h, {n}, {}, [&] {
                         return node("dec0h", Statement::eq(horner(Term::lit(0), n), n),
                                     {prove_mem_n0(n)});
                       })};
    }
    Term prefix, digit;
    if (!is_numeral(n) || !detail::horner_parts(n, prefix, digit)) {
      throw Error(ErrorKind::OutOfDomain, "not a canonical numeral: " + debug_string(n));
    }
    return Promotion{prefix, digit, reflexivity(n)};
  }

  Proof prove_lt(const Term& x, const Term& y) {
    require_evaluable(x);
    require_evaluable(y);
    if (eval(x) >= eval(y)) {
      throw Error(ErrorKind::NotTrue, debug_string(x) + " < " + debug_string(y));
    }
    return lt_impl(x, y);
  }

  /// Eq([n+1], alias+1) given Eq(n, alias).
  Proof prove_succ(const Term& n, const Alias& alias) {
    require_canonical(n);
    require_alias(n, alias);
    return succ_impl(n, alias);
  }
  Proof prove_succ(const Term& n) { return prove_succ(n, identity(n)); }

  /// Eq([m+n], m'+n').
  Proof prove_add(const Term& m, const Term& n, const Alias& am, const Alias& an) {
    require_canonical(m);
    require_canonical(n);
    require_alias(m, am);
    require_alias(n, an);
    return add_impl(m, n, am, an);
  }
  Proof prove_add(const Term& m, const Term& n) {
    return prove_add(m, n, identity(m), identity(n));
  }

  /// Eq([m*p+n], m'*p+n') for a digit p.
  Proof prove_mac(const Term& m, const Term& p, const Term& n, const Alias& am, const Alias& an) {
    require_canonical(m);
    require_canonical(n);
    if (!p.is_lit() || p.value() >= kBase) {
      throw Error(ErrorKind::OutOfDomain, "multiplier must be a digit: " + debug_string(p));
    }
    require_alias(m, am);
    require_alias(n, an);
    return mac_impl(m, p, n, am, an);
  }

  /// Eq([m*p+n], m'*p'+n').
  Proof prove_ma(const Term& m, const Term& p, const Term& n, const Alias& am, const Alias& ap,
                 const Alias& an) {
    require_canonical(m);
    require_canonical(p);
    require_canonical(n);
    require_alias(m, am);
    require_alias(p, ap);
    require_alias(n, an);
    return ma_impl(m, p, n, am, ap, an);
  }

  /// Eq([m*n], m'*n').
  Proof prove_mul(const Term& m, const Term& n, const Alias& am, const Alias& an) {
    require_canonical(m);
    require_canonical(n);
    require_alias(m, am);
    require_alias(n, an);
    return mul_impl(m, n, am, an);
  }
  Proof prove_mul(const Term& m, const Term& n) {
    return prove_mul(m, n, identity(m), identity(n));
  }

  /// Eq([t], t) for t built from literals, sums and products.
  Proof numeralize(const Term& t) {
    if (contains_pow(t) || !is_ground(t)) {
      throw Error(ErrorKind::OutOfDomain, "cannot numeralize " + debug_string(t));
    }
    return numeralize_impl(t);
  }

  Proof prove_eq(const Term& x, const Term& y) {
    require_evaluable(x);
    require_evaluable(y);
    if (contains_pow(x) || contains_pow(y)) {
      throw Error(ErrorKind::OutOfDomain, "power terms are not numeralized");
    }
    if (eval(x) != eval(y)) {
      throw Error(ErrorKind::NotTrue, debug_string(x) + " = " + debug_string(y));
    }
    if (x == y) return reflexivity(x);
    if (is_numeral(x)) return numeralize_impl(y);
    return eqtr3i(numeralize_impl(x), numeralize_impl(y));
  }

  /// Dispatches on the statement head, for Eq, Lt and the closure heads.
  Proof prove(const Statement& goal) {
    switch (goal.head()) {
      case Head::Eq: return prove_eq(goal.arg(0), goal.arg(1));
      case Head::Lt: return prove_lt(goal.arg(0), goal.arg(1));
      case Head::ElN0: require_evaluable(goal.arg(0)); return prove_mem_n0(goal.arg(0));
      case Head::ElN: return prove_mem_n(goal.arg(0));
      case Head::ElC: require_evaluable(goal.arg(0)); return prove_mem_c(goal.arg(0));
      default:
        throw Error(ErrorKind::OutOfDomain,
                    "arithmetic prover does not handle " + std::string(head_name(goal.head())));
    }
  }

  // Small combinators over equality proofs.

  Proof eqcomi(const Proof& p) {
    return node("eqcomi", Statement::eq(rhs(p), lhs(p)), {p});
  }

  /// Chains Eq(A,B) and Eq(B,C) into Eq(A,C); reflexive links vanish.
  Proof trans(const Proof& ab, const Proof& bc) {
    if (!(rhs(ab) == lhs(bc))) throw std::logic_error("trans: middle terms differ");
    if (ab->rule == "eqid") return bc;
    if (bc->rule == "eqid") return ab;
    return node("eqtri", Statement::eq(lhs(ab), rhs(bc)), {ab, bc});
  }

  /// From Eq(A,B) and Eq(A,C) derive Eq(B,C).
  Proof eqtr3i(const Proof& ab, const Proof& ac) {
    if (!(lhs(ab) == lhs(ac))) throw std::logic_error("eqtr3i: left terms differ");
    return node("eqtr3i", Statement::eq(rhs(ab), rhs(ac)), {ab, ac});
  }

  /// Eq([v], v) for a literal value 0..10.
  Proof literal_numeral(int v) {
    if (v < kBase) return reflexivity(Term::lit(v));
    return memo(Tag::LitNum, {Term::lit(v)}, {}, [&] {
      return node("dec" + std::to_string(v), Statement::eq(to_numeral(v), Term::lit(v)));
    });
  }

  /// Eq([x], x) for x a digit-sized sum or product of literals.
  Proof digit_fact(const Term& x) {
    Proof basic = basic_eq(x);
    return trans(literal_numeral(lhs(basic).value()), basic);
  }

  void clear() { memo_.clear(); }
  std::size_t memo_size() const noexcept { return memo_.size(); }

  static const Term& lhs(const Proof& p) { return p->stmt.arg(0); }
  static const Term& rhs(const Proof& p) { return p->stmt.arg(1); }

 private:
  enum class Tag : std::uint8_t {
    Refl, Basic, ElN0, ElN, ElC, Dec0h, LitNum, Numeralize, Add, Succ, Mac, Ma, Mul1, Mul
  };

  struct MemoKey {
    Tag tag;
    std::array<Term, 3> terms;
    std::array<Proof, 3> proofs;

    friend bool operator==(const MemoKey& a, const MemoKey& b) noexcept {
      return a.tag == b.tag && a.terms == b.terms && a.proofs == b.proofs;
    }
  };
  struct MemoHash {
    std::size_t operator()(const MemoKey& k) const noexcept {
      std::size_t h = static_cast<std::size_t>(k.tag);
      for (const Term& t : k.terms) h = detail::mix(h, t.hash());
      for (const Proof& p : k.proofs) h = detail::mix(h, std::hash<const void*>{}(p.get()));
      return h;
    }
  };

  template <typename Compute>
  Proof memo(Tag tag, std::initializer_list<Term> terms, std::initializer_list<Proof> proofs,
             Compute&& compute) {
    MemoKey key{tag, {}, {}};
    std::size_t i = 0;
    for (const Term& t : terms) key.terms[i++] = t;
    i = 0;
    for (const Proof& p : proofs) key.proofs[i++] = p;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Proof result = compute();
    memo_.emplace(std::move(key), result);
    return result;
  }

  static Proof node(std::string rule, Statement stmt, std::vector<Proof> hyps = {}) {
    return make_proof(std::move(rule), std::move(stmt), std::move(hyps));
  }

  static void require_evaluable(const Term& t) {
    if (!is_ground(t)) throw Error(ErrorKind::OutOfDomain, "not a ground term");
  }
  static void require_canonical(const Term& t) {
    if (!is_numeral(t)) {
      throw Error(ErrorKind::OutOfDomain, "not a canonical numeral: " + debug_string(t));
    }
  }
  static void require_alias(const Term& n, const Alias& alias) {
    if (!alias.proof || alias.proof->stmt.head() != Head::Eq || !(lhs(alias.proof) == n) ||
        !(rhs(alias.proof) == alias.term)) {
      throw Error(ErrorKind::OutOfDomain, "alias proof does not prove " + debug_string(n) +
                                              " = " + debug_string(alias.term));
    }
  }

  static bool is_identity(const Term& n, const Alias& alias) { return alias.term == n; }

  /// Turns Eq(4*0+F, X) into Eq(F, X) when the high part is zero.
  Proof finish(const Term& high, const Term& low, const Proof& pf) {
    if (!high.is_lit(0)) return pf;
    Proof unpromote = memo(Tag::Dec0h, {low}, {}, [&] {
      return node("dec0h", Statement::eq(horner(Term::lit(0), low), low), {prove_mem_n0(low)});
    });
    return trans(eqcomi(unpromote), pf);
  }

  Proof basic_eq_impl(const Term& x, int a, int b, int v) {
    const Term ta = Term::lit(a), tb = Term::lit(b), tv = Term::lit(v);
    if (x.is_add()) {
      if (b == 0) return eqcomi(node("addid1i", Statement::eq(x, ta), {prove_mem_c(ta)}));
      if (a == 0) return eqcomi(node("addid2i", Statement::eq(x, tb), {prove_mem_c(tb)}));
      if (b == 1) return node("df-" + std::to_string(v), Statement::eq(tv, x));
      if (a == 1) {
        Term swapped = Term::add(tb, ta);
        Proof df = node("df-" + std::to_string(v), Statement::eq(tv, swapped));
        return trans(df, node("addcomi", Statement::eq(swapped, x),
                              {prove_mem_c(tb), prove_mem_c(ta)}));
      }
      if (b <= a) return eqcomi(node(sum_fact_label(a, b), Statement::eq(x, tv)));
      Term swapped = Term::add(tb, ta);
      Proof fact = eqcomi(node(sum_fact_label(b, a), Statement::eq(swapped, tv)));
      return trans(fact, node("addcomi", Statement::eq(swapped, x),
                              {prove_mem_c(tb), prove_mem_c(ta)}));
    }
    if (b == 0) return eqcomi(node("mul01i", Statement::eq(x, tv), {prove_mem_c(ta)}));
    if (a == 0) return eqcomi(node("mul02i", Statement::eq(x, tv), {prove_mem_c(tb)}));
    if (b == 1) return eqcomi(node("mulid1i", Statement::eq(x, ta), {prove_mem_c(ta)}));
    if (a == 1) return eqcomi(node("mulid2i", Statement::eq(x, tb), {prove_mem_c(tb)}));
    if (b <= a) return eqcomi(node(product_fact_label(a, b), Statement::eq(x, tv)));
    Term swapped = Term::mul(tb, ta);
    Proof fact = eqcomi(node(product_fact_label(b, a), Statement::eq(swapped, tv)));
    return trans(fact,
                 node("mulcomi", Statement::eq(swapped, x), {prove_mem_c(tb), prove_mem_c(ta)}));
  }

  Proof lt_impl(const Term& x, const Term& y) {
    if (!is_numeral(x)) {
      Proof nx = numeralize_impl(x);
      return node("eqbrtrri", Statement::lt(x, y), {nx, lt_impl(lhs(nx), y)});
    }
    if (!is_numeral(y) && !y.is_lit(kBase)) {
      Proof ny = numeralize_impl(y);
      return node("breqtri", Statement::lt(x, y), {lt_impl(x, lhs(ny)), ny});
    }
    return lt_numerals(x, y);
  }

  Proof lt_numerals(const Term& x, const Term& y) {
    Statement goal = Statement::lt(x, y);
    if (x.is_lit() && y.is_lit()) return node(order_fact_label(x.value(), y.value()), goal);
    Term a, b, c, d;
    if (x.is_lit()) {
      detail::horner_parts(y, a, b);
      return node("declti", goal,
                  {prove_mem_n(a), prove_mem_n0(b), prove_mem_n0(x),
                   lt_numerals(x, Term::lit(kBase))});
    }
    detail::horner_parts(x, a, b);
    detail::horner_parts(y, c, d);
    if (a == c) {
      return node("declt", goal,
                  {prove_mem_n0(a), prove_mem_n0(b), prove_mem_n(d), lt_numerals(b, d)});
    }
    return node("decltc", goal,
                {prove_mem_n0(a), prove_mem_n0(b), prove_mem_n0(c), prove_mem_n0(d),
                 lt_numerals(b, Term::lit(kBase)), lt_numerals(a, c)});
  }

  Proof numeralize_impl(const Term& t) {
    return memo(Tag::Numeralize, {t}, {}, [&]() -> Proof {
      if (is_numeral(t)) return reflexivity(t);
      if (t.is_lit()) return literal_numeral(t.value());
      Alias al{t.lhs(), numeralize_impl(t.lhs())};
      Alias ar{t.rhs(), numeralize_impl(t.rhs())};
      Term nl = lhs(al.proof), nr = lhs(ar.proof);
      if (t.is_add()) return add_impl(nl, nr, al, ar);
      if (t.is_mul()) return mul_impl(nl, nr, al, ar);
      throw Error(ErrorKind::OutOfDomain, "cannot numeralize " + debug_string(t));
    });
  }

  Proof succ_impl(const Term& n, const Alias& alias) {
    return memo(Tag::Succ, {n, alias.term}, {alias.proof}, [&]() -> Proof {
      const Term one = Term::lit(1);
      if (n.is_lit() && n.value() <= 2 && is_identity(n, alias)) {
        return basic_eq(Term::add(n, one));
      }
      Promotion pn = promote(n);
      Proof h = trans(pn.proof, alias.proof);
      int b = pn.digit.value();
      if (b < kBase - 1) {
        Term c = Term::lit(b + 1);
        Proof step = node("decsuc", Statement::eq(horner(pn.prefix, c), Term::add(alias.term, one)),
                          {prove_mem_n0(pn.prefix), prove_mem_n0(pn.digit),
                           basic_eq(Term::add(pn.digit, one)), h});
        return finish(pn.prefix, c, step);
      }
      Proof carry = succ_impl(pn.prefix, identity(pn.prefix));
      return node("decsucc2",
                  Statement::eq(horner(lhs(carry), Term::lit(0)), Term::add(alias.term, one)),
                  {prove_mem_n0(pn.prefix), carry, h});
    });
  }

  Proof add_impl(const Term& m, const Term& n, const Alias& am, const Alias& an) {
    return memo(Tag::Add, {m, n}, {am.proof, an.proof}, [&]() -> Proof {
      if (is_identity(m, am) && is_identity(n, an) && m.is_lit() && n.is_lit() &&
          m.value() + n.value() < kBase) {
        return basic_eq(Term::add(m, n));
      }
      Promotion pm = promote(m), pn = promote(n);
      Proof hm = trans(pm.proof, am.proof);
      Proof hn = trans(pn.proof, an.proof);
      const Term &a = pm.prefix, &b = pm.digit, &c = pn.prefix, &d = pn.digit;
      int low = b.value() + d.value();
      Proof ac = add_impl(a, c, identity(a), identity(c));
      if (low < kBase) {
        Term f = Term::lit(low);
        Term e = lhs(ac);
        Proof step = node("decadd", Statement::eq(horner(e, f), Term::add(am.term, an.term)),
                          {prove_mem_n0(a), prove_mem_n0(b), prove_mem_n0(c), prove_mem_n0(d), hm,
                           hn, ac, basic_eq(Term::add(b, d))});
        return finish(e, f, step);
      }
      Term f = Term::lit(low - kBase);
      Proof e_pf = succ_impl(lhs(ac), Alias{Term::add(a, c), ac});
      Term e = lhs(e_pf);
      Proof carry = eqtr3i(basic_eq(Term::add(Term::lit(kBase), f)), basic_eq(Term::add(b, d)));
      Proof step = node("decaddc", Statement::eq(horner(e, f), Term::add(am.term, an.term)),
                        {prove_mem_n0(a), prove_mem_n0(b), prove_mem_n0(c), prove_mem_n0(d),
                         prove_mem_n0(f), hm, hn, e_pf, carry});
      return finish(e, f, step);
    });
  }

  Proof mac_impl(const Term& m, const Term& p, const Term& n, const Alias& am, const Alias& an) {
    return memo(Tag::Mac, {m, p, n}, {am.proof, an.proof}, [&]() -> Proof {
      if (m.is_lit() && is_identity(m, am)) {
        Term product = Term::mul(m, p);
        Proof mp = digit_fact(product);
        return add_impl(lhs(mp), n, Alias{product, mp}, an);
      }
      Promotion pm = promote(m), pn = promote(n);
      Proof hm = trans(pm.proof, am.proof);
      Proof hn = trans(pn.proof, an.proof);
      const Term &a = pm.prefix, &b = pm.digit, &c = pn.prefix, &d = pn.digit;
      Term bp = Term::mul(b, p);
      Proof bp_pf = digit_fact(bp);
      Proof bpd = add_impl(lhs(bp_pf), d, Alias{bp, bp_pf}, identity(d));
      Promotion pg = promote(lhs(bpd));
      Proof low = trans(pg.proof, bpd);
      const Term &g = pg.prefix, &f = pg.digit;
      Proof cg = add_impl(c, g, identity(c), identity(g));
      Proof high = mac_impl(a, p, lhs(cg), identity(a), Alias{Term::add(c, g), cg});
      Term e = lhs(high);
      Proof step = node("decmac",
                        Statement::eq(horner(e, f), Term::add(Term::mul(am.term, p), an.term)),
                        {prove_mem_n0(a), prove_mem_n0(b), prove_mem_n0(c), prove_mem_n0(d),
                         prove_mem_n0(p), prove_mem_n0(f), prove_mem_n0(g), hm, hn, high, low});
      return finish(e, f, step);
    });
  }

  Proof ma_impl(const Term& m, const Term& p, const Term& n, const Alias& am, const Alias& ap,
                const Alias& an) {
    if (p.is_lit() && is_identity(p, ap)) return mac_impl(m, p, n, am, an);
    return memo(Tag::Ma, {m, p, n}, {am.proof, ap.proof, an.proof}, [&]() -> Proof {
      Promotion pp = promote(p), pn = promote(n);
      Proof hp = trans(pp.proof, ap.proof);
      Proof hn = trans(pn.proof, an.proof);
      const Term &a = pp.prefix, &b = pp.digit, &c = pn.prefix, &d = pn.digit;
      Proof mbd = mac_impl(m, b, d, am, identity(d));
      Promotion pg = promote(lhs(mbd));
      Proof low = trans(pg.proof, mbd);
      const Term &g = pg.prefix, &f = pg.digit;
      Proof cg = add_impl(c, g, identity(c), identity(g));
      Proof high = ma_impl(m, a, lhs(cg), am, identity(a), Alias{Term::add(c, g), cg});
      Term e = lhs(high);
      Proof step = node(
          "decma2c", Statement::eq(horner(e, f), Term::add(Term::mul(am.term, ap.term), an.term)),
          {prove_mem_n0(a), prove_mem_n0(b), prove_mem_n0(c), prove_mem_n0(d),
           prove_mem_n0(am.term), prove_mem_n0(f), prove_mem_n0(g), hp, hn, high, low});
      return finish(e, f, step);
    });
  }

  Proof mul1_impl(const Term& m, const Term& p, const Alias& am) {
    return memo(Tag::Mul1, {m, p}, {am.proof}, [&]() -> Proof {
      Term product = Term::mul(am.term, p);
      if (p.value() <= 1 && !contains_pow(am.term)) {
        if (p.value() == 0) {
          return eqcomi(node("mul01i", Statement::eq(product, p), {prove_mem_c(am.term)}));
        }
        Proof unit = eqcomi(node("mulid1i", Statement::eq(product, am.term), {prove_mem_c(am.term)}));
        return trans(am.proof, unit);
      }
      if (m.is_lit() && is_identity(m, am)) return digit_fact(product);
      Promotion pm = promote(m);
      Proof hm = trans(pm.proof, am.proof);
      const Term &a = pm.prefix, &b = pm.digit;
      Term bp = Term::mul(b, p);
      Proof bp_pf = digit_fact(bp);
      Promotion pg = promote(lhs(bp_pf));
      Proof low = trans(pg.proof, bp_pf);
      const Term &g = pg.prefix, &f = pg.digit;
      Proof high = mac_impl(a, p, g, identity(a), identity(g));
      Term e = lhs(high);
      Proof step = node("decmul1c", Statement::eq(horner(e, f), product),
                        {prove_mem_n0(a), prove_mem_n0(b), prove_mem_n0(p), prove_mem_n0(f),
                         prove_mem_n0(g), hm, high, low});
      return finish(e, f, step);
    });
  }

  Proof mul_impl(const Term& m, const Term& n, const Alias& am, const Alias& an) {
    if (n.is_lit() && is_identity(n, an)) return mul1_impl(m, n, am);
    return memo(Tag::Mul, {m, n}, {am.proof, an.proof}, [&]() -> Proof {
      Promotion pn = promote(n);
      Proof hp = trans(pn.proof, an.proof);
      const Term &a = pn.prefix, &b = pn.digit;
      Proof mb = mul1_impl(m, b, am);
      Promotion pg = promote(lhs(mb));
      Proof low = trans(pg.proof, mb);
      const Term &g = pg.prefix, &f = pg.digit;
      Proof high = ma_impl(m, a, g, am, identity(a), identity(g));
      Term e = lhs(high);
      Proof step = node("decmul2c", Statement::eq(horner(e, f), Term::mul(am.term, an.term)),
                        {prove_mem_n0(a), prove_mem_n0(b), prove_mem_n0(am.term), prove_mem_n0(f),
                         prove_mem_n0(g), hp, high, low});
      return finish(e, f, step);
    });
  }

  std::unordered_map<MemoKey, Proof, MemoHash> memo_;
};

}  // namespace numcert

#endif  // NUMCERT_SYNTH_ARITH_HPP
