#ifndef NUMCERT_SYNTH_PRIME_HPP
#define NUMCERT_SYNTH_PRIME_HPP

// Certificates and proofs for non-divisibility, compositeness, gcd,
// modular powers and primality.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "numcert/synth_arith.hpp"

namespace numcert {

struct PocklingtonCert {
  Integer N;
  Integer p;
  unsigned e = 1;
  Integer B;
  Integer a;

  Integer m() const { return N - 1; }
  Integer prime_power() const { return boost::multiprecision::pow(p, e); }
  Integer g() const { return B * boost::multiprecision::pow(p, e - 1); }
};

/// One entry of an addition chain: exponent = left + right.
struct ChainStep {
  Integer exponent;
  Integer left;
  Integer right;
};
using AdditionChain = std::vector<ChainStep>;

/// Square-and-multiply over the base-4 digits of e.
inline AdditionChain default_chain(const Integer& e) {
  if (e < 1) throw Error(ErrorKind::BadChain, "exponent must be positive");
  std::vector<int> digits;
  for (Integer rest = e; rest > 0; rest /= kBase) digits.push_back(static_cast<int>(rest % kBase));
  std::reverse(digits.begin(), digits.end());

  AdditionChain chain;
  std::set<Integer> have{1};
  auto push = [&](const Integer& l, const Integer& r) {
    Integer x = l + r;
    if (have.insert(x).second) chain.push_back(ChainStep{x, l, r});
  };
  auto ensure_digit = [&](int d) {
    if (d >= 2) push(1, 1);
    if (d == 3) push(2, 1);
  };
  Integer cur = digits.front();
  ensure_digit(digits.front());
  for (std::size_t i = 1; i < digits.size(); ++i) {
    int d = digits[i];
    ensure_digit(d);
    push(cur, cur);
    cur *= 2;
    push(cur, cur);
    cur *= 2;
    if (d > 0) {
      push(cur, d);
      cur += d;
    }
  }
  return chain;
}

/// Throws BadChain unless every step adds two earlier exponents (or 1) and
/// the target is reached.
inline void validate_chain(const AdditionChain& chain, const Integer& target) {
  if (target < 1) throw Error(ErrorKind::BadChain, "exponent must be positive");
  std::set<Integer> have{1};
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const ChainStep& s = chain[i];
    if (s.exponent != s.left + s.right || !have.count(s.left) || !have.count(s.right)) {
      throw Error(ErrorKind::BadChain, "invalid chain entry " + std::to_string(i));
    }
    have.insert(s.exponent);
  }
  if (!have.count(target)) {
    throw Error(ErrorKind::BadChain, "chain does not reach " + target.str());
  }
}

/// Trial-division factorization, ascending primes.
inline std::map<Integer, unsigned> factorize(Integer n) {
  std::map<Integer, unsigned> out;
  for (Integer p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  }
  if (n > 1) ++out[n];
  return out;
}

/// True if cert satisfies every side condition of the Pocklington rule.
inline bool cert_valid(const PocklingtonCert& c) {
  if (c.N < 3 || c.e < 1 || c.p < 2 || c.a < 1 || c.B < 1) return false;
  if (!is_prime(c.p)) return false;
  Integer pe = c.prime_power();
  if (c.B * pe != c.m() || c.B >= pe) return false;
  if (powmod(c.a, c.m(), c.N) != 1) return false;
  Integer k = powmod(c.a, c.g(), c.N);
  if (k == 0) return false;
  return gcd(k - 1, c.N) == 1;
}

inline PocklingtonCert find_pocklington_cert(const Integer& N) {
  if (N < 3 || N % 2 == 0) {
    throw Error(ErrorKind::OutOfDomain, "Pocklington search needs an odd N >= 3");
  }
  if (!is_prime(N)) throw Error(ErrorKind::NotPrime, N.str() + " is not prime");
  std::optional<PocklingtonCert> best;
  Integer best_pe = 0;
  for (const auto& [p, e] : factorize(N - 1)) {
    Integer pe = boost::multiprecision::pow(p, e);
    Integer B = (N - 1) / pe;
    if (B < pe && pe > best_pe) {
      best_pe = pe;
      best = PocklingtonCert{N, p, e, B, 0};
    }
  }
  if (!best) {
    throw Error(ErrorKind::NoCertificate,
                "no prime power of " + Integer(N - 1).str() + " exceeds its cofactor");
  }
  for (Integer a = 2; a < N; ++a) {
    best->a = a;
    if (cert_valid(*best)) return *best;
  }
  throw Error(ErrorKind::NoCertificate, "no witness base for " + N.str());
}

/// Parses "p=<int>,e=<int>,a=<int>" and derives B from N.
inline PocklingtonCert parse_cert(const Integer& N, std::string_view text) {
  PocklingtonCert c{N, 0, 0, 0, 0};
  bool seen_p = false, seen_e = false, seen_a = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(pos, end - pos);
    std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq + 1 >= item.size()) {
      throw ParseError(pos, "malformed certificate field");
    }
    std::string_view key = item.substr(0, eq), val = item.substr(eq + 1);
    if (!std::all_of(val.begin(), val.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
      throw ParseError(pos + eq + 1, "certificate value is not an integer");
    }
    Integer v{std::string(val)};
    if (key == "p") {
      c.p = v;
      seen_p = true;
    } else if (key == "e") {
      if (v > 1000) throw ParseError(pos + eq + 1, "exponent too large");
      c.e = v.convert_to<unsigned>();
      seen_e = true;
    } else if (key == "a") {
      c.a = v;
      seen_a = true;
    } else {
      throw ParseError(pos, "unknown certificate field");
    }
    pos = end + 1;
  }
  if (!seen_p || !seen_e || !seen_a) throw ParseError(text.size(), "certificate needs p, e and a");
  if (c.e >= 1 && c.p >= 2) {
    Integer pe = c.prime_power();
    if ((N - 1) % pe == 0) c.B = (N - 1) / pe;
  }
  return c;
}

enum class PrimeMethod { Auto, Trial, Pocklington };

struct PowModResult {
  Integer residue;
  Proof proof;
};

struct PrimeCertificate {
  Proof proof;
  /// "axiom", "trial-25", "trial-841" or "pocklington".
  std::string method;
  std::optional<PocklingtonCert> cert;
};

/// Number-theoretic proof synthesis on top of an arithmetic Prover.
class PrimeProver {
 public:
  PrimeProver() = default;

  Prover& arith() noexcept { return arith_; }

  Proof prove_ndvd(const Integer& a, const Integer& b) {
    if (a < 2 || b < 1) throw Error(ErrorKind::OutOfDomain, "non-divisibility needs a >= 2, b >= 1");
    if (b % a == 0) throw Error(ErrorKind::Divides, a.str() + " divides " + b.str());
    Term ta = to_numeral(a), tb = to_numeral(b);
    Statement goal = Statement::ndvd(ta, tb);
    if (a == 2 && b >= kBase) {
      Term prefix = to_numeral(b / kBase);
      int digit = static_cast<int>(b % kBase);
      if (digit == 1) return node("dec2dvds1", goal, {arith_.prove_mem_n0(prefix)});
      if (digit == 3) return node("dec2dvds3", goal, {arith_.prove_mem_n0(prefix)});
    }
    Term tq = to_numeral(b / a), tr = to_numeral(b % a);
    Term split = Term::add(Term::mul(ta, tq), tr);
    return node("ndvdsi", goal,
                {arith_.prove_mem_n0(tq), arith_.prove_mem_n(ta), arith_.prove_mem_n(tr),
                 arith_.prove_eq(tb, split), arith_.prove_lt(tr, ta)});
  }

  Proof prove_nprime(const Integer& n) {
    if (n < 4) throw Error(ErrorKind::OutOfDomain, "compositeness needs n >= 4");
    if (is_prime(n)) throw Error(ErrorKind::IsPrime, n.str() + " is prime");
    Term tn = to_numeral(n);
    Statement goal = Statement::nprm(tn);
    if (n % kBase == 2) return node("dec2nprm", goal, {arith_.prove_mem_n(to_numeral(n / kBase))});
    Integer a = factorize(n).begin()->first;
    Term ta = to_numeral(a), tb = to_numeral(n / a);
    const Term one = Term::lit(1);
    return node("nprmi", goal,
                {arith_.prove_mem_n(ta), arith_.prove_mem_n(tb), arith_.prove_lt(one, ta),
                 arith_.prove_lt(one, tb), arith_.prove_mul(ta, tb)});
  }

  Proof prove_prime_trial(const Integer& n) {
    if (n >= kStage2Bound) {
      throw Error(ErrorKind::OutOfRange, n.str() + " is beyond trial division bound 841");
    }
    if (!is_prime(n)) throw Error(ErrorKind::Composite, n.str() + " is not prime");
    Term tn = to_numeral(n);
    Statement goal = Statement::prm(tn);
    if (n == 2) return node("prm2", goal);
    if (n == 3) return node("prm3", goal);
    bool small = n < kStage1Bound;
    int bound = small ? kStage1Bound : kStage2Bound;
    std::vector<Proof> hyps = {arith_.prove_mem_n(tn), arith_.prove_lt(Term::lit(1), tn),
                               arith_.prove_lt(tn, to_numeral(bound))};
    auto divisors = [&](const auto& primes) {
      for (int p : primes) hyps.push_back(prove_ndvd(p, n));
    };
    if (small) {
      divisors(kStage1Primes);
    } else {
      divisors(kStage2Primes);
    }
    return node(small ? "prmlt25" : "prmlt841", goal, std::move(hyps));
  }

  /// GcdEq([m],[n],[gcd(m,n)]) by Euclid descent. For m < n the first step
  /// swaps the arguments (quotient 0).
  Proof prove_gcd(const Integer& m, const Integer& n) {
    if (m < 0 || n < 0) throw Error(ErrorKind::OutOfDomain, "gcd needs nonnegative arguments");
    Term tm = to_numeral(m), tn = to_numeral(n);
    if (n == 1) {
      return node("gcdn1", Statement::gcd_eq(tm, tn, tn), {arith_.prove_mem_n0(tm)});
    }
    if (n == 0) {
      return node("gcdn0", Statement::gcd_eq(tm, tn, tm), {arith_.prove_mem_n0(tm)});
    }
    Integer k = m / n, r = m % n;
    Term tk = to_numeral(k), tr = to_numeral(r);
    Proof rest = prove_gcd(n, r);
    return node("gcdi", Statement::gcd_eq(tm, tn, rest->stmt.arg(2)),
                {arith_.prove_mem_n0(tk), arith_.prove_mem_n0(tr), arith_.prove_mem_n0(tn),
                 arith_.prove_eq(tm, Term::add(Term::mul(tk, tn), tr)), rest});
  }

  /// PMod([a],[e],[r],[n]) with r = a^e mod n.
  PowModResult prove_powmod(const Integer& a, const Integer& e, const Integer& n,
                            std::optional<AdditionChain> chain = std::nullopt) {
    if (a < 0 || e < 1 || n < 2) {
      throw Error(ErrorKind::OutOfDomain, "modular power needs a >= 0, e >= 1, n >= 2");
    }
    AdditionChain steps = chain ? std::move(*chain) : default_chain(e);
    validate_chain(steps, e);

    Term ta = to_numeral(a), tn = to_numeral(n);
    std::map<Integer, PowModResult> known;
    {
      Integer q = a / n, r = a % n;
      Term tq = to_numeral(q), tr = to_numeral(r);
      Proof base = node("pm1", Statement::pmod(ta, Term::lit(1), tr, tn),
                        {arith_.prove_mem_n0(ta), arith_.prove_mem_n(tn), arith_.prove_mem_n0(tq),
                         arith_.prove_mem_n0(tr),
                         arith_.prove_eq(ta, Term::add(Term::mul(tq, tn), tr)),
                         arith_.prove_lt(tr, tn)});
      known.emplace(Integer(1), PowModResult{r, base});
    }
    for (const ChainStep& s : steps) {
      if (known.count(s.exponent)) continue;
      const PowModResult& left = known.at(s.left);
      const PowModResult& right = known.at(s.right);
      Integer product = left.residue * right.residue;
      if (product > max_product_) max_product_ = product;
      Integer d = product / n, mres = product % n;
      Term tb = to_numeral(s.left), tc = to_numeral(s.right), te = to_numeral(s.exponent);
      Term tk = to_numeral(left.residue), tl = to_numeral(right.residue);
      Term td = to_numeral(d), tm = to_numeral(mres);
      Proof step = node(
          "modxai", Statement::pmod(ta, te, tm, tn),
          {arith_.prove_mem_n(tn), arith_.prove_mem_n0(td), arith_.prove_mem_n0(tm),
           arith_.prove_mem_n0(tk), arith_.prove_mem_n0(tl), arith_.prove_add(tb, tc),
           arith_.prove_eq(Term::add(Term::mul(td, tn), tm), Term::mul(tk, tl)), left.proof,
           right.proof});
      known.emplace(s.exponent, PowModResult{mres, step});
    }
    return known.at(e);
  }

  /// Eq([p^e], Pow([p],[e])) by unrolling exp1/expsucci.
  Proof prove_pow(const Integer& p, unsigned e) {
    if (e < 1 || p < 0) throw Error(ErrorKind::OutOfDomain, "power needs e >= 1");
    Term tp = to_numeral(p);
    Proof acc = arith_.eqcomi(node("exp1", Statement::eq(Term::pow(tp, Term::lit(1)), tp)));
    Integer value = p;
    for (unsigned i = 1; i < e; ++i) {
      Term tk = to_numeral(value), ti = to_numeral(static_cast<int>(i));
      Proof times = arith_.prove_mul(tk, tp);
      Proof succ = arith_.prove_succ(ti);
      value *= p;
      acc = node("expsucci", Statement::eq(to_numeral(value), Term::pow(tp, to_numeral(static_cast<int>(i + 1)))),
                 {acc, times, succ});
    }
    return acc;
  }

  /// Primality via the Pocklington rule; p is proven recursively.
  Proof prove_pocklington(const PocklingtonCert& c) {
    if (!cert_valid(c)) throw Error(ErrorKind::NoCertificate, "certificate does not verify");
    const Term one = Term::lit(1);
    Term tN = to_numeral(c.N), tp = to_numeral(c.p), te = to_numeral(static_cast<int>(c.e));
    Term tg = to_numeral(c.g()), tB = to_numeral(c.B), ta = to_numeral(c.a);
    Term tm = to_numeral(c.m());
    Term power = Term::pow(tp, te);
    Proof pow_pf = prove_pow(c.p, c.e);
    Proof prime_p = prove_prime(c.p, PrimeMethod::Auto);
    PowModResult full = prove_powmod(c.a, c.m(), c.N);
    PowModResult partial = prove_powmod(c.a, c.g(), c.N);
    Integer l = partial.residue - 1;
    Term tl = to_numeral(l);
    Proof split = arith_.prove_mul(tB, Prover::lhs(pow_pf), arith_.identity(tB),
                                   Alias{power, pow_pf});
    Proof below = node("breqtri", Statement::lt(tB, power),
                       {arith_.prove_lt(tB, Prover::lhs(pow_pf)), pow_pf});
    return node("pockthi-variant", Statement::prm(tN),
                {prime_p, arith_.prove_mem_n(tg), arith_.prove_mem_n(tB), arith_.prove_mem_n(te),
                 arith_.prove_mem_n(ta), arith_.prove_mul(tg, tp), arith_.prove_succ(tm), split,
                 below, full.proof, partial.proof, arith_.prove_succ(tl), arith_.prove_mem_n(tl),
                 prove_gcd(c.N, l)});
  }

  PrimeCertificate certify_prime(const Integer& n, PrimeMethod method = PrimeMethod::Auto,
                                 std::optional<PocklingtonCert> cert = std::nullopt) {
    if (!is_prime(n)) throw Error(ErrorKind::Composite, n.str() + " is not prime");
    bool trial = method == PrimeMethod::Trial ||
                 (method == PrimeMethod::Auto && !cert && n < kStage2Bound);
    if (trial) {
      Proof pf = prove_prime_trial(n);
      std::string how = n <= 3 ? "axiom" : n < kStage1Bound ? "trial-25" : "trial-841";
      return PrimeCertificate{pf, how, std::nullopt};
    }
    PocklingtonCert c = cert ? *cert : find_pocklington_cert(n);
    c.N = n;
    return PrimeCertificate{prove_pocklington(c), "pocklington", c};
  }

  Proof prove_prime(const Integer& n, PrimeMethod method = PrimeMethod::Auto,
                    std::optional<PocklingtonCert> cert = std::nullopt) {
    return certify_prime(n, method, std::move(cert)).proof;
  }

  /// Largest k*l product seen in modular-power steps since the last reset.
  const Integer& max_product() const noexcept { return max_product_; }
  void reset_instrumentation() { max_product_ = 0; }

  void clear() { arith_.clear(); }

 private:
  static Proof node(std::string rule, Statement stmt, std::vector<Proof> hyps = {}) {
    return make_proof(std::move(rule), std::move(stmt), std::move(hyps));
  }

  Prover arith_;
  Integer max_product_ = 0;
};

}  // namespace numcert

#endif  // NUMCERT_SYNTH_PRIME_HPP
