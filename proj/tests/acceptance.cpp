// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "goal_corpus.hpp"
#include "mutate.hpp"
#include "numcert/checker.hpp"
#include "numcert/goal.hpp"
#include "numcert/serialize.hpp"
#include "numcert/synth_prime.hpp"
#include "oracle.hpp"

using namespace numcert;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int prec = 2) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(prec);
  s << v;
  return s.str();
}

/// Round-trip bookkeeping shared with criterion 9.
struct Tally {
  std::uint64_t proofs = 0, proof_failures = 0, documents = 0;
  std::uint64_t goals = 0, goal_failures = 0;
  double seconds = 0;
} tally;

/// Plain round trip for every proof; the lemma document form for large ones
/// and for every 64th proof.
void round_trip_proof(const Proof& p, bool large = false) {
  auto t0 = Clock::now();
  bool ok = true;
  try {
    if (!large) ok = same_proof(deserialize(serialize(p)), p);
    if (large || tally.proofs % 64 == 0) {
      ProofDocument doc = make_document(render_goal(p->stmt), p);
      std::string bytes = serialize_document(doc);
      ProofDocument back = deserialize_document(bytes);
      ok = ok && same_proof(back.proof, p) && serialize_document(back) == bytes;
      ++tally.documents;
    }
  } catch (const std::exception&) {
    ok = false;
  }
  ++tally.proofs;
  tally.proof_failures += !ok;
  tally.seconds += seconds_since(t0);
}

void round_trip_goal(const Statement& s) {
  auto t0 = Clock::now();
  bool ok = true;
  try {
    std::string text = render_goal(s);
    Statement back = parse_goal(text);
    ok = back == s && render_goal(back) == text;
  } catch (const std::exception&) {
    ok = false;
  }
  ++tally.goals;
  tally.goal_failures += !ok;
  tally.seconds += seconds_since(t0);
}

bool valid(Checker& ck, const Proof& p, const Statement& goal, bool audit = true) {
  if (!ck.check_root(p, goal)) return false;
  return !audit || audit_semantics(p).ok();
}

std::vector<std::string> preorder(const Proof& p) {
  std::vector<std::string> out{p->rule};
  for (const Proof& h : p->hyps) {
    auto sub = preorder(h);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

Outcome golden_tree() {
  const Term two = Term::lit(2), one = Term::lit(1);
  Term target = Term::mul(two, horner(one, one));
  auto t0 = Clock::now();
  Prover pr;
  Proof p = pr.prove_mem_n0(target);
  bool ok = check_root(p, Statement::el_n0(target)).ok();
  double ms = seconds_since(t0) * 1e3;
  std::vector<std::string> want = {"nn0mulcli", "2nn0", "decclc", "1nn0", "1nn0"};
  ok = ok && preorder(p) == want && proof_size(p) == 5 && ms < 1.0;
  round_trip_proof(p);
  round_trip_goal(p->stmt);
  return {ok, "golden closure tree, " + std::to_string(proof_size(p)) + " nodes, " + fmt(ms, 3) +
                  " ms"};
}

Outcome arithmetic_suite() {
  const Integer bound = Integer(1) << 20;
  Prover pr;
  Checker ck;
  std::uint64_t passed = 0, total = 0;
  double busy = 0;
  for (bool mul : {false, true}) {
    for (int i = 0; i < 10000; ++i) {
      if (i % 500 == 0) pr.clear();
      Integer m = oracle::random_below(bound), n = oracle::random_below(bound);
      Term tm = to_numeral(m), tn = to_numeral(n);
      Statement goal = mul ? Statement::eq(to_numeral(m * n), Term::mul(tm, tn))
                           : Statement::eq(to_numeral(m + n), Term::add(tm, tn));
      auto t0 = Clock::now();
      bool ok = false;
      Proof p;
      try {
        p = mul ? pr.prove_mul(tm, tn) : pr.prove_add(tm, tn);
        ok = valid(ck, p, goal);
      } catch (const std::exception&) {
        ok = false;
      }
      busy += seconds_since(t0);
      ++total;
      passed += ok;
      if (p) round_trip_proof(p);
      round_trip_goal(goal);
    }
  }
  return {passed == total && busy < 120.0,
          std::to_string(passed) + "/" + std::to_string(total) +
              " add and mul goals with operands < 4^10 checked and audited, " + fmt(busy) + " s"};
}

Outcome ordering_suite() {
  const int top = 4096;
  std::vector<Term> nums;
  nums.reserve(top + 1);
  for (int k = 0; k <= top; ++k) nums.push_back(to_numeral(k));
  Prover pr;
  Checker ck;
  std::uint64_t passed = 0, total = 0;
  double busy = 0;
  bool saw_named_instances = false;
  for (int n = 1; n <= top; ++n) {
    pr.clear();
    auto t0 = Clock::now();
    std::vector<Proof> row;
    row.reserve(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
      Statement goal = Statement::lt(nums[m], nums[n]);
      bool ok = false;
      try {
        Proof p = pr.prove_lt(nums[m], nums[n]);
        ok = valid(ck, p, goal, false);
        row.push_back(p);
      } catch (const std::exception&) {
        ok = false;
      }
      ++total;
      passed += ok;
      saw_named_instances = saw_named_instances || (m == 3 && n == 13) || (m == 8 && n == 9);
    }
    busy += seconds_since(t0);
    for (const Proof& p : row) round_trip_proof(p);
  }
  return {passed == total && saw_named_instances,
          std::to_string(passed) + "/" + std::to_string(total) +
              " pairs 0 <= m < n <= 4^6 checked (3<13 and 8<9 included), " + fmt(busy) + " s"};
}

const std::vector<int> kPrimes = {2, 3, 5, 7, 13, 23, 43, 83, 139, 163, 317, 631, 1259, 2503, 4001};

std::string expected_method(int p) {
  if (p <= 3) return "axiom";
  if (p < 25) return "trial-25";
  if (p < 841) return "trial-841";
  return "pocklington";
}

Outcome prime_sequence() {
  auto t0 = Clock::now();
  PrimeProver pp;
  Checker ck;
  int good = 0, lt_good = 0;
  std::vector<Proof> made;
  std::ostringstream methods;
  for (int p : kPrimes) {
    try {
      PrimeCertificate c = pp.certify_prime(p);
      bool ok = c.method == expected_method(p) && valid(ck, c.proof, Statement::prm(to_numeral(p)));
      good += ok;
      made.push_back(c.proof);
    } catch (const std::exception&) {
    }
  }
  for (std::size_t k = 0; k + 1 < kPrimes.size(); ++k) {
    Term bound = Term::mul(Term::lit(2), to_numeral(kPrimes[k]));
    Statement goal = Statement::lt(to_numeral(kPrimes[k + 1]), bound);
    try {
      Proof p = pp.arith().prove_lt(goal.arg(0), bound);
      lt_good += valid(ck, p, goal);
      made.push_back(p);
    } catch (const std::exception&) {
    }
  }
  double secs = seconds_since(t0);
  for (const Proof& p : made) {
    round_trip_proof(p, proof_size(p) > 200000);
    round_trip_goal(p->stmt);
  }
  bool pass = good == 15 && lt_good == 14 && secs < 60.0;
  return {pass, std::to_string(good) + "/15 primes with expected methods, " + std::to_string(lt_good) +
                    "/14 doubling inequalities, " + fmt(secs) + " s"};
}

Outcome pocklington_4001() {
  const Integer limit = 16008001;
  PocklingtonCert c = find_pocklington_cert(4001);
  bool shape = c.p == 5 && c.e == 3 && c.B == 32 && c.B < c.prime_power() && cert_valid(c);
  PrimeProver pp;
  pp.reset_instrumentation();
  Proof p = pp.prove_pocklington(c);
  bool checked = check_root(p, Statement::prm(to_numeral(4001))).ok();
  Integer seen = 0;
  std::uint64_t steps = 0;
  for_each_node(p, [&](const ProofNode& n) {
    if (n.rule != "modxai") return;
    ++steps;
    seen = std::max(seen, eval(n.hyps[6]->stmt.arg(1)));
  });
  bool bounded = pp.max_product() <= limit && seen == pp.max_product();
  return {shape && checked && bounded,
          "p=" + c.p.str() + " e=" + std::to_string(c.e) + " B=" + c.B.str() + " a=" + c.a.str() +
              ", max kl " + pp.max_product().str() + " (traversal " + seen.str() + ", " +
              std::to_string(steps) + " modxai nodes) <= 16008001"};
}

struct Growth {
  double raw[3], dedup[3], core[3];
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

Growth measure(bool mul) {
  Growth g{};
  const int sizes[3] = {8, 16, 32};
  Checker ck;
  for (int s = 0; s < 3; ++s) {
    std::vector<double> raw, dedup, core;
    for (int i = 0; i < 100; ++i) {
      Prover pr;
      Integer a = oracle::random_digits(sizes[s]), b = oracle::random_digits(sizes[s]);
      Term ta = to_numeral(a), tb = to_numeral(b);
      Proof p = mul ? pr.prove_mul(ta, tb) : pr.prove_add(ta, tb);
      Statement goal = mul ? Statement::eq(to_numeral(a * b), Term::mul(ta, tb))
                           : Statement::eq(to_numeral(a + b), Term::add(ta, tb));
      if (!ck.check_root(p, goal)) return Growth{};
      ProofStats st = proof_stats(p);
      raw.push_back(static_cast<double>(st.steps));
      dedup.push_back(static_cast<double>(st.steps_dedup));
      core.push_back(static_cast<double>(st.steps_no_closure));
      round_trip_proof(p, st.steps > 200000);
    }
    g.raw[s] = median(raw);
    g.dedup[s] = median(dedup);
    g.core[s] = median(core);
  }
  return g;
}

Outcome asymptotics() {
  Growth add = measure(false), mul = measure(true);
  auto ratios = [](const double* m) { return std::pair{m[1] / m[0], m[2] / m[1]}; };
  auto in = [](std::pair<double, double> r, double lo, double hi) {
    return r.first >= lo && r.first <= hi && r.second >= lo && r.second <= hi;
  };
  auto [a1, a2] = ratios(add.core);
  auto [m1, m2] = ratios(mul.core);
  bool pass = add.core[0] > 0 && mul.core[0] > 0 && in({a1, a2}, 1.5, 2.8) && in({m1, m2}, 3.0, 5.5);
  auto [ar1, ar2] = ratios(add.raw);
  auto [mr1, mr2] = ratios(mul.raw);
  auto [ad1, ad2] = ratios(add.dedup);
  auto [md1, md2] = ratios(mul.dedup);
  std::string text = "closure-free steps: add ratios " + fmt(a1) + ", " + fmt(a2) + "; mul ratios " +
                     fmt(m1) + ", " + fmt(m2) + " (all nodes: add " + fmt(ar1) + ", " + fmt(ar2) +
                     ", mul " + fmt(mr1) + ", " + fmt(mr2) + "; distinct nodes: add " + fmt(ad1) +
                     ", " + fmt(ad2) + ", mul " + fmt(md1) + ", " + fmt(md2) + ")";
  return {pass, text};
}

Outcome basic_facts() {
  Prover pr;
  int goals = 0, good = 0;
  std::size_t worst = 0;
  for (int a = 0; a <= 10; ++a) {
    for (int b = 0; b <= 10; ++b) {
      for (bool add : {true, false}) {
        int v = add ? a + b : a * b;
        if (v > 10) continue;
        Term x = add ? Term::add(Term::lit(a), Term::lit(b)) : Term::mul(Term::lit(a), Term::lit(b));
        ++goals;
        try {
          Proof p = pr.basic_eq(x);
          std::size_t n = proof_size(p);
          worst = std::max(worst, n);
          good += n <= 10 && check_root(p, Statement::eq(Term::lit(v), x)).ok();
          round_trip_proof(p);
        } catch (const std::exception&) {
        }
      }
    }
  }
  return {good == goals, std::to_string(good) + "/" + std::to_string(goals) +
                             " literal sum/product facts within 10 nodes (largest " +
                             std::to_string(worst) + ")"};
}

Outcome mutation_soundness() {
  std::mt19937_64 g(oracle::seed() + 11);
  Prover pr;
  PrimeProver pp;
  std::vector<Proof> corpus;
  for (int i = 0; i < 60; ++i) {
    Term m = to_numeral(oracle::random_digits(1 + i % 10));
    Term n = to_numeral(oracle::random_digits(1 + (i * 7) % 10));
    corpus.push_back(pr.prove_add(m, n));
    corpus.push_back(pr.prove_mul(m, n));
    corpus.push_back(pr.prove_lt(m, Term::add(m, Term::add(n, Term::lit(1)))));
    corpus.push_back(pr.prove_mem_n0(Term::mul(m, n)));
  }
  for (int p : {23, 631, 1259}) corpus.push_back(pp.prove_prime(p));
  corpus.push_back(pp.prove_gcd(4001, 799));
  corpus.push_back(pp.prove_nprime(841));
  Checker ck;
  int made = 0, rejected = 0;
  std::size_t idx = 0;
  while (made < 2000) {
    auto m = mutate::mutate(corpus[idx++ % corpus.size()], g);
    if (!m || statement_holds(m->mutated)) continue;
    ++made;
    rejected += !ck.check(m->root).ok();
  }
  return {made >= 1000 && rejected == made,
          std::to_string(rejected) + "/" + std::to_string(made) + " falsifying mutants rejected"};
}

Outcome round_trips() {
  auto t0 = Clock::now();
  const std::uint64_t top = std::uint64_t{1} << 24;
  std::uint64_t bad_numerals = 0;
  for (std::uint64_t k = 0; k <= top; ++k) {
    Term t = to_numeral(Integer(k));
    if (eval(t) != k || !is_numeral(t)) ++bad_numerals;
    if (k % 4099 == 0 && !(t == oracle::numeral(k))) ++bad_numerals;
  }
  double numeral_secs = seconds_since(t0);
  std::mt19937_64 g(oracle::seed() + 5);
  for (int i = 0; i < 1000; ++i) round_trip_goal(corpus::random_goal(g));
  bool pass = bad_numerals == 0 && tally.proof_failures == 0 && tally.goal_failures == 0 &&
              tally.proofs > 0;
  return {pass, "numerals 0..4^12 " + std::to_string(top + 1 - bad_numerals) + "/" +
                    std::to_string(top + 1) + " (" + fmt(numeral_secs) + " s); proofs " +
                    std::to_string(tally.proofs - tally.proof_failures) + "/" +
                    std::to_string(tally.proofs) + " (" + std::to_string(tally.documents) +
                    " as documents); goals " +
                    std::to_string(tally.goals - tally.goal_failures) + "/" +
                    std::to_string(tally.goals) + " (" + fmt(tally.seconds) + " s)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, golden_tree},        {2, arithmetic_suite}, {3, ordering_suite},
      {4, prime_sequence},     {5, pocklington_4001}, {6, asymptotics},
      {7, basic_facts},        {8, mutation_soundness}, {9, round_trips}};
  int failures = 0;
  std::cout << "seed " << oracle::seed() << std::endl;
  for (const auto& [id, run] : criteria) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << " " << o.detail << " ["
              << fmt(seconds_since(t0), 1) << " s]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
