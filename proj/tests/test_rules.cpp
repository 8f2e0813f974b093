#include <gtest/gtest.h>

#include <set>

#include "numcert/rules.hpp"
#include "oracle.hpp"

using namespace numcert;

namespace {

Term L(int v) { return Term::lit(v); }

}  // namespace

TEST(Registry, ContainsCoreLabels) {
  for (const char* label :
       {"0nn0", "4nn0", "1nn", "10nn", "nnnn0i", "nn0addcli", "nn0mulcli", "decclc", "decnncl",
        "decnncl2", "decnnclc", "eqeltri", "dec0u", "dec0h", "dec4", "dec10", "declti", "declt", "decltc",
        "breqtri", "eqbrtrri", "decsuc", "decsucc2", "decadd", "decaddc", "decmac", "decma2c",
        "decmul1c", "decmul2c", "eqid", "eqcomi", "eqtri", "eqtr3i", "addid1i", "addid2i",
        "mulid1i", "mulid2i", "mul01i", "mul02i", "addcomi", "mulcomi", "df-2", "df-10", "3t2e6",
        "5p5e10", "3lt4", "ndvdsi", "nprmi", "dec2dvds1", "dec2dvds3", "dec2nprm", "prmlt25",
        "prmlt841", "gcdi", "modxai", "pockthi", "pockthi-variant"}) {
    EXPECT_NE(registry().find(label), nullptr) << label;
  }
  EXPECT_EQ(registry().find("3p2e6"), nullptr);
  EXPECT_THROW(lookup("no-such-rule"), Error);
}

TEST(Registry, LabelsUnique) {
  std::set<std::string> seen;
  for (const RuleSchema& r : registry().rules()) EXPECT_TRUE(seen.insert(r.label).second) << r.label;
}

TEST(Registry, BasicFactTables) {
  int sums = 0, products = 0;
  for (int a = 2; a <= 10; ++a) {
    for (int b = 2; b <= a; ++b) {
      if (a + b <= 10) {
        ++sums;
        EXPECT_NE(registry().find(sum_fact_label(a, b)), nullptr);
      }
      if (a * b <= 10) {
        ++products;
        EXPECT_NE(registry().find(product_fact_label(a, b)), nullptr);
      }
    }
  }
  EXPECT_EQ(sums, 16);
  EXPECT_EQ(products, 5);
  EXPECT_EQ(registry().find("6p5e11"), nullptr);
}

TEST(Registry, TrialStageHypotheses) {
  EXPECT_EQ(lookup("prmlt25").hyps.size(), 3u + 2u);
  EXPECT_EQ(lookup("prmlt841").hyps.size(), 3u + 9u);
  EXPECT_EQ(lookup("pockthi-variant").hyps.size(), 14u);
  EXPECT_EQ(lookup("modxai").hyps.size(), 9u);
}

TEST(Matching, BindsAndInstantiates) {
  const RuleSchema& r = lookup("decadd");
  Term m = to_numeral(6), n = to_numeral(5);
  Statement goal = Statement::eq(horner(L(2), L(3)), Term::add(m, n));
  auto s = match(r.concl, goal);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(instantiate(r.concl, *s), goal);
  EXPECT_EQ(*s->find(meta_id("E")), L(2));
  EXPECT_EQ(*s->find(meta_id("M")), m);
  EXPECT_THROW(instantiate(r.hyps[0], *s), Error);
}

TEST(Matching, RepeatedVariablesMustAgree) {
  const RuleSchema& r = lookup("eqid");
  EXPECT_TRUE(match(r.concl, Statement::eq(to_numeral(9), to_numeral(9))).has_value());
  EXPECT_FALSE(match(r.concl, Statement::eq(L(1), L(2))).has_value());
  EXPECT_FALSE(match(Statement::lt(Term::var("A"), L(4)), Statement::lt(L(1), L(5))).has_value());
  EXPECT_FALSE(match(r.concl, Statement::lt(L(1), L(1))).has_value());
}

TEST(Matching, MetaVarsInBindingOrder) {
  std::vector<int> vars = lookup("eqtri").meta_vars();
  ASSERT_EQ(vars.size(), 3u);
  EXPECT_EQ(meta_name(vars[0]), "A");
  EXPECT_EQ(meta_name(vars[1]), "C");
  EXPECT_EQ(meta_name(vars[2]), "B");
}

TEST(Rules, AtomicFactsAreTrue) {
  for (const RuleSchema& r : registry().rules()) {
    if (!r.hyps.empty() || !is_ground(r.concl)) continue;
    EXPECT_TRUE(statement_holds(r.concl)) << r.label;
  }
}

// Every rule is sound on random ground instances: if all hypotheses hold,
// so does the conclusion.
TEST(Rules, SoundOnRandomInstances) {
  std::uniform_int_distribution<int> pick(0, 40);
  std::size_t exercised = 0;
  for (const RuleSchema& r : registry().rules()) {
    std::vector<int> vars = r.meta_vars();
    if (vars.empty()) continue;
    bool any = false;
    for (int trial = 0; trial < 4000; ++trial) {
      Substitution s;
      for (int v : vars) {
        int k = pick(oracle::rng());
        s.bind(v, k <= 10 && trial % 2 ? L(k) : to_numeral(k));
      }
      bool hyps_hold = true;
      for (const Statement& h : r.hyps) {
        if (!statement_holds(instantiate(h, s))) {
          hyps_hold = false;
          break;
        }
      }
      if (!hyps_hold) continue;
      any = true;
      ASSERT_TRUE(statement_holds(instantiate(r.concl, s))) << r.label;
    }
    exercised += any;
  }
  EXPECT_GT(exercised, 25u);
}
