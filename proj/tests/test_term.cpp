#include <gtest/gtest.h>

#include "numcert/term.hpp"
#include "oracle.hpp"

using namespace numcert;

namespace {

Term L(int v) { return Term::lit(v); }
Term dec(Term a, Term b) { return horner(std::move(a), std::move(b)); }

}  // namespace

TEST(Term, LiteralsAreShared) {
  EXPECT_TRUE(L(7).same_node(L(7)));
  EXPECT_EQ(L(7).value(), 7);
  EXPECT_THROW(L(11), Error);
  EXPECT_THROW(L(-1), Error);
}

TEST(Term, StructuralEquality) {
  Term a = Term::add(L(1), Term::mul(L(2), L(3)));
  Term b = Term::add(L(1), Term::mul(L(2), L(3)));
  EXPECT_FALSE(a.same_node(b));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_FALSE(a == Term::add(Term::mul(L(2), L(3)), L(1)));
  EXPECT_FALSE(Term::add(L(1), L(2)) == Term::mul(L(1), L(2)));
}

TEST(Term, NumeralOfThirteen) {
  EXPECT_EQ(to_numeral(13), Term::add(Term::mul(L(4), L(3)), L(1)));
  EXPECT_EQ(to_numeral(0), L(0));
  EXPECT_EQ(to_numeral(3), L(3));
  EXPECT_EQ(to_numeral(4), dec(L(1), L(0)));
}

TEST(Term, NumeralMatchesOracleConstruction) {
  for (int k = 0; k <= 5000; ++k) {
    ASSERT_EQ(to_numeral(k), oracle::numeral(k)) << k;
  }
  for (int i = 0; i < 200; ++i) {
    Integer k = oracle::random_digits(1 + i % 40);
    ASSERT_EQ(to_numeral(k), oracle::numeral(k));
    ASSERT_EQ(eval(to_numeral(k)), k);
  }
}

TEST(Term, EvalAgreesWithOracle) {
  Term t = Term::add(Term::mul(L(4), Term::add(Term::mul(L(4), L(1)), L(3))), L(2));
  EXPECT_EQ(eval(t), 30);
  EXPECT_EQ(eval(Term::mul(L(5), L(6))), oracle::value(Term::mul(L(5), L(6))));
  EXPECT_EQ(eval(Term::pow(L(2), L(10))), 1024);
  EXPECT_THROW(eval(Term::var("A")), Error);
}

TEST(Term, PowExponentLimit) {
  EXPECT_THROW(eval(Term::pow(L(2), to_numeral(Integer(1) << 20))), Error);
}

TEST(Term, CanonicalNumerals) {
  EXPECT_TRUE(is_numeral(L(3)));
  EXPECT_FALSE(is_numeral(L(4)));
  EXPECT_TRUE(is_numeral(L(4), NumeralMode::extended));
  EXPECT_TRUE(is_numeral(to_numeral(4001)));
  // Leading zero prefix.
  EXPECT_FALSE(is_numeral(dec(L(0), L(1))));
  EXPECT_FALSE(is_numeral(dec(L(1), L(4))));
  // 4..10 in the most significant position.
  EXPECT_FALSE(is_numeral(dec(L(6), L(1))));
  EXPECT_TRUE(is_numeral(dec(L(6), L(1)), NumeralMode::extended));
  // Zero-dropped form.
  EXPECT_TRUE(is_numeral(Term::mul(L(4), L(2)), NumeralMode::extended));
  EXPECT_FALSE(is_numeral(Term::mul(L(4), L(2))));
  EXPECT_FALSE(is_numeral(Term::mul(L(4), L(0)), NumeralMode::extended));
}

TEST(Term, MetaVariablesInterned) {
  EXPECT_EQ(Term::var("A"), Term::var("A"));
  EXPECT_FALSE(Term::var("A") == Term::var("B"));
  EXPECT_EQ(meta_name(meta_id("Q")), "Q");
  EXPECT_FALSE(is_ground(Term::add(L(1), Term::var("A"))));
  EXPECT_TRUE(is_ground(to_numeral(99)));
}

TEST(Statement, HeadsAndArity) {
  for (Head h : kAllHeads) {
    auto back = head_from_name(head_name(h));
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, h);
  }
  EXPECT_EQ(arity(Head::PMod), 4);
  EXPECT_EQ(arity(Head::GcdEq), 3);
  EXPECT_EQ(head_name(Head::ElN0), "elN0");
  EXPECT_FALSE(head_from_name("bogus").has_value());
  EXPECT_THROW(Statement(Head::Eq, {L(1)}), Error);
}

TEST(Statement, Semantics) {
  EXPECT_FALSE(statement_holds(Statement::eq(L(3), Term::add(L(1), L(1)))));
  EXPECT_TRUE(statement_holds(Statement::eq(L(2), Term::add(L(1), L(1)))));
  EXPECT_TRUE(statement_holds(Statement::lt(L(3), L(4))));
  EXPECT_FALSE(statement_holds(Statement::el_n(L(0))));
  EXPECT_TRUE(statement_holds(Statement::el_n0(L(0))));
  EXPECT_TRUE(statement_holds(Statement::ndvd(L(3), to_numeral(11))));
  EXPECT_FALSE(statement_holds(Statement::ndvd(L(3), to_numeral(12))));
  EXPECT_TRUE(statement_holds(Statement::prm(to_numeral(4001))));
  EXPECT_TRUE(statement_holds(Statement::nprm(L(1))));
  EXPECT_TRUE(statement_holds(Statement::gcd_eq(to_numeral(12), L(8), L(4))));
  EXPECT_TRUE(statement_holds(Statement::pmod(L(3), L(2), L(2), L(7))));
  EXPECT_FALSE(statement_holds(Statement::pmod(L(3), L(2), L(2), L(0))));
  EXPECT_FALSE(statement_holds(Statement::eq(Term::var("A"), Term::var("A"))));
}

TEST(Oracles, PrimalityGcdPowmod) {
  auto sieve = oracle::sieve(5000);
  for (int n = 0; n <= 5000; ++n) ASSERT_EQ(numcert::is_prime(n), sieve[n]) << n;
  for (int i = 0; i < 500; ++i) {
    auto a = static_cast<std::uint64_t>(oracle::random_below(100000));
    auto b = static_cast<std::uint64_t>(oracle::random_below(100000));
    auto n = static_cast<std::uint64_t>(oracle::random_below(65534)) + 2;
    ASSERT_EQ(numcert::gcd(a, b), oracle::gcd(a, b));
    ASSERT_EQ(numcert::powmod(a, b, n), oracle::powmod(a, b, n));
  }
}

TEST(Term, DebugString) {
  EXPECT_EQ(debug_string(Term::mul(L(2), dec(L(1), L(1)))), "tm[2,pl[tm[4,1],1]]");
}
