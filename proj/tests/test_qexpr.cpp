#include <gtest/gtest.h>

#include "exdes/qexpr.hpp"

using namespace exdes;

namespace {

mpq_class at(const char *src, long q, long a = 1, int eps = 1, int e = 1) {
  ExprVars v;
  v.q = q;
  v.a = a;
  v.eps = eps;
  v.e = e;
  return Expr::parse(src).eval(v);
}

}  // namespace

TEST(Expr, EvaluatesExactly) {
  EXPECT_EQ(at("q^2*(q^2-q+1)", 27), 512487);
  EXPECT_EQ(at("a*(q-1)", 27, 3), 78);
  EXPECT_EQ(at("2^8*3^2*(q-eps)^6", 2, 1, -1), 2304 * 729);
  EXPECT_EQ(at("q^3*(q^3+eps)/2", 4, 2, 1), 2080);
  EXPECT_EQ(at("q^24/6", 2), mpq_class(8388608, 3));
  EXPECT_EQ(at("64*e*a*q^12*(q^2+eps*q+1)", 2, 1, 1, 1), 1835008);
}

TEST(Expr, PrecedenceAndAssociativity) {
  EXPECT_EQ(at("-q^2", 3), -9);
  EXPECT_EQ(at("2^3^2", 1), 512);
  EXPECT_EQ(at("12/2/3", 1), 2);
  EXPECT_EQ(at("q-1-1", 5), 3);
  EXPECT_EQ(at(" ( q + 1 ) * ( q - 1 ) ", 7), 48);
}

TEST(Expr, RejectsMalformedInput) {
  EXPECT_THROW(Expr::parse("q+"), ParseError);
  EXPECT_THROW(Expr::parse("x*q"), ParseError);
  EXPECT_THROW(Expr::parse("q^q"), ParseError);
  EXPECT_THROW(Expr::parse("(q"), ParseError);
  EXPECT_THROW(Expr::parse("q)"), ParseError);
  EXPECT_THROW(Expr::parse("2^(1/2)"), ParseError);
  EXPECT_THROW(at("1/(q-2)", 2), std::domain_error);
}

TEST(Expr, LeadingTerms) {
  auto lead = [](const char *s, int eps = 1, int e = 1) {
    return Expr::parse(s).leading(eps, e);
  };
  const auto t1 = lead("q^34/(4*a^2)");
  EXPECT_EQ(t1.q_degree, 34);
  EXPECT_EQ(t1.a_degree, -2);
  EXPECT_EQ(t1.coeff, mpq_class(1, 4));
  const auto t2 = lead("q^9*(q^8+q^4+1)*(q^3+eps)/(2*(q^2+eps*q+1))", -1);
  EXPECT_EQ(t2.q_degree, 18);
  EXPECT_EQ(t2.coeff, mpq_class(1, 2));
  const auto t3 = lead("18*a*(q-eps)^2*(q^2+eps*q+1)");
  EXPECT_EQ(t3.q_degree, 4);
  EXPECT_EQ(t3.a_degree, 1);
  EXPECT_EQ(t3.coeff, 18);
  // cancellation of the top terms
  const auto t4 = lead("(q+1)^2-q^2");
  EXPECT_EQ(t4.q_degree, 1);
  EXPECT_EQ(t4.coeff, 2);
  const auto t5 = lead("64*e*a*q^12", 1, 3);
  EXPECT_EQ(t5.coeff, 192);
}

TEST(Expr, SymbolUse) {
  const auto e = Expr::parse("64*e*a*q^12");
  EXPECT_TRUE(e.uses("e"));
  EXPECT_TRUE(e.uses("a"));
  EXPECT_FALSE(e.uses("eps"));
  EXPECT_EQ(e.source(), "64*e*a*q^12");
}
