#include <gtest/gtest.h>

#include <random>

#include "dioph/expr.hpp"
#include "dioph/parse.hpp"

using namespace dioph;

namespace {

RawEquation raw(const std::string& s) { return parse_raw_system(s).at(0); }

Polynomial poly(const std::string& s) { return normalize(raw(s + " = 0")).lhs; }

Assignment at(std::initializer_list<std::pair<const char*, long>> xs) {
  Assignment a;
  for (auto& [k, v] : xs) a[k] = v;
  return a;
}

}  // namespace

TEST(Normalize, CollectsTermsOnOneSide) {
  auto eq = normalize(raw("x^2+y^2-6*x+12*y-36=0"));
  EXPECT_EQ(eq.terms().size(), 4u);
  EXPECT_EQ(eq.constant(), -36);
  EXPECT_EQ(eq.lhs, poly("x^2 + y^2 - 6*x + 12*y - 36"));
}

TEST(Normalize, IdentityIsEmpty) {
  auto eq = normalize(raw("x = x"));
  EXPECT_TRUE(eq.lhs.is_zero());
  EXPECT_EQ(eq.constant(), 0);
}

TEST(Normalize, MovesRightHandSide) {
  auto eq = normalize(raw("15*x^2 + 6*y^2 = 12"));
  EXPECT_EQ(eq.constant(), -12);
  Signature x2;
  x2.powers["x"] = 2;
  EXPECT_EQ(eq.lhs.coefficient(x2), 15);
}

TEST(Normalize, ExpandsProducts) {
  EXPECT_EQ(poly("(x+1)*(x-1)"), poly("x^2 - 1"));
  EXPECT_EQ(poly("2^x*3^x"), poly("6^x"));
  EXPECT_EQ(poly("1^x + 2"), poly("3"));
}

TEST(Normalize, RejectsUnsupportedShapes) {
  EXPECT_THROW(normalize(raw("x^y = 2")), UnsupportedTerm);
  EXPECT_THROW(normalize(raw("0^x = 1")), UnsupportedTerm);
  EXPECT_THROW(normalize(raw("x!*x! = 1")), UnsupportedTerm);
}

TEST(ClearDenominators, ReciprocalRatio) {
  auto c = clear_denominators(raw("x/y + y/x = 2"));
  EXPECT_EQ(c.equation.lhs, poly("x^2 - 2*x*y + y^2"));
  EXPECT_EQ(c.nonvanishing, (std::set<std::string>{"x", "y"}));
  ASSERT_TRUE(c.equation.source.has_value());
}

TEST(ClearDenominators, MixedConstantAndVariable) {
  auto r = raw("14/x + y/19 = 25");
  auto c = clear_denominators(r);
  EXPECT_EQ(c.equation.lhs, poly("x*y - 475*x + 266"));
  EXPECT_EQ(c.nonvanishing, (std::set<std::string>{"x"}));
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> d(-50, 50);
  for (int i = 0; i < 500; ++i) {
    Assignment a = at({{"x", d(rng)}, {"y", d(rng)}});
    if (a["x"] == 0) continue;
    auto lhs = evaluate_raw(*r.lhs, a);
    auto rhs = evaluate_raw(*r.rhs, a);
    Rational diff = (*lhs - *rhs) * Rational(19 * a["x"]);
    EXPECT_EQ(diff, Rational(c.equation.lhs.evaluate(a)));
  }
}

TEST(ClearDenominators, UnitReciprocals) {
  auto c = clear_denominators(raw("1/x + 1/y = 1"));
  // (1-x)(1-y) - 1 = xy - x - y
  EXPECT_EQ(c.equation.lhs * Integer(-1), poly("(1-x)*(1-y) - 1"));
}

TEST(ClearDenominators, Errors) {
  EXPECT_THROW(clear_denominators(raw("1/(x+1) = 2")), NestedFraction);
  EXPECT_THROW(clear_denominators(raw("x/0 = 1")), ZeroDenominatorConstant);
}

TEST(ClearDenominators, RandomAgreement) {
  const char* cases[] = {"z = 1/x + 1/y + 2/(x*y)", "20/x + 33/y = 2", "x/y + y/x = 1", "1/x + 1/y + 1/z = 5",
                         "(x+1)/3 - y/2 = x*y/6"};
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> d(-50, 50);
  for (const char* s : cases) {
    auto r = raw(s);
    auto c = clear_denominators(r);
    for (int i = 0; i < 1000; ++i) {
      Assignment a = at({{"x", d(rng)}, {"y", d(rng)}, {"z", d(rng)}});
      auto l = evaluate_raw(*r.lhs, a);
      auto rr = evaluate_raw(*r.rhs, a);
      if (!l || !rr) continue;
      bool raw_zero = (*l == *rr);
      bool poly_zero = c.equation.lhs.evaluate(a) == 0;
      EXPECT_EQ(raw_zero, poly_zero) << s;
      if (c.equation.source) EXPECT_EQ(Rational(*l - *rr), c.equation.source->evaluate(a)) << s;
    }
  }
}

TEST(CompleteSquare, Circle) {
  auto f = complete_square_reduce(normalize(raw("x^2+y^2-6*x+12*y-36=0")));
  ASSERT_TRUE(f);
  EXPECT_EQ(f->scale, 1);
  EXPECT_EQ(f->N, 81);
  ASSERT_EQ(f->terms.size(), 2u);
  EXPECT_EQ(f->terms[0], (CenteredTerm{1, "x", 1, -3}));
  EXPECT_EQ(f->terms[1], (CenteredTerm{1, "y", 1, 6}));
}

TEST(CompleteSquare, PellShape) {
  auto eq = normalize(raw("4*x^2-6*y^2+12*x+108*y-478=0"));
  auto f = complete_square_reduce(eq);
  ASSERT_TRUE(f);
  EXPECT_EQ(f->N, 1);
  EXPECT_EQ(f->terms[0], (CenteredTerm{1, "x", 2, 3}));
  EXPECT_EQ(f->terms[1], (CenteredTerm{-6, "y", 1, -9}));
  EXPECT_EQ(expand(*f), eq.lhs * f->scale);
}

TEST(CompleteSquare, NegativeTarget) {
  auto f = complete_square_reduce(normalize(raw("x^2+y^2+1=0")));
  ASSERT_TRUE(f);
  EXPECT_EQ(f->N, -1);
  for (auto& t : f->terms) EXPECT_GT(t.c, 0);
}

TEST(CompleteSquare, ScalesWhenNeeded) {
  auto eq = normalize(raw("10*x^2+2*x-8*y^2=0"));
  auto f = complete_square_reduce(eq);
  ASSERT_TRUE(f);
  EXPECT_EQ(f->scale, 10);
  EXPECT_EQ(f->terms[0], (CenteredTerm{1, "x", 10, 1}));
  EXPECT_EQ(f->terms[1], (CenteredTerm{-80, "y", 1, 0}));
  EXPECT_EQ(f->N, 1);
  EXPECT_EQ(expand(*f), eq.lhs * f->scale);
}

TEST(CompleteSquare, ExpansionMatchesRandomQuadratics) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> c(-12, 12);
  for (int i = 0; i < 300; ++i) {
    long a1 = c(rng), a2 = c(rng);
    if (a1 == 0 || a2 == 0) continue;
    Polynomial p = Polynomial::variable("x", 2) * Integer(a1) + Polynomial::variable("x") * Integer(c(rng)) +
                   Polynomial::variable("y", 2) * Integer(a2) + Polynomial::variable("y") * Integer(c(rng)) +
                   Polynomial::constant(c(rng));
    NormalizedEquation eq{p, {}, {}};
    auto f = complete_square_reduce(eq);
    ASSERT_TRUE(f);
    EXPECT_EQ(expand(*f), p * f->scale);
  }
}

TEST(CompleteSquare, RejectsMixedTerms) {
  EXPECT_FALSE(complete_square_reduce(normalize(raw("x^2 - x*y + y^2 = 2"))));
  EXPECT_FALSE(complete_square_reduce(normalize(raw("x^3 + y^2 = 2"))));
}

TEST(Evaluate, Examples) {
  EXPECT_EQ(evaluate(normalize(raw("15*x^2+6*y^2=12")), at({{"x", 0}, {"y", 0}})), -12);
  EXPECT_EQ(evaluate(normalize(raw("5^x+7^y=40369232")), at({{"x", 6}, {"y", 9}})), 0);
  EXPECT_EQ(evaluate(normalize(raw("x^4+4*y^3-7*x^2-12*y+7=0")), at({{"x", 1}, {"y", 1}})), -7);
}

TEST(Evaluate, DomainViolation) {
  EXPECT_THROW(evaluate(normalize(raw("2^x = 1")), at({{"x", -1}})), DomainViolation);
  EXPECT_THROW(evaluate(normalize(raw("x! = 1")), at({{"x", -3}})), DomainViolation);
}

TEST(Polynomial, SubstituteAffine) {
  Polynomial p = poly("3*x^2 + 4*y - 19");
  Polynomial t = Polynomial::variable("t");
  Polynomial q = p.substitute("x", Polynomial::constant(1) + t * Integer(2))
                     .substitute("y", Polynomial::constant(1) + t * Integer(5));
  EXPECT_EQ(q, poly("12*t^2 + 32*t - 12"));
  EXPECT_EQ(poly("2^x + x").substitute_value("x", 3), Polynomial::constant(11));
}

TEST(AffineMap, RoundTrip) {
  AffineMap m;
  m.maps["x"] = {2, 3};
  m.maps["y"] = {-5, 1};
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> d(-1000, 1000);
  for (int i = 0; i < 200; ++i) {
    Assignment a = at({{"x", d(rng)}, {"y", d(rng)}});
    auto back = m.invert(m.apply(a));
    ASSERT_TRUE(back);
    EXPECT_EQ(*back, a);
  }
  EXPECT_FALSE(m.invert(at({{"x", 4}, {"y", 1}})));
}

TEST(CanonicalOrder, GradedLex) {
  EXPECT_EQ(render_polynomial(poly("-36 + 12*y + y^2 - 6*x + x^2")), "x^2 + y^2 - 6*x + 12*y - 36");
  EXPECT_EQ(render_polynomial(poly("x*y + x^2 + y^2")), "x^2 + x*y + y^2");
  EXPECT_EQ(render_polynomial(poly("3^y + 2^x - z^2")), "-z^2 + 2^x + 3^y");
}
