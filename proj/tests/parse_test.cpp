#include <gtest/gtest.h>

#include <random>

#include "dioph/parse.hpp"

using namespace dioph;

TEST(Parse, SimpleEquationWithDomain) {
  Problem p = parse_problem("x^2 - 1 = 0 ; x in Z");
  ASSERT_EQ(p.equations.size(), 1u);
  EXPECT_EQ(p.domain_of("x"), Domain::integers());
  EXPECT_EQ(render(p), "x^2 - 1 = 0 ; x in Z");
}

TEST(Parse, DefaultsToIntegers) {
  Problem p = parse_problem("x^2 + y^2 = 25");
  EXPECT_EQ(p.domain_of("x"), Domain::integers());
  EXPECT_EQ(p.domain_of("y"), Domain::integers());
  EXPECT_EQ(p.variables(), (std::vector<std::string>{"x", "y"}));
}

TEST(Parse, DomainsAndConstraints) {
  Problem p = parse_problem("x + y + z = x*y*z ; x,y in N, z in [-3, 7], x*y*z != 0");
  EXPECT_EQ(p.domain_of("x"), Domain::naturals());
  EXPECT_EQ(p.domain_of("z"), Domain::interval(-3, 7));
  ASSERT_EQ(p.constraints.size(), 1u);
  EXPECT_EQ(p.constraints[0], (std::set<std::string>{"x", "y", "z"}));
  EXPECT_EQ(p.nonvanishing(), (std::set<std::string>{"x", "y", "z"}));
}

TEST(Parse, FactorialAndExponential) {
  Problem p = parse_problem("x^2 + y^2 - z! = 3 ; z in N0");
  EXPECT_TRUE(p.equations[0].lhs.occurs_factorially("z"));
  Problem q = parse_problem("z!=24");
  EXPECT_TRUE(q.equations[0].lhs.occurs_factorially("z"));
  Problem e = parse_problem("18^x + 16^y = 19^z");
  EXPECT_TRUE(e.equations[0].lhs.occurs_exponentially("x"));
  EXPECT_FALSE(e.equations[0].lhs.occurs_polynomially("x"));
}

TEST(Parse, Systems) {
  EXPECT_EQ(parse_problem("x + y = 3 and x - y = 1").equations.size(), 2u);
  EXPECT_EQ(parse_problem("x + y = 3\nx - y = 1\n").equations.size(), 2u);
}

TEST(Parse, EmptyEquationRenders) {
  Problem p = parse_problem("0 = 0");
  EXPECT_EQ(render(p), "0 = 0 ; ");
}

TEST(Parse, FractionRendersFromSource) {
  Problem p = parse_problem("14/x + y/19 = 25");
  EXPECT_EQ(p.nonvanishing(), (std::set<std::string>{"x"}));
  Problem again = parse_problem(render(p));
  EXPECT_EQ(again, p);
}

TEST(ParseErrors, ReportsColumn) {
  try {
    parse_problem("x^2 + = 1");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line, 1u);
    EXPECT_EQ(e.column, 7u);
    EXPECT_FALSE(e.expected.empty());
  }
  try {
    parse_problem("x + y = 3\nx # y = 1");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line, 2u);
    EXPECT_EQ(e.column, 3u);
  }
}

TEST(ParseErrors, MissingEquals) {
  EXPECT_THROW(parse_problem("x^2 + 1"), SyntaxError);
  EXPECT_THROW(parse_problem("x = 1 ; x in"), SyntaxError);
}

TEST(ParseErrors, UnknownDomain) {
  try {
    parse_problem("x = 1 ; x in Q");
    FAIL();
  } catch (const UnknownDomainName& e) {
    EXPECT_EQ(e.column, 14u);
  }
}

TEST(ParseErrors, SemanticErrorsPropagate) {
  EXPECT_THROW(parse_problem("x^y = 1"), UnsupportedTerm);
  EXPECT_THROW(parse_problem("1/(x+1) = 2"), NestedFraction);
  EXPECT_THROW(parse_problem("x/0 = 2"), ZeroDenominatorConstant);
}

TEST(RoundTrip, CorpusShapes) {
  const char* cases[] = {
      "x^2 + y^2 - 6*x + 12*y - 36 = 0",
      "4*x^2 - 6*y^2 + 12*x + 108*y - 478 = 0 ; x,y in N0",
      "2^x + 3^y = z^2 ; x,y in N0",
      "x/y + y/x = 2",
      "z = 1/x + 1/y + 2/(x*y) ; x,y,z in N",
      "x + y + z = x*y*z ; x*y*z != 0",
      "x*y + y*z = x*y*z and x + y = 3",
      "(-2)^x + 5 = y ; x in [0, 10]",
      "x! + y! = z! ; x,y,z in N0",
      "20/x^2 - 33/(x*y) = 2",
  };
  for (const char* s : cases) {
    Problem p = parse_problem(s);
    std::string r = render(p);
    Problem q = parse_problem(r);
    EXPECT_EQ(q, p) << s << " -> " << r;
    EXPECT_EQ(render(q), r) << s;
  }
}

TEST(RoundTrip, RandomPolynomials) {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<long> coef(-30, 30);
  std::uniform_int_distribution<int> expo(0, 3);
  const char* vars[] = {"x", "y", "z"};
  for (int i = 0; i < 300; ++i) {
    Polynomial poly;
    for (int k = 0; k < 4; ++k) {
      Signature s;
      for (const char* v : vars) {
        int e = expo(rng);
        if (e) s.powers[v] = e;
      }
      if (expo(rng) == 3) s.exponentials["w"] = coef(rng) % 5 == 0 ? 7 : -3;
      poly.add_term(s, coef(rng));
    }
    Problem p;
    p.equations.push_back({poly, {}, {}});
    for (const auto& v : poly.variables()) p.domains[v] = Domain::integers();
    std::string r = render(p);
    Problem q = parse_problem(r);
    EXPECT_EQ(q.equations, p.equations) << r;
  }
}

TEST(RenderAssignment, Format) {
  Assignment a;
  a["x"] = 3;
  a["y"] = -4;
  EXPECT_EQ(render_assignment(a), "(x=3, y=-4)");
}
