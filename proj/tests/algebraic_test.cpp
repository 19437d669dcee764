#include <gtest/gtest.h>

#include <random>
#include <set>

#include "dioph/algebraic.hpp"
#include "dioph/parse.hpp"
#include "dioph/poly.hpp"

using namespace dioph;

namespace {

Problem P(const std::string& text) { return parse_problem(text); }

std::set<Assignment> as_set(const std::vector<Assignment>& v) { return {v.begin(), v.end()}; }

/// Brute force over [-R,R]^2 with machine arithmetic; polynomial equations only.
std::set<Assignment> brute2(const Problem& pr, const std::string& x, const std::string& y, long R) {
  struct T {
    long c;
    unsigned long px, py;
  };
  std::vector<T> terms;
  for (const auto& [sig, c] : pr.equations[0].lhs.terms()) {
    auto pw = [&](const std::string& v) { return sig.powers.count(v) ? sig.powers.at(v) : 0ul; };
    terms.push_back({c.get_si(), pw(x), pw(y)});
  }
  std::set<Assignment> out;
  for (long a = -R; a <= R; ++a)
    for (long b = -R; b <= R; ++b) {
      __int128 s = 0;
      for (const auto& t : terms) {
        __int128 m = t.c;
        for (unsigned long i = 0; i < t.px; ++i) m *= a;
        for (unsigned long i = 0; i < t.py; ++i) m *= b;
        s += m;
      }
      if (s != 0) continue;
      Assignment asg{{x, a}, {y, b}};
      if (pr.satisfied_by(asg)) out.insert(asg);
    }
  return out;
}

/// Solutions inside the box, each checked against the equation.
std::set<Assignment> within(const Problem& pr, const std::vector<Assignment>& sols, long R) {
  std::set<Assignment> out;
  for (const auto& a : sols) {
    EXPECT_TRUE(pr.satisfied_by(a));
    bool in = true;
    for (const auto& [v, x] : a) in &= abs(x) <= R;
    if (in) out.insert(a);
  }
  return out;
}

Polynomial V(const std::string& v) { return Polynomial::variable(v); }
Polynomial K(long c) { return Polynomial::constant(c); }

/// Members of the families with every parameter in [lo, hi] (N/N0 parameters clipped at their lower bound).
std::set<Assignment> members(const std::vector<Family>& fams, long lo, long hi) {
  std::set<Assignment> out;
  for (const auto& f : fams) {
    std::vector<Integer> vals(f.parameters.size());
    std::function<void(std::size_t, Assignment&)> rec = [&](std::size_t i, Assignment& p) {
      if (i == f.parameters.size()) {
        if (auto a = f.materialize(p)) out.insert(*a);
        return;
      }
      long start = lo;
      if (auto l = f.parameters[i].domain.lower()) start = std::max(start, l->get_si());
      for (long t = start; t <= hi; ++t) {
        p[f.parameters[i].name] = t;
        rec(i + 1, p);
      }
    };
    Assignment p;
    rec(0, p);
  }
  return out;
}

}  // namespace

TEST(FactorPair, HyperbolaMatchesBruteForce) {
  Problem pr = P("5*x + x*y - 2*y = 0");
  ProductForm pf{{V("x") - K(2), V("y") + K(5)}, -10, 1};
  ASSERT_TRUE(pf.matches(pr.equations[0].lhs));
  Verdict v = factor_pair_solve(pf, pr);
  ASSERT_EQ(v.status, Status::Finite);
  EXPECT_EQ(v.completeness, "factor-enumeration");
  EXPECT_EQ(as_set(v.solutions), brute2(pr, "x", "y", 60));
}

TEST(FactorPair, NonvanishingFilter) {
  Problem pr = P("1/x + 1/y = 1");
  ProductForm pf{{K(1) - V("x"), K(1) - V("y")}, 1, 1};
  Verdict v = factor_pair_solve(pf, pr);
  ASSERT_EQ(v.status, Status::Finite);
  EXPECT_EQ(v.solutions, (std::vector<Assignment>{{{"x", 2}, {"y", 2}}}));
}

TEST(FactorPair, FiveDistinctFactors) {
  ProductForm pf{{V("x") + K(1), V("x") - K(1), V("x") + K(3), V("x") - K(3), V("x") + K(5)}, 21, 1};
  Problem pr;
  pr.equations.push_back({pf.expand(), {}, std::nullopt});
  Verdict v = factor_pair_solve(pf, pr);
  EXPECT_EQ(v.status, Status::NoSolution);
  ASSERT_TRUE(v.certificate);
  EXPECT_EQ(v.certificate->kind, "exhaustion");
  pf.N = 45;
  pr.equations[0].lhs = pf.expand();
  v = factor_pair_solve(pf, pr);
  ASSERT_EQ(v.status, Status::Finite);
  EXPECT_EQ(v.solutions, (std::vector<Assignment>{{{"x", 0}}}));
}

TEST(FactorPair, ZeroTargetThrowsAndSplits) {
  ProductForm pf{{V("x") - K(1), V("y") + K(2)}, 0, 1};
  Problem pr;
  pr.equations.push_back({pf.expand(), {}, std::nullopt});
  EXPECT_THROW(factor_pair_solve(pf, pr), ZeroTarget);
  Verdict v = zero_form_solve(pf, pr);
  ASSERT_EQ(v.status, Status::Family);
  EXPECT_EQ(v.families.size(), 2u);
  auto m = members(v.families, -15, 15);
  for (const auto& a : m) EXPECT_EQ(pr.equations[0].lhs.evaluate(a), 0);
  for (const auto& a : brute2(pr, "x", "y", 10)) EXPECT_TRUE(m.count(a)) << a.at("x") << "," << a.at("y");
}

TEST(FactorPair, RandomFormsMatchBruteForce) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<long> co(-2, 2), n(-30, 30);
  int done = 0;
  while (done < 40) {
    long a = co(rng), b = co(rng), c = co(rng), d = co(rng);
    if (a * d - b * c == 0) continue;
    long N = n(rng);
    if (N == 0) continue;
    ProductForm pf{{V("x") * a + V("y") * b + K(co(rng)), V("x") * c + V("y") * d + K(co(rng))}, N, 1};
    Problem pr;
    pr.equations.push_back({pf.expand(), {}, std::nullopt});
    Verdict v = factor_pair_solve(pf, pr);
    auto expect = brute2(pr, "x", "y", 140);
    if (expect.empty())
      EXPECT_EQ(v.status, Status::NoSolution);
    else
      EXPECT_EQ(as_set(v.solutions), expect);
    ++done;
  }
}

TEST(ProductForms, Discovery) {
  auto bl = bilinear_product_form(P("20/x + 33/y = 2").equations[0].lhs);
  ASSERT_TRUE(bl);
  Problem pr = P("20/x + 33/y = 2");
  EXPECT_TRUE(bl->matches(pr.equations[0].lhs));
  Verdict v = factor_pair_solve(*bl, pr);
  EXPECT_EQ(v.solutions.size(), 15u);

  Problem h = P("14/x + y/19 = 25");
  auto b2 = bilinear_product_form(h.equations[0].lhs);
  ASSERT_TRUE(b2);
  EXPECT_EQ(factor_pair_solve(*b2, h).solutions.size(), 16u);

  Problem d = P("x^2 - y^2 - 12*x - 3*y + 1 = 0");
  auto ds = difference_of_squares(d.equations[0]);
  ASSERT_TRUE(ds);
  EXPECT_TRUE(ds->matches(d.equations[0].lhs));
  Verdict dv = factor_pair_solve(*ds, d);
  EXPECT_EQ(as_set(dv.solutions), brute2(d, "x", "y", 200));

  auto cv = common_variable_factor(P("x*y + y*z - x*y*z = 0").equations[0].lhs);
  ASSERT_TRUE(cv);
  EXPECT_EQ(cv->first, "y");
  EXPECT_FALSE(common_variable_factor(P("x*y + 1 = 0").equations[0].lhs));
}

TEST(Discriminant, DownwardRange) {
  Problem pr = P("5*x^2 - 8*x*y + 11*y^2 - 1175 = 0");
  Verdict v = discriminant_solve(pr.equations[0], "x", pr);
  ASSERT_EQ(v.status, Status::Finite);
  EXPECT_EQ(v.completeness, "discriminant-range");
  std::set<Assignment> expect;
  for (auto [x, y] : std::vector<std::pair<long, long>>{{-10, 5}, {18, 5}, {2, 11}, {10, -5}, {-18, -5}, {-2, -11}})
    expect.insert({{"x", x}, {"y", y}});
  EXPECT_EQ(as_set(v.solutions), expect);
  // discriminant negative just outside the range
  Integer y = 13;
  EXPECT_LT(64 * y * y - 20 * (11 * y * y - 1175), 0);
}

TEST(Discriminant, FactorRoute) {
  Problem pr = P("x^2 - x*y + 6*x - y + 2 = 0");
  Verdict v = discriminant_solve(pr.equations[0], "x", pr);
  ASSERT_EQ(v.status, Status::Finite);
  EXPECT_EQ(v.completeness, "factor-enumeration");
  EXPECT_EQ(as_set(v.solutions), brute2(pr, "x", "y", 200));
}

TEST(Discriminant, PellRoute) {
  Problem pr = P("x^2 + x - 2*y^2 = 0");
  Verdict v = discriminant_solve(pr.equations[0], "x", pr);
  ASSERT_EQ(v.status, Status::Family);
  auto m = members(v.families, -8, 8);
  for (const auto& a : m) EXPECT_EQ(pr.equations[0].lhs.evaluate(a), 0);
  for (const auto& a : brute2(pr, "x", "y", 300)) EXPECT_TRUE(m.count(a));
  EXPECT_GT(m.size(), 8u);
}

TEST(Discriminant, ConstantDiscriminantFamilies) {
  Problem pr = P("x^2 - 2*x*y + y^2 - 4 = 0");
  Verdict v = discriminant_solve(pr.equations[0], "x", pr);
  ASSERT_EQ(v.status, Status::Family);
  auto m = members(v.families, -40, 40);
  for (const auto& a : m) EXPECT_EQ(pr.equations[0].lhs.evaluate(a), 0);
  for (const auto& a : brute2(pr, "x", "y", 30)) EXPECT_TRUE(m.count(a));
}

TEST(Discriminant, RandomAgainstBruteForce) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<long> co(-4, 4);
  int checked = 0;
  for (int it = 0; it < 400 && checked < 60; ++it) {
    long a = co(rng), b = co(rng), c = co(rng), d = co(rng), e = co(rng), f = co(rng) * 5;
    if (a == 0) continue;
    Polynomial p = V("x").pow(2) * a + V("x") * V("y") * b + V("y").pow(2) * c + V("x") * d + V("y") * e + K(f);
    Problem pr;
    pr.equations.push_back({p, {}, std::nullopt});
    if (pr.variables().size() != 2) continue;
    Verdict v;
    try {
      v = discriminant_solve(pr.equations[0], "x", pr);
    } catch (const NotApplicable&) {
      continue;
    }
    if (v.status != Status::Finite && v.status != Status::NoSolution) continue;
    EXPECT_EQ(within(pr, v.solutions, 120), brute2(pr, "x", "y", 120)) << render_polynomial(p);
    ++checked;
  }
  EXPECT_GE(checked, 30);
}

TEST(Separation, WorkedExamples) {
  Problem a = P("3*x + 5*x*y - 6*y - 5 = 0");
  Verdict v = separation_solve(a.equations[0], a);
  ASSERT_EQ(v.status, Status::Finite);
  EXPECT_EQ(v.completeness, "divisor-candidates");
  EXPECT_EQ(v.solutions, (std::vector<Assignment>{{{"x", 1}, {"y", -2}}}));

  Problem b = P("x^2 - 9*x - 4*y - x*y + 13 = 0");
  v = separation_solve(b.equations[0], b);
  EXPECT_EQ(v.solutions.size(), 8u);
  EXPECT_EQ(as_set(v.solutions), brute2(b, "x", "y", 200));

  Problem c = P("x^3*y - 125*x + 125 = 0");
  v = separation_solve(c.equations[0], c);
  std::set<Assignment> expect{{{"x", 1}, {"y", 0}}, {{"x", -1}, {"y", 250}}, {{"x", 5}, {"y", 4}}, {{"x", -5}, {"y", 6}}};
  EXPECT_EQ(as_set(v.solutions), expect);
}

TEST(Separation, RandomAgainstBruteForce) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<long> co(-5, 5);
  int checked = 0;
  for (int it = 0; it < 300 && checked < 50; ++it) {
    // (q1 x + q0 + q2 x^2) y + r2 x^2 + r1 x + r0
    Polynomial q = V("x") * co(rng) + K(co(rng)) + V("x").pow(2) * (it % 2 ? co(rng) : 0);
    Polynomial r = V("x").pow(2) * co(rng) + V("x") * co(rng) + K(co(rng) * 7);
    Problem pr;
    pr.equations.push_back({q * V("y") + r, {}, std::nullopt});
    Verdict v;
    try {
      v = separation_solve(pr.equations[0], pr);
    } catch (const NotApplicable&) {
      continue;
    }
    EXPECT_EQ(within(pr, v.solutions, 150), brute2(pr, "x", "y", 150)) << render_polynomial(pr.equations[0].lhs);
    ++checked;
  }
  EXPECT_GE(checked, 20);
}

TEST(Flt, QuarticZeroCases) {
  Problem pr = P("16*x^4 + 81*y^4 - z^4 = 0");
  auto m = flt_check(pr.equations[0], pr);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->n, 4u);
  EXPECT_EQ(m->certificate.kind, "flt");
  ASSERT_EQ(m->zero_cases.status, Status::Family);
  auto mem = members(m->zero_cases.families, 0, 12);
  for (const auto& a : mem) EXPECT_EQ(pr.equations[0].lhs.evaluate(a), 0);
  for (long x = -8; x <= 8; ++x)
    for (long y = -8; y <= 8; ++y)
      for (long z = -20; z <= 20; ++z) {
        Assignment a{{"x", x}, {"y", y}, {"z", z}};
        if (pr.equations[0].lhs.evaluate(a) == 0) EXPECT_TRUE(mem.count(a)) << x << " " << y << " " << z;
      }
  EXPECT_TRUE(mem.count({{"x", 1}, {"y", 0}, {"z", 2}}));
}

TEST(Flt, DisguisedCubic) {
  Problem pr = P("x^3 + y^6 - z^9 = 0");
  auto m = flt_check(pr.equations[0], pr);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->n, 3u);
  auto mem = members(m->zero_cases.families, 0, 6);
  for (const auto& a : mem) EXPECT_EQ(pr.equations[0].lhs.evaluate(a), 0);
  EXPECT_TRUE(mem.count({{"x", 8}, {"y", 0}, {"z", 2}}));
  EXPECT_TRUE(mem.count({{"x", 0}, {"y", -8}, {"z", 4}}));
}

TEST(Flt, NotApplicable) {
  EXPECT_FALSE(flt_check(P("x^2 + y^2 - z^2 = 0").equations[0], P("x^2 + y^2 - z^2 = 0")));
  EXPECT_FALSE(flt_check(P("2*x^3 + y^3 - z^3 = 0").equations[0], P("2*x^3 + y^3 - z^3 = 0")));
  EXPECT_FALSE(flt_check(P("x^3 + y^3 + z^3 - 58 = 0").equations[0], P("x^3 + y^3 + z^3 - 58 = 0")));
  auto withc = flt_check(P("x^3 + y^3 = 8").equations[0], P("x^3 + y^3 = 8"));
  ASSERT_TRUE(withc);
  EXPECT_EQ(as_set(withc->zero_cases.solutions),
            (std::set<Assignment>{{{"x", 0}, {"y", 2}}, {{"x", 2}, {"y", 0}}}));
}

TEST(Binomial, RandomMatchesBruteForce) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<long> co(1, 12), ex(1, 4);
  Problem pr;
  for (int it = 0; it < 80; ++it) {
    Integer alpha = co(rng) * (it % 2 ? 1 : -1), beta = -co(rng) * (it % 3 ? 1 : -1);
    unsigned long a = ex(rng), b = ex(rng);
    auto fams = solve_binomial(alpha, "u", a, beta, "w", b, pr);
    auto mem = members(fams, 0, 40);
    const long R = 25;
    for (const auto& m : mem) EXPECT_EQ(alpha * ipow(m.at("u"), a) + beta * ipow(m.at("w"), b), 0);
    for (long u = -R; u <= R; ++u)
      for (long w = -R; w <= R; ++w)
        if (alpha * ipow(u, a) + beta * ipow(w, b) == 0)
          EXPECT_TRUE(mem.count({{"u", u}, {"w", w}})) << alpha << "u^" << a << " + " << beta << "w^" << b << " at " << u << "," << w;
  }
}

namespace {

void check_isolated(const std::string& text, const std::string& z, std::size_t families, long box) {
  Problem pr = P(text);
  Verdict v = isolated_linear_solve(pr.equations[0], pr);
  ASSERT_EQ(v.status, Status::Family) << text;
  EXPECT_EQ(v.families.size(), families) << text;
  for (const auto& f : v.families)
    for (const auto& a : members({f}, 0, 20)) EXPECT_EQ(pr.equations[0].lhs.evaluate(a), 0) << text;
  for (const auto& f : v.families) EXPECT_TRUE(members({f}, 0, 20).size() > 0);
  // completeness on a small box of the non-isolated variables
  auto mem = members(v.families, -box, 3 * box);
  auto vars = pr.variables();
  std::vector<std::string> others;
  for (const auto& x : vars)
    if (x != z) others.push_back(x);
  std::function<void(std::size_t, Assignment&)> rec = [&](std::size_t i, Assignment& a) {
    if (i == others.size()) {
      Polynomial g = pr.equations[0].lhs;
      for (const auto& [n, val] : a) g = g.substitute_value(n, val);
      // g = A*z + c
      auto co = g.coefficients_in(z);
      Integer c = co[0].constant_term(), A = co[1].constant_term();
      if (c % A != 0) return;
      Assignment full = a;
      full[z] = -c / A;
      EXPECT_TRUE(mem.count(full)) << text;
      return;
    }
    bool expo = pr.equations[0].lhs.occurs_exponentially(others[i]);
    for (long t = expo ? 0 : -box; t <= box; ++t) {
      a[others[i]] = t;
      rec(i + 1, a);
    }
    a.erase(others[i]);
  };
  Assignment a;
  rec(0, a);
}

}  // namespace

TEST(IsolatedLinear, KnownFamilies) {
  check_isolated("7^x - 8^y - z = 0", "z", 1, 5);
  check_isolated("5*x + 4^y = 11", "x", 1, 6);
  check_isolated("3^x + 5^y - 4*z - 2 = 0", "z", 1, 5);
  check_isolated("5^x - 11*x + 3*y + 1 = 0", "y", 2, 8);
  check_isolated("7^x - 8^y - 2*z = 0", "z", 1, 5);
  check_isolated("x^2 - 3*y - 2*z = 0", "z", 2, 6);
}

TEST(IsolatedLinear, Rendering) {
  Problem pr = P("5*x + 4^y = 11");
  Verdict v = isolated_linear_solve(pr.equations[0], pr);
  ASSERT_EQ(v.families.size(), 1u);
  EXPECT_EQ(v.families[0].expressions.at("y").render(), "2*k");
  EXPECT_EQ(v.families[0].expressions.at("x").render(), "(-16^k + 11)/5");
  Problem q = P("7^x - 8^y - z = 0");
  Verdict w = isolated_linear_solve(q.equations[0], q);
  EXPECT_EQ(w.families[0].expressions.at("z").render(), "7^k - 8^s");
}

TEST(IsolatedLinear, ObstructionAndNotApplicable) {
  Problem pr = P("2*z + 3^y = 4");
  Verdict v = isolated_linear_solve(pr.equations[0], pr);
  EXPECT_EQ(v.status, Status::NoSolution);
  Problem q = P("x^2 + y^2 = 5");
  EXPECT_THROW(isolated_linear_solve(q.equations[0], q), NotApplicable);
}

TEST(Poly, IntegerRootsAndBezout) {
  EXPECT_EQ(integer_roots({-6, 11, -6, 1}), (std::vector<Integer>{1, 2, 3}));
  EXPECT_EQ(integer_roots({0, 0, 1}), (std::vector<Integer>{0}));
  EXPECT_TRUE(integer_roots({1, 0, 1}).empty());
  EXPECT_EQ(integer_roots({Integer("-1000000000000"), 0, 1}), (std::vector<Integer>{-1000000, 1000000}));
  UniPoly q = UniPoly::from_integers({-6, 5}), r = UniPoly::from_integers({-5, 3});
  Bezout b = extended_euclid(q, r);
  EXPECT_EQ(b.g.degree(), 0);
  EXPECT_EQ(b.s * q + b.t * r, b.g);
}
