#include <gtest/gtest.h>

#include <climits>
#include <functional>
#include <random>
#include <set>

#include "dioph/parse.hpp"
#include "dioph/search.hpp"

using namespace dioph;

namespace {

Problem P(const std::string& text) { return parse_problem(text); }

/// Unrestricted scan of the box with the reference evaluator.
std::set<Assignment> brute(const Problem& pr, long lo, long hi) {
  auto vars = pr.variables();
  std::set<Assignment> out;
  Assignment a;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == vars.size()) {
      try {
        if (pr.satisfied_by(a)) out.insert(a);
      } catch (const std::exception&) {
        // outside the natural domain of a factorial or exponential
      }
      return;
    }
    for (long x = lo; x <= hi; ++x) {
      if (!pr.domain_of(vars[i]).contains(x)) continue;
      a[vars[i]] = x;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

std::set<Assignment> as_set(const std::vector<Assignment>& v) { return {v.begin(), v.end()}; }

EnumResult run(const Problem& pr, const BoundSet& b, bool sym = true, bool split = true) {
  EnumOptions o;
  o.use_symmetry = sym;
  o.sign_split = split;
  return enumerate_box(pr, b, detect_symmetry(pr.equations[0], pr.domains), o);
}

}  // namespace

TEST(Bounds, EvenPowers) {
  auto pr = P("x^4 + y^4 + z^4 = 3042");
  auto b = infer_bounds(pr.equations[0], pr.domains);
  EXPECT_TRUE(b.complete);
  EXPECT_FALSE(b.infeasible);
  for (const char* v : {"x", "y", "z"}) {
    EXPECT_EQ(*b.vars[v].lo, -7);
    EXPECT_EQ(*b.vars[v].hi, 7);
    EXPECT_EQ(b.vars[v].provenance, "proved-even-power");
  }
  auto r = run(pr, b);
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(r.solutions.size(), 48u);
  EXPECT_EQ(as_set(r.solutions), brute(pr, -7, 7));
}

TEST(Bounds, ExponentialMinimum) {
  auto pr = P("2^x + 3^y = 1 ; x,y in N0");
  auto b = infer_bounds(pr.equations[0], pr.domains);
  EXPECT_TRUE(b.infeasible);
  EXPECT_EQ(b.argument["total"], 1);  // 1 + 1 - 1
}

TEST(Bounds, ExponentialTarget) {
  auto pr = P("2^x + 3^y = 5^z + 100 ; z in [0, 3]");
  auto b = infer_bounds(pr.equations[0], pr.domains);
  ASSERT_TRUE(b.complete);
  EXPECT_EQ(b.vars["x"].provenance, "proved-exponential-log");
  EXPECT_LE(*b.vars["x"].hi, 8);
  EXPECT_EQ(as_set(run(pr, b).solutions), brute(pr, 0, 12));
}

TEST(Bounds, Factorial) {
  auto pr = P("x^2 + y^2 + z! = 24");
  auto b = infer_bounds(pr.equations[0], pr.domains);
  ASSERT_TRUE(b.complete);
  EXPECT_EQ(*b.vars["z"].hi, 4);
  auto r = run(pr, b);
  EXPECT_EQ(r.solutions.size(), 5u);
  EXPECT_EQ(as_set(r.solutions), brute(pr, -6, 6));
}

TEST(Bounds, CompletedSquare) {
  auto pr = P("x^2 - x*y + y^2 + 2*x - y = 2");
  auto b = infer_bounds(pr.equations[0], pr.domains);
  ASSERT_TRUE(b.complete);
  EXPECT_GE(*b.vars["x"].lo, -5);
  EXPECT_LE(*b.vars["x"].hi, 1);
  auto r = run(pr, b);
  EXPECT_EQ(r.solutions.size(), 6u);
  EXPECT_EQ(as_set(r.solutions), brute(pr, -10, 10));
}

TEST(Bounds, Reciprocal) {
  auto pr = P("1/x + 1/y + 1/z = 4");
  auto b = infer_bounds(pr.equations[0], pr.domains);
  EXPECT_TRUE(b.infeasible);
  auto q = P("z = 1/x + 1/y + 2/(x*y) ; x,y,z in N");
  auto c = infer_bounds(q.equations[0], q.domains);
  EXPECT_EQ(c.vars["z"].provenance, "proved-reciprocal");
  EXPECT_EQ(*c.vars["z"].hi, 4);
  EXPECT_FALSE(c.complete);
}

TEST(Bounds, UnboundedStaysIncomplete) {
  auto pr = P("x^2 - 2*y^2 = 1");
  EXPECT_FALSE(infer_bounds(pr.equations[0], pr.domains).complete);
  auto q = P("x^3 + y^3 = 9");
  EXPECT_FALSE(infer_bounds(q.equations[0], q.domains).complete);
}

TEST(Bounds, Certification) {
  std::mt19937 rng(7);
  for (const char* text : {"x^4 + y^4 + z^4 = 3042", "x^2 + y^2 + z! = 24", "x^2 - x*y + y^2 + 2*x - y = 2",
                           "2^x + 3^y = 5^z + 100 ; z in [0, 3]", "x^2 + 3*y^4 + 2^z = 700"}) {
    auto pr = P(text);
    const auto& eq = pr.equations[0];
    auto b = infer_bounds(eq, pr.domains);
    ASSERT_TRUE(b.complete) << text;
    for (const auto& [v, vb] : b.vars) {
      if (vb.provenance == "domain") continue;
      for (int i = 0; i < 1000; ++i) {
        Assignment a;
        for (const auto& [w, wb] : b.vars) {
          std::uniform_int_distribution<long> d(wb.lo->get_si(), wb.hi->get_si());
          a[w] = d(rng);
        }
        // exponential and factorial arguments stay nonnegative
        long floor = eq.lhs.occurs_exponentially(v) || eq.lhs.occurs_factorially(v) ? 0 : LONG_MIN / 2;
        if (auto l = pr.domain_of(v).lower()) floor = std::max(floor, l->get_si());
        long below = std::max(floor, vb.lo->get_si() - 50);
        if (i % 2 == 0 && below < vb.lo->get_si()) {
          a[v] = std::uniform_int_distribution<long>(below, vb.lo->get_si() - 1)(rng);
        } else {
          a[v] = vb.hi->get_si() + std::uniform_int_distribution<long>(1, 50)(rng);
        }
        EXPECT_NE(evaluate(eq, a), 0) << text << " " << render_assignment(a);
      }
    }
  }
}

TEST(Symmetry, Detection) {
  auto s = detect_symmetry(P("x + y + z - x*y*z = 0").equations[0]);
  ASSERT_EQ(s.symmetric.size(), 1u);
  EXPECT_EQ(s.symmetric[0].size(), 3u);
  EXPECT_TRUE(s.cyclic.empty());

  auto c = detect_symmetry(P("x^3*y + y^3*z + z^3*x - 1 = 0").equations[0]);
  EXPECT_TRUE(c.symmetric.empty());
  ASSERT_EQ(c.cyclic.size(), 1u);
  EXPECT_EQ(c.cyclic[0].size(), 3u);

  auto n = detect_symmetry(P("x^2 + 2*y = 0").equations[0]);
  EXPECT_TRUE(n.symmetric.empty());
  EXPECT_TRUE(n.cyclic.empty());

  auto pr = P("x + y = 3 ; x in N");
  EXPECT_TRUE(detect_symmetry(pr.equations[0], pr.domains).symmetric.empty());
}

TEST(Symmetry, ExpansionMatchesBruteForce) {
  for (const char* text : {"x + y + z = x*y*z", "x^2 + y^2 + z^2 = 3*x*y*z", "x*y + y*z + z*x = 11",
                           "x^3*y + y^3*z + z^3*x = 0", "x^2*y + y^2*z + z^2*x = 2", "x*y*z + x + y + z = 8"}) {
    auto pr = P(text);
    auto b = user_box(pr.variables(), -6, 6);
    auto with = run(pr, b, true, false);
    auto without = run(pr, b, false, false);
    EXPECT_EQ(as_set(with.solutions), brute(pr, -6, 6)) << text;
    EXPECT_EQ(with.solutions, without.solutions) << text;
    EXPECT_LT(with.evaluations, without.evaluations) << text;
    EXPECT_FALSE(with.complete);
  }
}

TEST(Symmetry, FourVariableProduct) {
  auto pr = P("x + y + z + w = x*y*z*w ; x,y,z,w in N");
  auto r = run(pr, user_box(pr.variables(), 1, 6, pr.domains));
  EXPECT_EQ(r.solutions.size(), 12u);
  EXPECT_EQ(as_set(r.solutions), brute(pr, 1, 6));
}

TEST(SignSplit, MatchesFullBox) {
  auto pr = P("x^3*y + 3*x*y^3 + 7*x*y - 1085 = 0");
  EXPECT_TRUE(sign_flip_invariant(pr.equations[0]));
  EXPECT_FALSE(sign_flip_invariant(P("x^2 + y = 1").equations[0]));
  auto b = user_box(pr.variables(), -20, 20);
  auto split = run(pr, b, false, true);
  auto full = run(pr, b, false, false);
  EXPECT_EQ(split.solutions, full.solutions);
  EXPECT_LT(split.evaluations, full.evaluations);
  EXPECT_TRUE(as_set(split.solutions).count({{"x", 1}, {"y", 7}}));
  EXPECT_TRUE(as_set(split.solutions).count({{"x", -1}, {"y", -7}}));
}

TEST(Enumerate, BudgetExceeded) {
  auto pr = P("x + y + z = 1000");
  EnumOptions o;
  o.budget = 1000;
  auto r = enumerate_box(pr, user_box(pr.variables(), -50, 50), {}, o);
  EXPECT_TRUE(r.budget_exceeded);
  EXPECT_FALSE(r.complete);
}

TEST(Enumerate, Deterministic) {
  auto pr = P("x^2 + y^2 = 25");
  auto b = user_box(pr.variables(), -10, 10);
  auto a = run(pr, b), c = run(pr, b);
  EXPECT_EQ(a.solutions, c.solutions);
  EXPECT_TRUE(std::is_sorted(a.solutions.begin(), a.solutions.end()));
  EXPECT_EQ(a.solutions.size(), 12u);
}

TEST(Evaluator, Overflow) {
  auto pr = P("x^20 - y^20 = 0");
  Evaluator ev(pr.equations[0].lhs, {"x", "y"});
  EXPECT_TRUE(ev.is_zero({1000, -1000}));
  EXPECT_FALSE(ev.is_zero({1000, 999}));
  EXPECT_EQ(ev.value({2, 1}), Integer(1048575));
  auto q = P("2^x + z! = 0");
  Evaluator e2(q.equations[0].lhs, {"x", "z"});
  EXPECT_EQ(e2.value({200, 40}), ipow(2, 200) + factorial(40));
}

TEST(Probe, Examples) {
  auto none = probe(P("4*x^2 + 4*x - 15 - y^3 = 0"));
  EXPECT_TRUE(none.hits.empty());
  EXPECT_TRUE(none.exhausted);
  EXPECT_EQ(none.evaluations, 201u * 201u);

  auto fam = probe(P("x*y + y*z - x*y*z = 0"), 100, 1'000'000, 1000);
  EXPECT_EQ(fam.hits.size(), 1000u);
  std::set<int> kinds;
  for (const auto& a : fam.hits) {
    long x = a.at("x").get_si(), y = a.at("y").get_si(), z = a.at("z").get_si();
    if (y == 0) kinds.insert(0);
    else if (x == 0 && z == 0) kinds.insert(1);
    else kinds.insert(2);
  }
  EXPECT_EQ(kinds.size(), 3u);

  auto all = probe(P("x - x = 0"), 5);
  EXPECT_EQ(all.hits.size(), all.evaluations);
  EXPECT_EQ(all.evaluations, 11u);
}

TEST(Probe, SpiralOrderAndDomains) {
  auto r = probe(P("x^2 + y^2 = 25 ; x in N0"), 10);
  ASSERT_FALSE(r.hits.empty());
  // low values first: shell 5 contains every hit
  for (const auto& a : r.hits) EXPECT_LE(std::max(abs(a.at("x")), abs(a.at("y"))), 5);
  for (const auto& a : r.hits) EXPECT_GE(a.at("x"), 0);
  EXPECT_EQ(r.evaluations, 11u * 21u);
  EXPECT_EQ(r.hits.size(), 7u);
}
