// Acceptance run: one PASS/FAIL line per criterion, nonzero exit when any fails.
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "acceptance_cases.hpp"
#include "dioph/corpus.hpp"
#include "dioph/engine.hpp"
#include "dioph/linear.hpp"
#include "dioph/modular.hpp"
#include "dioph/parse.hpp"
#include "dioph/pell.hpp"
#include "dioph/search.hpp"

using namespace dioph;

namespace {

struct Outcome {
  std::vector<std::string> problems;
  std::size_t checks = 0;
  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok && problems.size() < 8) problems.push_back(what);
  }
};

std::vector<Assignment> rows_to_assignments(const std::vector<std::vector<std::pair<std::string, long>>>& rows) {
  std::vector<Assignment> out;
  for (const auto& r : rows) {
    Assignment a;
    for (const auto& [k, v] : r) a[k] = v;
    out.push_back(a);
  }
  canonicalize(out);
  return out;
}

std::vector<Assignment> trace_solutions(const Verdict& v) {
  std::vector<Assignment> out;
  for (const auto& t : v.trace) out.insert(out.end(), t.solutions.begin(), t.solutions.end());
  canonicalize(out);
  return out;
}

std::set<Assignment> brute(const Problem& pr, long lo, long hi) {
  auto vars = pr.variables();
  std::set<Assignment> out;
  Assignment a;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == vars.size()) {
      try {
        if (pr.satisfied_by(a)) out.insert(a);
      } catch (const std::exception&) {
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

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void refutations(Outcome& o) {
  for (const auto& c : cases::kRefutations) {
    Problem p = parse_problem(c.problem);
    Verdict v = solve(p);
    if (v.status != Status::NoSolution) {
      o.expect(false, c.problem + ": " + status_name(v.status));
      continue;
    }
    o.expect(v.certificate->kind == c.kind, c.problem + ": certificate " + v.certificate->kind);
    if (c.modulus)
      o.expect(v.certificate->modulus && *v.certificate->modulus <= *c.modulus, c.problem + ": modulus too large");
    o.expect(verify_certificate(p, *v.certificate).ok, c.problem + ": certificate rejected");
  }
}

void exact_sets(Outcome& o) {
  for (const auto& c : cases::kExact) {
    Problem p = parse_problem(c.problem);
    Verdict v = solve(p);
    auto want = rows_to_assignments(c.solutions);
    if (want.empty()) {
      o.expect(v.status == Status::NoSolution, c.problem + ": expected no solutions, got " + status_name(v.status));
      if (v.certificate) o.expect(verify_certificate(p, *v.certificate).ok, c.problem + ": certificate rejected");
      continue;
    }
    o.expect(v.status == Status::Finite, c.problem + ": " + status_name(v.status));
    o.expect(v.solutions == want, c.problem + ": solution set differs");
    o.expect(verify_solutions(p, v.solutions).ok, c.problem + ": substitution failed");
  }
}

void counted_sets(Outcome& o) {
  for (const auto& c : cases::kCounted) {
    Problem p = parse_problem(c.problem);
    Verdict v = solve(p);
    auto listed = rows_to_assignments(c.listed);
    if (v.status == Status::Finite) {
      o.expect(v.solutions.size() == c.count,
               c.problem + ": " + std::to_string(v.solutions.size()) + " solutions, expected " + std::to_string(c.count));
      o.expect(verify_solutions(p, v.solutions).ok, c.problem + ": substitution failed");
      if (!listed.empty()) o.expect(v.solutions == listed, c.problem + ": differs from the listed solutions");
    } else if (v.status == Status::Inconclusive && c.may_be_inconclusive) {
      auto seen = trace_solutions(v);
      o.expect(seen == listed, c.problem + ": found solutions differ from the listed ones");
      o.expect(verify_solutions(p, seen).ok, c.problem + ": substitution failed");
    } else {
      o.expect(false, c.problem + ": " + status_name(v.status));
    }
  }
}

void pell_trichotomy(Outcome& o) {
  for (const auto& c : cases::kPell) {
    auto eq = parse_problem(c.equation).equations.at(0);
    auto red = reduce_to_pell(eq);
    if (!red) {
      o.expect(false, c.equation + ": no reduction");
      continue;
    }
    auto bt = back_transform(pell_classes(red->form), *red, 5);
    o.expect(bt.classification == c.classification, c.equation + ": classified " + bt.classification);
    if (c.classification == "all") {
      o.expect(bt.first.size() == 5, c.equation + ": fewer than 5 members");
      for (const auto& a : bt.first) o.expect(eq.lhs.evaluate(a) == 0, c.equation + ": " + render_assignment(a));
    }
  }
  auto unit = fundamental_solution(5);
  o.expect(unit.u == 9 && unit.v == 4, "fundamental_solution(5) != (9,4)");
}

void families(Outcome& o) {
  for (const auto& text : cases::kFamilies) {
    Problem p = parse_problem(text);
    Verdict v = solve(p);
    o.expect(v.status == Status::Family && !v.families.empty(), text + ": " + status_name(v.status));
    auto rep = verify_solutions(p, {}, v.families);
    o.expect(rep.ok, text + ": " + (rep.failures.empty() ? "" : rep.failures.front()));
  }
}

void modular_fuzz(Outcome& o, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> val(-5000, 5000);
  std::size_t assignments = 0;
  auto hammer = [&](const Problem& p, const std::string& label, int count) {
    auto eff = effective_domains(p.equations[0], p.domains);
    auto vars = p.variables();
    for (int k = 0; k < count; ++k) {
      Assignment a;
      for (const auto& x : vars) {
        long r = val(rng);
        bool natural = eff.count(x) && eff.at(x).lower();
        if (natural) r = std::abs(r) % 60;
        a[x] = r;
      }
      bool sat = false;
      try {
        sat = p.satisfied_by(a);
      } catch (const std::exception&) {
        continue;
      }
      o.expect(!sat, label + " satisfied by " + render_assignment(a));
      ++assignments;
    }
  };
  for (const auto& c : cases::kRefutations) {
    Problem p = parse_problem(c.problem);
    Verdict v = solve(p);
    if (v.status == Status::NoSolution && v.certificate->kind == "modular") hammer(p, c.problem, 1000);
  }
  // random polynomials that admit an obstruction
  std::uniform_int_distribution<int> coef(-9, 9), deg(0, 4), cst(-50, 50);
  const std::vector<std::string> names = {"x", "y", "z"};
  int found = 0;
  for (int trial = 0; trial < 3000 && found < 40; ++trial) {
    Polynomial f = Polynomial::constant(cst(rng));
    for (int k = 0; k < 3; ++k) {
      Polynomial m = Polynomial::constant(coef(rng));
      for (std::size_t i = 0; i < 1 + trial % 3; ++i) m = m * Polynomial::variable(names[i]).pow(deg(rng));
      f = f + m;
    }
    if (f.variables().empty()) continue;
    Problem p;
    NormalizedEquation e;
    e.lhs = f;
    p.equations.push_back(e);
    auto scan = find_obstruction(e, default_moduli(32));
    if (!scan.certificate) continue;
    ++found;
    hammer(p, render(p), 200);
  }
  o.expect(assignments >= 10000, "only " + std::to_string(assignments) + " fuzzed assignments");
}

void linear_completeness(Outcome& o, std::mt19937_64& rng) {
  const long B = 12;
  for (int i = 0; i < 1000; ++i) {
    std::size_t n = 2 + (i % 3 == 0);
    std::size_t rows = (n == 3 && i % 2 == 0) ? 2 : 1;
    Matrix A(rows, Vector(n));
    Vector b(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      for (auto& x : A[r]) x = static_cast<long>(rng() % 15) - 7;
      b[r] = static_cast<long>(rng() % 41) - 20;
    }
    auto sol = solve_linear_lattice(A, b);
    std::vector<Vector> box;
    Vector x(n);
    std::function<void(std::size_t)> rec = [&](std::size_t j) {
      if (j == n) {
        for (std::size_t r = 0; r < rows; ++r) {
          Integer s = 0;
          for (std::size_t k = 0; k < n; ++k) s += A[r][k] * x[k];
          if (s != b[r]) return;
        }
        box.push_back(x);
        return;
      }
      for (long v = -B; v <= B; ++v) {
        x[j] = v;
        rec(j + 1);
      }
    };
    rec(0);
    if (!sol.lattice) {
      o.expect(box.empty(), "instance " + std::to_string(i) + ": refuted but has box solutions");
      o.expect(check_linear_certificate(A, b, sol.lambda, sol.g), "instance " + std::to_string(i) + ": bad certificate");
      continue;
    }
    const auto& lat = *sol.lattice;
    // every box solution is p + basis * t for an integral t
    Matrix M(n, Vector(lat.basis.size()));
    for (std::size_t k = 0; k < lat.basis.size(); ++k)
      for (std::size_t j = 0; j < n; ++j) M[j][k] = lat.basis[k][j];
    for (const auto& s : box) {
      Vector diff(n);
      for (std::size_t j = 0; j < n; ++j) diff[j] = s[j] - lat.particular[j];
      bool member;
      if (lat.basis.empty()) {
        member = std::all_of(diff.begin(), diff.end(), [](const Integer& d) { return d == 0; });
      } else {
        member = solve_linear_lattice(M, diff).lattice.has_value();
      }
      o.expect(member, "instance " + std::to_string(i) + ": box solution outside the lattice");
    }
    // and every lattice member solves the system
    for (int k = 0; k < 5; ++k) {
      std::vector<Integer> t;
      for (std::size_t q = 0; q < lat.basis.size(); ++q) t.push_back(static_cast<long>(rng() % 21) - 10);
      auto m = lat.member(t);
      for (std::size_t r = 0; r < rows; ++r) {
        Integer s = 0;
        for (std::size_t j = 0; j < n; ++j) s += A[r][j] * m[j];
        o.expect(s == b[r], "instance " + std::to_string(i) + ": lattice member fails");
      }
    }
  }
}

void pell_orbits(Outcome& o) {
  std::size_t members = 0;
  for (long d = 2; d <= 30; ++d) {
    if (is_square(Integer(d))) continue;
    for (long c = -20; c <= 20; ++c) {
      if (c == 0) continue;
      Verdict v = solve_pell(PellForm{d, c});
      if (v.status != Status::Family) continue;
      for (const auto& f : v.families)
        for (long k = 0; k < 50; ++k) {
          auto [X, Y] = f.pell->member(k);
          o.expect(X * X - d * Y * Y == c, "d=" + std::to_string(d) + " c=" + std::to_string(c));
          ++members;
        }
    }
  }
  o.expect(members > 1000, "too few orbit members");
}

void symmetry(Outcome& o, const std::vector<CorpusCase>& corpus) {
  std::size_t tested = 0;
  for (const auto& c : corpus) {
    Problem p;
    try {
      p = parse_problem(c.problem);
    } catch (const std::exception&) {
      continue;
    }
    if (p.equations.size() != 1 || p.variables().size() < 2 || p.variables().size() > 4) continue;
    auto eff = effective_domains(p.equations[0], p.domains);
    auto sym = detect_symmetry(p.equations[0], eff);
    if (sym.symmetric.empty() && sym.cyclic.empty()) continue;
    const long R = p.variables().size() == 4 ? 5 : 7;
    auto box = user_box(p.variables(), -R, R, eff);
    EnumOptions opts;
    opts.sign_split = false;
    std::set<Assignment> got;
    try {
      auto r = enumerate_box(p, box, sym, opts);
      got = {r.solutions.begin(), r.solutions.end()};
    } catch (const std::exception& e) {
      o.expect(false, c.problem + ": " + e.what());
      continue;
    }
    o.expect(got == brute(p, -R, R), c.problem + ": symmetric enumeration differs from brute force");
    ++tested;
  }
  o.expect(tested >= 4, "only " + std::to_string(tested) + " symmetric corpus equations");
}

void engine_fuzz(Outcome& o, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-6, 6), nvars(1, 3), nterms(2, 4), deg(0, 3), cst(-30, 30);
  std::uniform_int_distribution<long> pt(-6, 6);
  const std::vector<std::string> names = {"x", "y", "z"};
  Config cfg;
  cfg.timeout_ms = 1500;
  cfg.probe_budget = 20'000;
  cfg.enum_budget = 2'000'000;
  for (int trial = 0; trial < 300; ++trial) {
    int n = nvars(rng);
    Polynomial f = Polynomial::constant(cst(rng));
    int t = nterms(rng);
    for (int k = 0; k < t; ++k) {
      Polynomial m = Polynomial::constant(coef(rng));
      for (int i = 0; i < n; ++i) m = m * Polynomial::variable(names[i]).pow(deg(rng));
      f = f + m;
    }
    if (f.variables().empty()) continue;
    if (trial % 2 == 0) {
      Assignment a;
      for (const auto& v : f.variables()) a[v] = pt(rng);
      f = f - Polynomial::constant(f.evaluate(a));
    }
    Problem p;
    NormalizedEquation e;
    e.lhs = f;
    p.equations.push_back(e);
    Verdict v = solve(p, cfg);
    if (v.status != Status::NoSolution) continue;
    o.expect(brute(p, -8, 8).empty(), render(p) + ": refuted despite a witness in [-8,8]");
    o.expect(verify_certificate(p, *v.certificate).ok, render(p) + ": certificate rejected");
  }
}

void determinism(Outcome& o, const std::vector<CorpusCase>& corpus) {
  Config cfg;
  auto first = corpus_report(run_corpus(corpus, cfg, 2)).dump(2);
  auto second = corpus_report(run_corpus(corpus, cfg, 2)).dump(2);
  o.expect(first == second, "two corpus runs differ");
  auto report = Json::parse(first);
  o.expect(report["failed"] == 0, std::to_string(report["failed"].get<long>()) + " corpus cases failed");
}

}  // namespace

int main() {
  std::mt19937_64 rng(424242);
  std::vector<CorpusCase> corpus;
  try {
    corpus = parse_corpus(read_file(DIOPH_CORPUS_FILE));
  } catch (const std::exception& e) {
    std::cerr << "cannot load corpus: " << e.what() << "\n";
    return 1;
  }

  struct Criterion {
    int number;
    std::string title;
    std::function<void(Outcome&)> run;
  };
  std::vector<Criterion> criteria = {
      {1, "sensibility refutations with valid certificates", refutations},
      {2, "exact finite solution sets", exact_sets},
      {3, "counted finite solution sets", counted_sets},
      {4, "Pell trichotomy and fundamental unit of 5", pell_trichotomy},
      {5, "family verdicts materialize to solutions", families},
      {6, "property suites",
       [&](Outcome& o) {
         modular_fuzz(o, rng);
         linear_completeness(o, rng);
         pell_orbits(o);
         symmetry(o, corpus);
         engine_fuzz(o, rng);
       }},
      {7, "deterministic corpus report", [&](Outcome& o) { determinism(o, corpus); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    bool ok = o.problems.empty();
    failed += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.number << ": " << c.title << " (" << o.checks
              << " checks)\n";
    for (const auto& p : o.problems) std::cout << "     " << p << "\n";
  }
  return failed == 0 ? 0 : 1;
}
