#include "dioph/algebraic.hpp"

#include <algorithm>
#include <functional>

#include "dioph/linear.hpp"
#include "dioph/modular.hpp"
#include "dioph/pell.hpp"
#include "dioph/poly.hpp"

namespace dioph {

Polynomial ProductForm::expand() const {
  Polynomial p = Polynomial::constant(1);
  for (const auto& f : forms) p = p * f;
  return p - Polynomial::constant(N);
}

Family point_family(const Assignment& a) {
  Family f;
  f.kind = "indexed";
  for (const auto& [v, x] : a) f.expressions[v] = ParamExpr::constant(x);
  return f;
}

namespace {

Certificate exhaustion(const std::string& method, Json extra = Json::object()) {
  Certificate c;
  c.kind = "exhaustion";
  c.data = Json::object();
  c.data["method"] = method;
  for (auto& [k, v] : extra.items()) c.data[k] = v;
  return c;
}

std::vector<std::string> domain_notes(const Problem& problem, const std::vector<std::string>& vars) {
  std::vector<std::string> out;
  auto nv = problem.nonvanishing();
  for (const auto& v : vars) {
    Domain d = problem.domain_of(v);
    if (d.kind != Domain::Kind::Z) out.push_back(v + " in " + d.name());
    if (nv.count(v)) out.push_back(v + " != 0");
  }
  return out;
}

bool all_integers(const Problem& problem, const std::vector<std::string>& vars) {
  auto nv = problem.nonvanishing();
  for (const auto& v : vars)
    if (problem.domain_of(v).kind != Domain::Kind::Z || nv.count(v)) return false;
  return true;
}

std::string fresh_name(const std::set<std::string>& taken, const std::string& base) {
  std::string n = base;
  for (int i = 1; taken.count(n); ++i) n = base + std::to_string(i);
  return n;
}

Signature power_sig(const std::string& v, unsigned long k = 1) {
  Signature s;
  s.powers[v] = k;
  return s;
}

bool affine(const Polynomial& p) { return p.is_polynomial_only() && p.degree() <= 1; }

Verdict collect(std::vector<Assignment> points, std::vector<Family> fams, const std::string& tag, Certificate empty) {
  canonicalize(points);
  if (!fams.empty()) {
    for (const auto& a : points) fams.push_back(point_family(a));
    return Verdict::family(std::move(fams));
  }
  if (points.empty()) return Verdict::no_solution(std::move(empty));
  return Verdict::finite(std::move(points), tag);
}

void push_unique(std::vector<Family>& fams, Family f) {
  for (const auto& g : fams)
    if (g == f) return;
  fams.push_back(std::move(f));
}

}  // namespace

// ------------------------------------------------------------------ product forms

Verdict factor_pair_solve(const ProductForm& pf, const Problem& problem) {
  if (pf.N == 0) throw ZeroTarget("product form with zero target");
  if (pf.forms.empty()) throw NotApplicable("no forms");
  for (const auto& f : pf.forms)
    if (!affine(f)) throw NotApplicable("form " + render_polynomial(f) + " is not affine");
  Json forms_json = Json::array();
  for (const auto& f : pf.forms) forms_json.push_back(render_polynomial(f));
  if (abs(pf.N) > Integer("18446744073709551616")) {
    Verdict v = Verdict::inconclusive();
    v.trace.push_back({"factor_pairs", "target too large to factor", 0, {}});
    return v;
  }
  std::set<std::string> varset;
  for (const auto& f : pf.forms)
    for (const auto& v : f.variables()) varset.insert(v);
  for (const auto& v : problem.variables()) varset.insert(v);
  std::vector<std::string> vars(varset.begin(), varset.end());
  const std::size_t n = pf.forms.size();
  Matrix A(n, Vector(vars.size(), 0));
  Vector c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < vars.size(); ++j) A[i][j] = pf.forms[i].coefficient(power_sig(vars[j]));
    c[i] = pf.forms[i].constant_term();
  }
  const auto divisors = signed_divisors(pf.N);
  std::vector<Assignment> points;
  std::vector<Family> fams;
  Vector f(n);
  std::function<void(std::size_t, const Integer&)> rec = [&](std::size_t i, const Integer& rest) {
    if (i + 1 == n) {
      f[i] = rest;
      Vector b(n);
      for (std::size_t k = 0; k < n; ++k) b[k] = f[k] - c[k];
      LinearSolution s = solve_linear_lattice(A, b);
      if (!s.lattice) return;
      if (s.lattice->basis.empty()) {
        Assignment a;
        for (std::size_t j = 0; j < vars.size(); ++j) a[vars[j]] = s.lattice->particular[j];
        if (problem.admits(a)) points.push_back(a);
      } else {
        Family fam = lattice_family(*s.lattice, vars);
        fam.constraints = domain_notes(problem, vars);
        push_unique(fams, std::move(fam));
      }
      return;
    }
    for (const auto& d : divisors) {
      if (rest % d != 0) continue;
      f[i] = d;
      rec(i + 1, rest / d);
    }
  };
  rec(0, pf.N);
  return collect(points, fams, "factor-enumeration",
                 exhaustion("factor_pairs", {{"forms", forms_json}, {"N", integer_json(pf.N)}, {"scale", integer_json(pf.scale)}}));
}

Verdict zero_form_solve(const ProductForm& pf, const Problem& problem) {
  if (pf.N != 0) throw NotApplicable("nonzero target");
  std::set<std::string> varset;
  for (const auto& f : pf.forms) {
    if (!affine(f)) throw NotApplicable("form " + render_polynomial(f) + " is not affine");
    for (const auto& v : f.variables()) varset.insert(v);
  }
  for (const auto& v : problem.variables()) varset.insert(v);
  std::vector<std::string> vars(varset.begin(), varset.end());
  std::vector<Assignment> points;
  std::vector<Family> fams;
  Json forms_json = Json::array();
  for (const auto& form : pf.forms) {
    forms_json.push_back(render_polynomial(form));
    Vector row(vars.size());
    for (std::size_t j = 0; j < vars.size(); ++j) row[j] = form.coefficient(power_sig(vars[j]));
    if (std::all_of(row.begin(), row.end(), [](const Integer& x) { return x == 0; })) {
      if (form.constant_term() != 0) continue;
    }
    LinearSolution s = solve_linear_lattice({row}, {-form.constant_term()});
    if (!s.lattice) continue;
    if (s.lattice->basis.empty()) {
      Assignment a;
      for (std::size_t j = 0; j < vars.size(); ++j) a[vars[j]] = s.lattice->particular[j];
      if (problem.admits(a)) points.push_back(a);
      continue;
    }
    Family fam = lattice_family(*s.lattice, vars);
    fam.kind = "zero_form";
    fam.constraints = domain_notes(problem, vars);
    push_unique(fams, std::move(fam));
  }
  return collect(points, fams, "factor-enumeration", exhaustion("zero_forms", {{"forms", forms_json}}));
}

std::optional<std::pair<std::string, Polynomial>> common_variable_factor(const Polynomial& p) {
  if (p.is_zero() || p.constant_term() != 0) return std::nullopt;
  for (const auto& v : p.variables()) {
    bool all = true;
    for (const auto& [sig, c] : p.terms()) {
      auto it = sig.powers.find(v);
      if (it == sig.powers.end()) {
        all = false;
        break;
      }
    }
    if (!all) continue;
    Polynomial q;
    for (const auto& [sig, c] : p.terms()) {
      Signature s = sig;
      if (--s.powers[v] == 0) s.powers.erase(v);
      q.add_term(s, c);
    }
    return std::make_pair(v, q);
  }
  return std::nullopt;
}

std::optional<ProductForm> bilinear_product_form(const Polynomial& p) {
  if (!p.is_polynomial_only()) return std::nullopt;
  auto vs = p.variables();
  if (vs.size() != 2) return std::nullopt;
  std::string x = *vs.begin(), y = *std::next(vs.begin());
  Signature xy;
  xy.powers = {{x, 1}, {y, 1}};
  for (const auto& [sig, c] : p.terms())
    if (!(sig.is_constant() || sig == xy || sig == power_sig(x) || sig == power_sig(y))) return std::nullopt;
  Integer a = p.coefficient(xy), b = p.coefficient(power_sig(x)), c = p.coefficient(power_sig(y)), d = p.constant_term();
  if (a == 0) return std::nullopt;
  ProductForm pf;
  pf.forms = {Polynomial::variable(x) * a + Polynomial::constant(c), Polynomial::variable(y) * a + Polynomial::constant(b)};
  pf.N = b * c - a * d;
  pf.scale = a;
  if (pf.scale < 0) {
    // keep the scale positive
    pf.forms[0] = -pf.forms[0];
    pf.N = -pf.N;
    pf.scale = -pf.scale;
    if (!pf.matches(p)) return std::nullopt;
  }
  if (!pf.matches(p)) return std::nullopt;
  return pf;
}

std::optional<ProductForm> difference_of_squares(const NormalizedEquation& eq) {
  if (eq.variables().size() != 2 || !eq.lhs.is_polynomial_only() || eq.lhs.degree() != 2) return std::nullopt;
  auto cf = complete_square_reduce(eq);
  if (!cf || cf->terms.size() != 2) return std::nullopt;
  CenteredTerm p = cf->terms[0], n = cf->terms[1];
  if (p.c < 0) std::swap(p, n);
  if (p.c <= 0 || n.c >= 0) return std::nullopt;
  Integer s;
  if (!is_square(p.c * -n.c, &s)) return std::nullopt;
  Polynomial X = (Polynomial::variable(p.var) * p.alpha + Polynomial::constant(p.beta)) * p.c;
  Polynomial Y = (Polynomial::variable(n.var) * n.alpha + Polynomial::constant(n.beta)) * s;
  ProductForm pf;
  pf.forms = {X - Y, X + Y};
  pf.N = cf->N * p.c;
  pf.scale = cf->scale * p.c;
  if (pf.scale < 0 || !pf.matches(eq.lhs)) return std::nullopt;
  return pf;
}

// ------------------------------------------------------------------ discriminant

namespace {

Integer as_integer(const Rational& r) {
  if (r.get_den() != 1) throw NotApplicable("non-integral coefficient");
  return r.get_num();
}

Integer coeff(const UniPoly& p, int i) { return i <= p.degree() ? as_integer(p.c[static_cast<std::size_t>(i)]) : Integer(0); }

Integer eval_int(const UniPoly& p, const Integer& y) { return as_integer(p.evaluate(Rational(y))); }

}  // namespace

Verdict discriminant_solve(const NormalizedEquation& eq, const std::string& pivot, const Problem& problem) {
  if (!eq.lhs.is_polynomial_only()) throw NotApplicable("not polynomial");
  auto vs = eq.variables();
  if (vs.size() != 2 || !vs.count(pivot)) throw NotApplicable("needs exactly two variables");
  if (eq.lhs.degree_in(pivot) != 2) throw NotApplicable("not quadratic in " + pivot);
  std::string y = *vs.begin() == pivot ? *std::next(vs.begin()) : *vs.begin();
  auto co = eq.lhs.coefficients_in(pivot);
  auto C = UniPoly::from_polynomial(co[0], y), B = UniPoly::from_polynomial(co[1], y),
       A = UniPoly::from_polynomial(co[2], y);
  if (!A || !B || !C) throw NotApplicable("coefficients not univariate");
  UniPoly D = (*B) * (*B) - (*A) * (*C).scaled(4);
  if (D.degree() > 2) throw NotApplicable("discriminant of degree " + std::to_string(D.degree()));
  const Integer p = coeff(D, 2), q = coeff(D, 1), r = coeff(D, 0);
  Certificate empty = exhaustion("discriminant", {{"pivot", pivot}});

  auto x_values = [&](const Integer& yv, const Integer& k, std::vector<Assignment>& out) {
    Integer a = eval_int(*A, yv), b = eval_int(*B, yv), c = eval_int(*C, yv);
    std::vector<Integer> xs;
    if (a == 0) {
      if (b == 0) {
        if (c == 0) throw NotApplicable("equation vanishes identically at " + y + " = " + yv.get_str());
        return;
      }
      if (c % b == 0) xs.push_back(-c / b);
    } else {
      for (int s : {1, -1}) {
        Integer num = -b + s * k;
        if (num % (2 * a) == 0) xs.push_back(num / (2 * a));
      }
    }
    for (const auto& x : xs) {
      Assignment asg{{pivot, x}, {y, yv}};
      if (problem.admits(asg) && eq.lhs.evaluate(asg) == 0) out.push_back(asg);
    }
  };

  // x = (-B(y) + sigma*(alpha*y + beta)/gamma) / (2a): one lattice family per admissible residue of y
  auto linear_families = [&](const Integer& alpha, const Integer& beta, const Integer& gamma) {
    if (A->degree() != 0 || B->degree() > 1) throw NotApplicable("discriminant square but coefficients not affine");
    if (!all_integers(problem, {pivot, y})) throw NotApplicable("restricted domains on a parametric route");
    Integer a = coeff(*A, 0), b0 = coeff(*B, 0), b1 = coeff(*B, 1);
    std::vector<Family> fams;
    for (int s : {1, -1}) {
      Integer P = -gamma * b1 + s * alpha, Q = -gamma * b0 + s * beta, R = 2 * a * gamma;
      if (R < 0) {
        P = -P;
        Q = -Q;
        R = -R;
      }
      Integer M = lcm(R, abs(gamma));
      if (M > 1000000) throw NotApplicable("residue modulus too large");
      for (Integer res = 0; res < M; ++res) {
        if ((alpha * res + beta) % gamma != 0 || (P * res + Q) % R != 0) continue;
        Family f;
        f.kind = "affine_lattice";
        f.parameters.push_back({"t", Domain::integers()});
        f.expressions[y] = {Polynomial::constant(res) + Polynomial::variable("t") * M, 1};
        f.expressions[pivot] = {Polynomial::constant((P * res + Q) / R) + Polynomial::variable("t") * (P * M / R), 1};
        push_unique(fams, f);
      }
    }
    if (fams.empty()) return Verdict::no_solution(empty);
    return Verdict::family(fams);
  };

  if (D.degree() <= 0) {
    if (r < 0 || !is_square(r)) return Verdict::no_solution(empty);
    return linear_families(0, isqrt(r), 1);
  }
  if (D.degree() == 1) throw NotApplicable("linear discriminant");

  if (p < 0) {
    // route (a): P y^2 - q y - r <= 0 for P = -p
    const Integer P = -p, disc = q * q + 4 * P * r;
    std::vector<Assignment> sols;
    if (disc >= 0) {
      Integer s = isqrt(disc) + 1;
      Integer lo = floor_div(q - s, 2 * P), hi = ceil_div(q + s, 2 * P);
      if (hi - lo > 10000000) {
        Verdict v = Verdict::inconclusive();
        v.trace.push_back({"discriminant", "range too wide", 0, {}});
        return v;
      }
      for (Integer yv = lo; yv <= hi; ++yv) {
        Integer dv = eval_int(D, yv), k;
        if (dv < 0 || !is_square(dv, &k)) continue;
        x_values(yv, k, sols);
      }
    }
    if (sols.empty()) return Verdict::no_solution(empty);
    return Verdict::finite(sols, "discriminant-range");
  }

  Integer s;
  std::set<std::string> taken(vs.begin(), vs.end());
  if (is_square(p, &s)) {
    const Integer E = q * q - 4 * p * r;
    if (E == 0) return linear_families(2 * p, q, 2 * s);
    // route (b): (2py + q - 2sk)(2py + q + 2sk) = E
    std::string k = fresh_name(taken, "k");
    Polynomial W = Polynomial::variable(y) * (2 * p) + Polynomial::constant(q);
    Polynomial K = Polynomial::variable(k) * (2 * s);
    ProductForm pf{{W - K, W + K}, E, 1};
    Problem aux;
    aux.equations.push_back({pf.expand(), {}, std::nullopt});
    Verdict fv = factor_pair_solve(pf, aux);
    if (fv.status == Status::Inconclusive) return fv;
    std::vector<Assignment> sols;
    for (const auto& a : fv.solutions) x_values(a.at(y), abs(a.at(k)), sols);
    if (sols.empty()) return Verdict::no_solution(empty);
    return Verdict::finite(sols, "factor-enumeration");
  }

  // route (c): Pell form
  if (A->degree() != 0 || B->degree() > 0) throw NotApplicable("Pell route needs constant pivot coefficients");
  if (!all_integers(problem, {pivot, y})) throw NotApplicable("restricted domains on the Pell route");
  const Integer a = coeff(*A, 0), b = coeff(*B, 0);
  PellReduction red;
  if (q == 0) {
    // (2a x + b)^2 - p y^2 = r
    red.form = {p, r};
    red.xvar = pivot;
    red.ax = 2 * a;
    red.bx = b;
    red.yvar = y;
    red.ay = 1;
    red.by = 0;
  } else {
    // (2p y + q)^2 - 4p (2a x + b)^2 = q^2 - 4pr
    red.form = {4 * p, q * q - 4 * p * r};
    red.xvar = y;
    red.ax = 2 * p;
    red.bx = q;
    red.yvar = pivot;
    red.ay = 2 * a;
    red.by = b;
  }
  red.scale = 1;
  if (red.form.c == 0) {
    // only X = Y = 0
    std::vector<Assignment> sols;
    if (red.bx % red.ax == 0 && red.by % red.ay == 0) {
      Assignment asg{{red.xvar, -red.bx / red.ax}, {red.yvar, -red.by / red.ay}};
      if (eq.lhs.evaluate(asg) == 0) sols.push_back(asg);
    }
    if (sols.empty()) return Verdict::no_solution(empty);
    return Verdict::finite(sols, "discriminant-range");
  }
  PellClasses cl = pell_classes(red.form);
  if (!cl.searched) {
    Verdict v = Verdict::inconclusive();
    v.trace.push_back({"discriminant", "Pell class search exceeds budget", 0, {}});
    return v;
  }
  if (cl.bases.empty()) {
    Certificate c;
    c.kind = "pell_empty_class";
    c.data = {{"d", integer_json(red.form.d)},
              {"c", integer_json(red.form.c)},
              {"bound", integer_json(cl.bound)},
              {"map", {{red.xvar, {integer_json(red.ax), integer_json(red.bx)}}, {red.yvar, {integer_json(red.ay), integer_json(red.by)}}}}};
    return Verdict::no_solution(c);
  }
  return back_transform(cl, red).verdict;
}

// ------------------------------------------------------------------ separation

Verdict separation_solve(const NormalizedEquation& eq, const Problem& problem) {
  if (!eq.lhs.is_polynomial_only()) throw NotApplicable("not polynomial");
  auto vs = eq.variables();
  if (vs.size() != 2) throw NotApplicable("needs exactly two variables");
  for (const auto& y : vs) {
    if (eq.lhs.degree_in(y) != 1) continue;
    std::string x = *vs.begin() == y ? *std::next(vs.begin()) : *vs.begin();
    auto co = eq.lhs.coefficients_in(y);
    auto r = UniPoly::from_polynomial(co[0], x), q = UniPoly::from_polynomial(co[1], x);
    if (!r || !q || q->degree() < 1) continue;
    Bezout bz = extended_euclid(*q, *r);
    if (bz.g.degree() != 0) continue;
    // s*q + t*r = 1, so q(x) | r(x) forces q(x) | den
    Integer den = 1;
    for (const auto& c : bz.s.c) den = lcm(den, c.get_den());
    for (const auto& c : bz.t.c) den = lcm(den, c.get_den());
    std::vector<Integer> qc;
    for (const auto& c : q->c) qc.push_back(as_integer(c));
    std::set<Integer> cands;
    for (const auto& d : signed_divisors(den)) {
      std::vector<Integer> shifted = qc;
      shifted[0] -= d;
      for (const auto& root : integer_roots(shifted)) cands.insert(root);
    }
    std::vector<Assignment> sols;
    for (const auto& xv : cands) {
      Integer qv = as_integer(q->evaluate(Rational(xv))), rv = as_integer(r->evaluate(Rational(xv)));
      if (qv == 0 || rv % qv != 0) continue;
      Assignment a{{x, xv}, {y, -rv / qv}};
      if (problem.admits(a)) sols.push_back(a);
    }
    if (sols.empty()) return Verdict::no_solution(exhaustion("separation", {{"variable", y}, {"divisor_of", integer_json(den)}}));
    return Verdict::finite(sols, "divisor-candidates");
  }
  throw NotApplicable("no variable separates with a constant remainder");
}

// ------------------------------------------------------------------ FLT

namespace {

struct PowerTerm {
  Integer coef;
  std::string var;  // empty for the constant
  unsigned long k = 0;
};

std::string power_base(const Integer& root, const std::string& var, unsigned long e) {
  std::string v = var.empty() ? "" : (e == 1 ? var : var + "^" + std::to_string(e));
  if (var.empty()) return root.get_str();
  if (root == 1) return v;
  return root.get_str() + "*" + v;
}

/// Nonzero integer solutions of alpha*u^a = c.
std::vector<Integer> monomial_roots(const Integer& alpha, unsigned long a, const Integer& c) {
  std::vector<Integer> out;
  if (c % alpha != 0) return out;
  Integer t = c / alpha;
  if (t == 0) return {0};
  if (a % 2 == 0) {
    if (t < 0) return out;
    if (auto r = exact_root(t, a)) {
      out.push_back(*r);
      out.push_back(-*r);
    }
  } else if (auto r = exact_root(t, a)) {
    out.push_back(*r);
  }
  return out;
}

}  // namespace

std::vector<Family> solve_binomial(const Integer& alpha, const std::string& u, unsigned long a, const Integer& beta,
                                   const std::string& w, unsigned long b, const Problem& problem) {
  std::vector<Family> out;
  const unsigned long g = std::gcd(a, b), a1 = a / g, b1 = b / g;
  Integer lam = 1, mu = 1;
  std::set<Integer> primes;
  for (const auto& [pr, e] : factorize(alpha)) primes.insert(pr);
  for (const auto& [pr, e] : factorize(beta)) primes.insert(pr);
  bool nonzero = true;
  for (const auto& pr : primes) {
    unsigned long va = 0, vb = 0;
    for (Integer t = abs(alpha); t % pr == 0; t /= pr) ++va;
    for (Integer t = abs(beta); t % pr == 0; t /= pr) ++vb;
    bool found = false;
    for (unsigned long e = 0; e <= vb + b; ++e) {
      long diff = static_cast<long>(va + a * e) - static_cast<long>(vb);
      if (diff < 0 || diff % static_cast<long>(b) != 0) continue;
      lam *= ipow(pr, e);
      mu *= ipow(pr, static_cast<unsigned long>(diff) / b);
      found = true;
      break;
    }
    if (!found) {
      nonzero = false;
      break;
    }
  }
  Domain du = problem.domain_of(u), dw = problem.domain_of(w);
  auto nv = problem.nonvanishing();
  bool zero_ok = du.contains(0) && dw.contains(0) && !nv.count(u) && !nv.count(w);
  if (!nonzero) {
    if (zero_ok) out.push_back(point_family({{u, 0}, {w, 0}}));
    return out;
  }
  bool interval = du.kind == Domain::Kind::Interval || dw.kind == Domain::Kind::Interval;
  for (int su : {1, -1})
    for (int sw : {1, -1}) {
      // sign(alpha) su^a = -sign(beta) sw^b
      int lhs = sgn(alpha) * ((a % 2 == 1) ? su : 1);
      int rhs = -sgn(beta) * ((b % 2 == 1) ? sw : 1);
      if (lhs != rhs) continue;
      if (su < 0 && du.nonnegative()) continue;
      if (sw < 0 && dw.nonnegative()) continue;
      Family f;
      f.kind = "indexed";
      f.parameters.push_back({"t", zero_ok ? Domain::naturals0() : Domain::naturals()});
      f.expressions[u] = {Polynomial::variable("t", b1) * (lam * su), 1};
      f.expressions[w] = {Polynomial::variable("t", a1) * (mu * sw), 1};
      if (interval) f.constraints = domain_notes(problem, {u, w});
      push_unique(out, f);
    }
  if (out.empty() && zero_ok) out.push_back(point_family({{u, 0}, {w, 0}}));
  return out;
}

std::optional<FltMatch> flt_check(const NormalizedEquation& eq, const Problem& problem) {
  if (!eq.lhs.is_polynomial_only()) return std::nullopt;
  std::vector<PowerTerm> terms;
  for (const auto& [sig, c] : eq.lhs.terms()) {
    if (sig.is_constant()) {
      terms.push_back({c, "", 0});
      continue;
    }
    if (sig.powers.size() != 1) return std::nullopt;
    terms.push_back({c, sig.powers.begin()->first, sig.powers.begin()->second});
  }
  if (terms.size() != 3) return std::nullopt;
  std::set<std::string> seen;
  unsigned long G = 0;
  for (const auto& t : terms) {
    if (t.var.empty()) continue;
    if (!seen.insert(t.var).second) return std::nullopt;
    G = std::gcd(G, t.k);
  }
  std::optional<unsigned long> chosen;
  for (unsigned long n = 3; n <= G && !chosen; ++n) {
    if (G % n != 0) continue;
    bool ok = true;
    for (const auto& t : terms)
      if (!exact_root(abs(t.coef), n)) ok = false;
    if (ok) chosen = n;
  }
  if (!chosen) return std::nullopt;
  const unsigned long n = *chosen;
  FltMatch m;
  m.n = n;
  std::vector<std::string> pos, neg;
  for (const auto& t : terms) {
    std::string base = "(" + power_base(*exact_root(abs(t.coef), n), t.var, t.k / n) + ")^" + std::to_string(n);
    (t.coef > 0 ? pos : neg).push_back(base);
  }
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " + " : "") + v[i];
    return v.empty() ? std::string("0") : s;
  };
  m.rewrite = join(pos) + " = " + join(neg);
  m.certificate.kind = "flt";
  Json vars = Json::array();
  for (const auto& t : terms)
    if (!t.var.empty()) vars.push_back(t.var);
  m.certificate.data = {{"n", n}, {"rewrite", m.rewrite}, {"zero_product", vars}};

  // zero cases: some variable term vanishes
  auto nv = problem.nonvanishing();
  std::vector<Assignment> points;
  std::vector<Family> fams;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& z = terms[i];
    if (z.var.empty() || !problem.domain_of(z.var).contains(0) || nv.count(z.var)) continue;
    std::vector<PowerTerm> rest;
    for (std::size_t j = 0; j < terms.size(); ++j)
      if (j != i) rest.push_back(terms[j]);
    if (rest[0].var.empty()) std::swap(rest[0], rest[1]);
    if (rest[1].var.empty()) {
      for (const auto& v : monomial_roots(rest[0].coef, rest[0].k, -rest[1].coef)) {
        Assignment a{{z.var, 0}, {rest[0].var, v}};
        if (problem.admits(a)) points.push_back(a);
      }
      continue;
    }
    for (auto f : solve_binomial(rest[0].coef, rest[0].var, rest[0].k, rest[1].coef, rest[1].var, rest[1].k, problem)) {
      f.expressions[z.var] = ParamExpr::constant(0);
      if (f.parameters.empty()) {
        Assignment a;
        for (const auto& [v, e] : f.expressions) a[v] = *e.evaluate({});
        if (problem.admits(a)) points.push_back(a);
      } else {
        push_unique(fams, f);
      }
    }
  }
  m.zero_cases = collect(points, fams, "factor-enumeration", m.certificate);
  return m;
}

// ------------------------------------------------------------------ isolated linear

namespace {

/// p with var replaced by rep + step*param; exponentials b^var become b^rep * (b^step)^param.
Polynomial substitute_affine(const Polynomial& p, const std::string& var, const Integer& rep, const Integer& step,
                             const std::string& param) {
  if (step == 0) return p.substitute_value(var, rep);
  Polynomial out;
  Polynomial lin = Polynomial::constant(rep) + Polynomial::variable(param) * step;
  for (const auto& [sig, c] : p.terms()) {
    if (sig.factorials.count(var)) throw NotApplicable("factorial of a parametrized variable");
    Signature s = sig;
    Polynomial factor = Polynomial::constant(1);
    if (auto it = s.powers.find(var); it != s.powers.end()) {
      factor = lin.pow(it->second);
      s.powers.erase(it);
    }
    if (auto it = s.exponentials.find(var); it != s.exponentials.end()) {
      Integer b = it->second;
      s.exponentials.erase(it);
      factor = factor * Polynomial::constant(ipow(b, rep.get_ui())) * Polynomial::exponential(ipow(b, step.get_ui()), param);
    }
    Polynomial t;
    t.add_term(s, c);
    out = out + t * factor;
  }
  return out;
}

const std::vector<std::string> kParamNames = {"k", "s", "t", "u", "v", "w"};

std::string param_name(std::size_t i) {
  return i < kParamNames.size() ? kParamNames[i] : "k" + std::to_string(i - kParamNames.size() + 1);
}

}  // namespace

Verdict isolated_linear_solve(const NormalizedEquation& eq, const Problem& problem) {
  std::optional<std::string> best;
  Integer bestA;
  for (const auto& v : eq.variables()) {
    if (eq.lhs.occurs_exponentially(v) || eq.lhs.occurs_factorially(v)) continue;
    int count = 0;
    Integer A;
    bool plain = false;
    for (const auto& [sig, c] : eq.lhs.terms()) {
      if (!sig.mentions(v)) continue;
      ++count;
      A = c;
      plain = sig == power_sig(v);
    }
    if (count != 1 || !plain) continue;
    if (!best || abs(A) < abs(bestA)) {
      best = v;
      bestA = A;
    }
  }
  if (!best) throw NotApplicable("no isolated linear variable");
  const std::string z = *best;
  const Integer A = bestA, m = abs(A);
  if (problem.domain_of(z).kind != Domain::Kind::Z || problem.nonvanishing().count(z))
    throw NotApplicable("isolated variable has a restricted domain");
  Polynomial g = eq.lhs - Polynomial::variable(z) * A;
  std::vector<std::string> others;
  for (const auto& v : g.variables()) others.push_back(v);
  for (const auto& v : others)
    if (problem.domain_of(v).kind == Domain::Kind::Interval || problem.nonvanishing().count(v))
      throw NotApplicable("interval or nonvanishing domain on " + v);
  DomainMap domains;
  for (const auto& v : others) domains[v] = problem.domain_of(v);
  NormalizedEquation geq{g, {}, std::nullopt};
  DomainMap eff = effective_domains(geq, domains);

  auto finish = [&](Polynomial num) {
    ParamExpr e{-num, A};
    if (A < 0) e = {num, -A};
    Integer c = e.numerator.content();
    Integer d = gcd(c, e.denominator);
    if (d > 1) e = {e.numerator.divided_by(d), e.denominator / d};
    return e;
  };

  std::vector<Family> fams;
  if (m == 1) {
    Family f;
    f.kind = "indexed";
    std::map<std::string, std::string> names;
    for (std::size_t i = 0; i < others.size(); ++i) {
      std::string pn = param_name(i);
      Domain d = eff.count(others[i]) ? eff[others[i]] : Domain::integers();
      f.parameters.push_back({pn, d});
      f.expressions[others[i]] = ParamExpr::param(pn);
      names[others[i]] = pn;
    }
    f.expressions[z] = finish(g.rename(names));
    return Verdict::family({f});
  }
  StateSpace sp = satisfying_states(geq, m.get_ui(), eff, 1000000);
  if (sp.states.empty()) {
    Certificate c;
    c.kind = "modular";
    c.modulus = m;
    c.data = {{"states_checked", sp.checked}};
    return Verdict::no_solution(c);
  }
  if (sp.states.size() > 256) throw NotApplicable("too many residue classes");
  std::vector<Assignment> points;
  for (const auto& st : sp.states) {
    Family f;
    f.kind = "indexed";
    Polynomial num = g;
    std::map<std::string, std::string> names;
    for (std::size_t i = 0; i < sp.variables.size(); ++i) {
      const auto& pr = sp.profiles[i];
      const std::string& v = sp.variables[i];
      std::string pn = param_name(i), tmp = "#" + std::to_string(i);
      names[tmp] = pn;
      Domain d = eff.count(v) ? eff[v] : Domain::integers();
      Integer rep = st[i], step;
      Domain pd = Domain::integers();
      if (pr.preperiod == 0 && !eq.lhs.occurs_exponentially(v) && !eq.lhs.occurs_factorially(v)) {
        // polynomial variable: its class mod m, starting at the domain's lower bound
        step = pr.period;
        if (d.lower()) pd = Domain::naturals0();
      } else {
        Integer threshold = std::max(d.lower().value_or(0), Integer(pr.preperiod));
        if (!pr.periodic_tail || rep < threshold) {
          step = 0;
        } else {
          step = pr.period;
          pd = Domain::naturals0();
        }
      }
      num = substitute_affine(num, v, rep, step, tmp);
      if (step == 0) {
        f.expressions[v] = ParamExpr::constant(rep);
      } else {
        f.parameters.push_back({pn, pd});
        f.expressions[v] = {Polynomial::constant(rep) + Polynomial::variable(pn) * step, 1};
      }
    }
    f.expressions[z] = finish(num.rename(names));
    f.constraints.push_back(render_polynomial(g) + " = 0 mod " + m.get_str());
    if (f.parameters.empty()) {
      Assignment a;
      for (const auto& [v, e] : f.expressions) a[v] = *e.evaluate({});
      points.push_back(a);
      continue;
    }
    push_unique(fams, std::move(f));
  }
  return collect(points, fams, "modular-plus-inspection", exhaustion("isolated_linear"));
}

}  // namespace dioph
