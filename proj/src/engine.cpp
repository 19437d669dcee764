#include "dioph/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <set>

#include "dioph/algebraic.hpp"
#include "dioph/linear.hpp"
#include "dioph/modular.hpp"
#include "dioph/parse.hpp"
#include "dioph/pell.hpp"
#include "dioph/poly.hpp"
#include "dioph/search.hpp"

namespace dioph {

Config Config::scaled(double factor) const {
  Config c = *this;
  auto sc = [&](std::uint64_t v) { return static_cast<std::uint64_t>(std::max(1.0, static_cast<double>(v) * factor)); };
  c.state_budget = sc(state_budget);
  c.probe_budget = sc(probe_budget);
  c.enum_budget = sc(enum_budget);
  c.timeout_ms = static_cast<long>(std::max(1.0, static_cast<double>(timeout_ms) * factor));
  return c;
}

Config Config::from_environment() {
  Config c;
  if (const char* s = std::getenv("DIOPH_BUDGET_SCALE")) {
    try {
      double f = std::stod(s);
      if (f > 0) return c.scaled(f);
    } catch (const std::exception&) {
    }
  }
  return c;
}

// ------------------------------------------------------------------ problem surgery

Problem equation_problem(const Problem& problem, std::size_t index) {
  Problem q;
  NormalizedEquation eq = problem.equations.at(index);
  auto vs = eq.variables();
  std::set<std::string> nv;
  for (const auto& v : problem.nonvanishing())
    if (vs.count(v)) nv.insert(v);
  eq.nonvanishing = nv;
  q.equations.push_back(eq);
  for (const auto& [v, d] : problem.domains)
    if (vs.count(v)) q.domains[v] = d;
  return q;
}

std::optional<Problem> substitute(const Problem& problem, const std::string& var, const Integer& value) {
  if (!problem.domain_of(var).contains(value)) return std::nullopt;
  if (value == 0 && problem.nonvanishing().count(var)) return std::nullopt;
  Problem q;
  try {
    for (const auto& e : problem.equations) {
      NormalizedEquation n;
      n.lhs = e.lhs.substitute_value(var, value);
      n.nonvanishing = e.nonvanishing;
      n.nonvanishing.erase(var);
      q.equations.push_back(n);
    }
  } catch (const DomainViolation&) {
    return std::nullopt;
  }
  for (const auto& v : problem.variables())
    if (v != var) q.domains[v] = problem.domain_of(v);
  for (auto c : problem.constraints) {
    c.erase(var);
    if (!c.empty()) q.constraints.push_back(c);
  }
  return q;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Timeout : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr int kMaxDepth = 6;
constexpr long kSplitWidth = 64;

Certificate make_cert(const std::string& kind, Json data, std::optional<Integer> modulus = std::nullopt) {
  Certificate c;
  c.kind = kind;
  c.modulus = std::move(modulus);
  c.data = std::move(data);
  return c;
}

Certificate exhaustion(const std::string& method, Json extra = Json::object()) {
  Json d = Json::object();
  d["method"] = method;
  for (auto& [k, v] : extra.items()) d[k] = v;
  return make_cert("exhaustion", d);
}

std::string fresh(const std::set<std::string>& taken, const std::string& base) {
  std::string n = base;
  for (int i = 1; taken.count(n); ++i) n = base + std::to_string(i);
  return n;
}

// ---- lifting verdicts back to larger variable sets

Verdict add_fixed(Verdict v, const std::string& var, const Integer& value) {
  for (auto& s : v.solutions) s[var] = value;
  canonicalize(v.solutions);
  for (auto& f : v.families) f.expressions[var] = ParamExpr::constant(value);
  for (auto& t : v.trace)
    for (auto& s : t.solutions) s[var] = value;
  return v;
}

/// Ways to let `var` range over its admissible values with one parameter.
std::vector<std::pair<Parameter, ParamExpr>> free_options(const Problem& p, const std::string& var, const std::string& name) {
  Domain d = p.domain_of(var);
  bool nv = p.nonvanishing().count(var) > 0;
  ParamExpr pos = ParamExpr::param(name);
  ParamExpr neg{-Polynomial::variable(name), 1};
  switch (d.kind) {
    case Domain::Kind::Z:
      if (!nv) return {{{name, Domain::integers()}, pos}};
      return {{{name, Domain::naturals()}, pos}, {{name, Domain::naturals()}, neg}};
    case Domain::Kind::N: return {{{name, Domain::naturals()}, pos}};
    case Domain::Kind::N0: return {{{name, nv ? Domain::naturals() : Domain::naturals0()}, pos}};
    case Domain::Kind::Interval: {
      if (!nv || d.lo > 0 || d.hi < 0) return {{{name, d}, pos}};
      std::vector<std::pair<Parameter, ParamExpr>> out;
      if (d.lo <= -1) out.push_back({{name, Domain::interval(d.lo, -1)}, pos});
      if (d.hi >= 1) out.push_back({{name, Domain::interval(1, d.hi)}, pos});
      return out;
    }
  }
  return {};
}

/// Families over `free` added to every solution and family of v.
Verdict add_free(const Verdict& v, const std::vector<std::string>& free, const Problem& p) {
  if (free.empty() || v.status == Status::NoSolution) return v;
  if (v.status == Status::Inconclusive) {
    Verdict out = v;
    for (auto& t : out.trace) t.solutions.clear();
    return out;
  }
  std::vector<Family> base = v.families;
  for (const auto& s : v.solutions) base.push_back(point_family(s));
  std::vector<Family> out;
  for (const auto& f : base) {
    std::vector<Family> cur{f};
    for (const auto& var : free) {
      std::set<std::string> taken;
      for (const auto& prm : f.parameters) taken.insert(prm.name);
      for (const auto& [k, e] : f.expressions) taken.insert(k);
      std::string name = fresh(taken, var == "x" || var == "y" || var == "z" ? std::string("s") + var : var + "_");
      std::vector<Family> next;
      for (const auto& g : cur)
        for (const auto& [prm, ex] : free_options(p, var, name)) {
          Family h = g;
          if (h.kind == "indexed" && h.parameters.empty()) h.kind = "indexed";
          h.parameters.push_back(prm);
          h.expressions[var] = ex;
          next.push_back(h);
        }
      cur = std::move(next);
    }
    out.insert(out.end(), cur.begin(), cur.end());
  }
  Verdict r = Verdict::family(out);
  r.trace = v.trace;
  r.stats = v.stats;
  return r;
}

/// Union of definitive parts; `empty` is used when every part is NoSolution.
Verdict merge(const std::vector<Verdict>& parts, const std::string& tag, const Certificate& empty) {
  std::vector<Assignment> points;
  std::vector<Family> fams;
  for (const auto& v : parts) {
    points.insert(points.end(), v.solutions.begin(), v.solutions.end());
    for (const auto& f : v.families) {
      auto a = f.parameters.empty() ? f.materialize({}) : std::nullopt;
      if (a)
        points.push_back(*a);
      else
        fams.push_back(f);
    }
  }
  canonicalize(points);
  if (!fams.empty()) {
    for (const auto& a : points) fams.push_back(point_family(a));
    return Verdict::family(fams);
  }
  if (!points.empty()) return Verdict::finite(points, tag);
  return Verdict::no_solution(empty);
}

bool all_z(const Problem& p, const std::set<std::string>& vars) {
  auto nv = p.nonvanishing();
  for (const auto& v : vars)
    if (p.domain_of(v).kind != Domain::Kind::Z || nv.count(v)) return false;
  return true;
}

// ---- stand-alone strategies (also re-run by the checker)

Verdict univariate_solve(const Problem& p) {
  const auto& eq = p.equations[0];
  auto vs = eq.variables();
  if (vs.size() != 1 || !eq.lhs.is_polynomial_only()) throw NotApplicable("not a univariate polynomial");
  const std::string v = *vs.begin();
  auto u = UniPoly::from_polynomial(eq.lhs, v);
  std::vector<Assignment> sols;
  for (const auto& r : integer_roots(u->primitive_integer()))
    if (p.satisfied_by({{v, r}})) sols.push_back({{v, r}});
  if (sols.empty()) return Verdict::no_solution(exhaustion("univariate_roots"));
  return Verdict::finite(sols, "divisor-candidates");
}

/// Linear equation whose domains restrict a one-parameter lattice to a ray or a segment.
Verdict linear_solve(const Problem& p) {
  auto ls = as_linear_system({p.equations[0]});
  if (!ls) throw NotApplicable("not linear");
  std::set<std::string> vs(ls->variables.begin(), ls->variables.end());
  if (all_z(p, vs)) return solve_linear_system(ls->A, ls->b, ls->variables);
  LinearSolution s = solve_linear_lattice(ls->A, ls->b);
  if (!s.lattice) {
    Json lam = Json::array();
    for (const auto& x : s.lambda) lam.push_back(integer_json(x));
    return Verdict::no_solution(make_cert("gcd_linear", {{"g", integer_json(s.g)}, {"lambda", lam}}, s.g));
  }
  const auto& lat = *s.lattice;
  const auto& names = ls->variables;
  if (lat.basis.size() > 1) throw NotApplicable("several parameters under restricted domains");
  auto nv = p.nonvanishing();
  if (lat.basis.empty()) {
    Assignment a;
    for (std::size_t i = 0; i < names.size(); ++i) a[names[i]] = lat.particular[i];
    if (p.satisfied_by(a)) return Verdict::finite({a}, "linear-algebra");
    return Verdict::no_solution(exhaustion("linear"));
  }
  const auto& b = lat.basis[0];
  std::optional<Integer> tlo, thi;
  for (std::size_t i = 0; i < names.size(); ++i) {
    Domain d = p.domain_of(names[i]);
    if (b[i] == 0) {
      if (!d.contains(lat.particular[i]) || (nv.count(names[i]) && lat.particular[i] == 0))
        return Verdict::no_solution(exhaustion("linear"));
      continue;
    }
    if (nv.count(names[i]) && d.kind == Domain::Kind::Z) throw NotApplicable("nonvanishing lattice coordinate");
    auto clip = [&](const std::optional<Integer>& bound, bool lower) {
      if (!bound) return;
      // particular + b*t >= bound (lower) or <= bound
      Integer diff = *bound - lat.particular[i];
      bool t_lower = lower == (b[i] > 0);
      if (t_lower) {
        Integer t = ceil_div(diff, b[i]);
        if (!tlo || t > *tlo) tlo = t;
      } else {
        Integer t = floor_div(diff, b[i]);
        if (!thi || t < *thi) thi = t;
      }
    };
    auto lo = d.lower();
    if (lo && nv.count(names[i]) && *lo == 0) lo = Integer(1);
    clip(lo, true);
    clip(d.upper(), false);
  }
  if (tlo && thi) {
    if (*thi - *tlo > 1'000'000) throw NotApplicable("segment too long");
    std::vector<Assignment> sols;
    for (Integer t = *tlo; t <= *thi; ++t) {
      Assignment a;
      for (std::size_t i = 0; i < names.size(); ++i) a[names[i]] = lat.particular[i] + b[i] * t;
      if (p.satisfied_by(a)) sols.push_back(a);
    }
    if (sols.empty()) return Verdict::no_solution(exhaustion("linear"));
    return Verdict::finite(sols, "linear-algebra");
  }
  if (!tlo && !thi) throw NotApplicable("unrestricted lattice");
  for (std::size_t i = 0; i < names.size(); ++i)
    if (nv.count(names[i]) && b[i] != 0) throw NotApplicable("nonvanishing lattice coordinate");
  // t = tlo + k or t = thi - k, k >= 0
  Family f;
  f.kind = "affine_lattice";
  f.parameters.push_back({"k", Domain::naturals0()});
  Integer t0 = tlo ? *tlo : *thi, dir = tlo ? 1 : -1;
  for (std::size_t i = 0; i < names.size(); ++i) {
    Polynomial e = Polynomial::constant(lat.particular[i] + b[i] * t0) + Polynomial::variable("k") * Integer(b[i] * dir);
    f.expressions[names[i]] = {e, 1};
  }
  return Verdict::family({f});
}

/// lhs = sum a_i v_i + K + c * prod(all v_i) with every v_i nonzero: all but the largest |v_i| are small.
Verdict product_dominant_solve(const Problem& p) {
  const auto& eq = p.equations[0];
  auto vs = eq.variables();
  std::vector<std::string> vars(vs.begin(), vs.end());
  const std::size_t n = vars.size();
  if (n < 2 || !eq.lhs.is_polynomial_only()) throw NotApplicable("shape");
  std::map<std::string, Integer> a;
  Integer K = 0, c = 0;
  for (const auto& [sig, coef] : eq.lhs.terms()) {
    if (sig.is_constant()) {
      K = coef;
    } else if (sig.powers.size() == 1 && sig.degree() == 1) {
      a[sig.powers.begin()->first] = coef;
    } else if (sig.powers.size() == n && sig.degree() == n) {
      c = coef;
    } else {
      throw NotApplicable("shape");
    }
  }
  if (c == 0) throw NotApplicable("no full product term");
  auto nv = p.nonvanishing();
  for (const auto& v : vars) {
    Domain d = p.domain_of(v);
    if (!nv.count(v) && d.contains(0)) throw NotApplicable(v + " may vanish");
  }
  Integer S = abs(K);
  for (auto& [v, x] : a) S += abs(x);
  Integer B = S / abs(c);
  if (B < 1) return Verdict::no_solution(exhaustion("product_dominant"));
  if (B > 10'000) throw NotApplicable("bound too large");
  std::vector<Assignment> sols;
  std::uint64_t work = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::string> others;
    for (std::size_t i = 0; i < n; ++i)
      if (i != j) others.push_back(vars[i]);
    Assignment cur;
    std::function<void(std::size_t, Integer)> rec = [&](std::size_t i, Integer prod) {
      if (++work > 20'000'000) throw NotApplicable("too many cases");
      if (i == others.size()) {
        Integer coef = a[vars[j]] + c * prod, rhs = -K;
        for (const auto& o : others) rhs -= a[o] * cur[o];
        if (coef == 0) {
          if (rhs == 0) throw NotApplicable("free variable " + vars[j]);
          return;
        }
        if (rhs % coef != 0) return;
        Assignment s = cur;
        s[vars[j]] = rhs / coef;
        if (p.satisfied_by(s)) sols.push_back(s);
        return;
      }
      Domain d = p.domain_of(others[i]);
      for (Integer m = 1; abs(prod) * m <= B; ++m)
        for (int sg : {1, -1}) {
          Integer x = m * sg;
          if (!d.contains(x)) continue;
          cur[others[i]] = x;
          rec(i + 1, prod * x);
        }
      cur.erase(others[i]);
    };
    rec(0, 1);
  }
  canonicalize(sols);
  if (sols.empty()) return Verdict::no_solution(exhaustion("product_dominant"));
  return Verdict::finite(sols, "bounded-exhaustive");
}

Verdict pell_solve(const Problem& p) {
  const auto& eq = p.equations[0];
  if (!all_z(p, eq.variables()) || eq.variables().size() != 2) throw NotApplicable("domains");
  auto red = reduce_to_pell(eq);
  if (!red || red->form.c == 0 || red->form.d < 2 || exact_root(red->form.d, 2)) throw NotApplicable("not a Pell shape");
  PellClasses cl = pell_classes(red->form);
  if (!cl.searched) throw NotApplicable("class search exceeds budget");
  if (cl.bases.empty())
    return Verdict::no_solution(make_cert(
        "pell_empty_class", {{"d", integer_json(red->form.d)}, {"c", integer_json(red->form.c)}, {"bound", integer_json(cl.bound)}}));
  return back_transform(cl, *red).verdict;
}

Verdict product_form_solve(const Problem& p) {
  const auto& eq = p.equations[0];
  auto pf = bilinear_product_form(eq.lhs);
  if (!pf) pf = difference_of_squares(eq);
  if (!pf) throw NotApplicable("no product form");
  if (pf->N == 0) return zero_form_solve(*pf, p);
  return factor_pair_solve(*pf, p);
}

Verdict discriminant_any(const Problem& p, std::string* used = nullptr) {
  for (const auto& v : p.equations[0].variables()) {
    try {
      Verdict r = discriminant_solve(p.equations[0], v, p);
      if (r.definitive()) {
        if (used) *used = v;
        return r;
      }
    } catch (const NotApplicable&) {
    }
  }
  throw NotApplicable("no pivot");
}

std::string describe(const Verdict& v) {
  switch (v.status) {
    case Status::NoSolution: return "no_solution (" + v.certificate->kind + ")";
    case Status::Finite: return "finite: " + std::to_string(v.solutions.size()) + " solutions";
    case Status::Family: return "family: " + std::to_string(v.families.size()) + " families";
    case Status::Inconclusive: return "inconclusive";
  }
  return "";
}

/// Variable present polynomially in every nonconstant term: it divides the constant.
std::optional<std::string> dividing_variable(const NormalizedEquation& eq) {
  if (!eq.lhs.is_polynomial_only() || eq.constant() == 0) return std::nullopt;
  for (const auto& v : eq.variables()) {
    bool all = true;
    for (const auto& [sig, c] : eq.lhs.terms())
      if (!sig.is_constant() && !sig.powers.count(v)) all = false;
    if (all) return v;
  }
  return std::nullopt;
}

constexpr std::size_t kMaxDivisors = 4096;

/// Members of a one-parameter affine family with the nonvanishing coordinates nonzero.
std::optional<std::pair<std::vector<Family>, std::vector<Assignment>>> exclude_zeros(const Family& f,
                                                                                  const std::set<std::string>& nv) {
  if (f.pell) return std::nullopt;
  if (f.parameters.empty()) {
    auto a = f.materialize({});
    if (!a) return std::nullopt;
    for (const auto& v : nv)
      if (a->count(v) && a->at(v) == 0) return std::make_pair(std::vector<Family>{}, std::vector<Assignment>{});
    return std::make_pair(std::vector<Family>{}, std::vector<Assignment>{*a});
  }
  if (f.parameters.size() != 1 || f.parameters[0].domain.kind != Domain::Kind::Z) return std::nullopt;
  const std::string t = f.parameters[0].name;
  std::set<Integer> bad;
  for (const auto& v : nv) {
    auto it = f.expressions.find(v);
    if (it == f.expressions.end()) continue;
    const ParamExpr& e = it->second;
    if (e.denominator != 1 || e.numerator.degree() > 1) return std::nullopt;
    Integer b = e.numerator.coefficient(Polynomial::variable(t).terms().begin()->first), a = e.numerator.constant_term();
    if (b == 0) {
      if (a == 0) return std::make_pair(std::vector<Family>{}, std::vector<Assignment>{});
      continue;
    }
    if (a % b == 0) bad.insert(-a / b);
  }
  if (bad.empty()) return std::make_pair(std::vector<Family>{f}, std::vector<Assignment>{});
  std::vector<Family> fams;
  std::vector<Assignment> pts;
  auto shifted = [&](const Integer& start, int dir) {
    Family g = f;
    g.parameters[0].domain = Domain::naturals0();
    Polynomial sub = Polynomial::constant(start) + Polynomial::variable(t) * Integer(dir);
    for (auto& [v, e] : g.expressions) e.numerator = e.numerator.substitute(t, sub);
    return g;
  };
  fams.push_back(shifted(*bad.begin() - 1, -1));
  fams.push_back(shifted(*bad.rbegin() + 1, 1));
  for (Integer x = *bad.begin() + 1; x < *bad.rbegin(); ++x) {
    if (bad.count(x)) continue;
    auto a = f.materialize({{t, x}});
    if (a) pts.push_back(*a);
  }
  return std::make_pair(fams, pts);
}

Problem without_nonvanishing(const Problem& p) {
  Problem q = p;
  q.constraints.clear();
  for (auto& e : q.equations) e.nonvanishing.clear();
  return q;
}

// ------------------------------------------------------------------ the pipeline

class Engine {
 public:
  explicit Engine(const Config& c) : cfg_(c), deadline_(Clock::now() + std::chrono::milliseconds(c.timeout_ms)) {}

  Stats stats;

  Verdict run(const Problem& p, std::vector<TraceEntry>* tr) {
    try {
      if (p.equations.size() > 1) return system(p, 0, tr);
      if (p.equations.empty()) {
        Problem q = p;
        q.equations.push_back({});
        return single(q, 0, tr);
      }
      return single(p, 0, tr);
    } catch (const Timeout&) {
      if (tr) tr->push_back({"timeout", "time budget of " + std::to_string(cfg_.timeout_ms) + " ms exhausted", 0, {}});
      return Verdict::inconclusive();
    }
  }

  Verdict single(const Problem& p, int depth, std::vector<TraceEntry>* tr);
  Verdict system(const Problem& p, int depth, std::vector<TraceEntry>* tr);

 private:
  Config cfg_;
  Clock::time_point deadline_;

  void tick() const {
    if (Clock::now() > deadline_) throw Timeout("timeout");
  }

  struct Stage {
    std::vector<TraceEntry>* tr;
    std::string name;
    Clock::time_point t0 = Clock::now();
    void done(const std::string& outcome, std::vector<Assignment> sols = {}) {
      if (!tr) return;
      double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
      tr->push_back({name, outcome, ms, std::move(sols)});
    }
  };

  /// Runs fn; definitive results are returned, anything else is traced and dropped.
  std::optional<Verdict> attempt(std::vector<TraceEntry>* tr, const std::string& name, const std::function<Verdict()>& fn) {
    tick();
    Stage st{tr, name};
    try {
      Verdict v = fn();
      if (v.definitive()) {
        st.done(describe(v));
        return v;
      }
      std::string why = v.trace.empty() ? "no result" : v.trace.back().outcome;
      st.done("inconclusive: " + why);
    } catch (const Timeout&) {
      throw;
    } catch (const NotApplicable& e) {
      st.done(std::string("not applicable: ") + e.what());
    } catch (const std::exception& e) {
      st.done(std::string("not applicable: ") + e.what());
    }
    return std::nullopt;
  }

  std::optional<Verdict> sensibility(const Problem& p, std::vector<TraceEntry>* tr);
  std::optional<Verdict> split_cases(const Problem& p, const BoundSet& bs, int depth, std::vector<TraceEntry>* tr);
  std::optional<Verdict> common_factor(const Problem& p, int depth, std::vector<TraceEntry>* tr);
  std::optional<Verdict> divisor_split(const Problem& p, int depth, std::vector<TraceEntry>* tr);
  std::optional<Verdict> relaxed(const Problem& p, int depth, std::vector<TraceEntry>* tr);
  Verdict cases_verdict(const Problem& p, const std::vector<std::pair<Assignment, Problem>>& cases, Json split,
                        const std::string& tag, int depth);
};

std::optional<Verdict> Engine::sensibility(const Problem& p, std::vector<TraceEntry>* tr) {
  const auto& eq = p.equations[0];
  {
    Stage st{tr, "content"};
    Integer g = 0;
    for (const auto& [sig, c] : eq.lhs.terms())
      if (!sig.is_constant()) g = gcd(g, c);
    Integer k = eq.constant();
    if (g > 1 && k % g != 0) {
      st.done("content " + g.get_str() + " does not divide " + to_string(k));
      return Verdict::no_solution(make_cert("content", {{"divisor", integer_json(g)}, {"constant", integer_json(k)}}, g));
    }
    st.done("no obstruction");
  }
  tick();
  BoundSet bs = infer_bounds(eq, p.domains);
  // plain sign and magnitude arguments come before residues, derived bounds after
  const std::string rule = bs.argument.value("rule", std::string());
  const bool direct = bs.infeasible && (rule == "reciprocal-magnitude" || rule == "negative-discriminant" ||
                                        bs.argument.value("round", 1) == 0);
  auto sign_verdict = [&](Stage& st) {
    st.done("infeasible: " + rule);
    return Verdict::no_solution(make_cert("sign_magnitude", bs.argument));
  };
  if (direct) {
    Stage st{tr, "sign_magnitude"};
    return sign_verdict(st);
  }
  tick();
  {
    Stage st{tr, "modular"};
    try {
      auto scan = find_obstruction(eq, default_moduli(cfg_.max_modulus), effective_domains(eq, p.domains), cfg_.state_budget);
      stats.moduli_scanned += scan.scanned;
      if (scan.certificate) {
        st.done("no solutions modulo " + std::to_string(scan.certificate->modulus));
        return Verdict::no_solution(make_cert("modular",
                                              {{"states_checked", scan.certificate->states_checked},
                                               {"domain_note", scan.certificate->domain_note}},
                                              Integer(scan.certificate->modulus)));
      }
      st.done("no obstruction up to " + std::to_string(cfg_.max_modulus));
    } catch (const DomainUnbounded& e) {
      st.done(std::string("not applicable: ") + e.what());
    }
  }
  Stage st{tr, "sign_magnitude"};
  if (bs.infeasible) return sign_verdict(st);
  st.done("no obstruction");
  return std::nullopt;
}

Verdict Engine::cases_verdict(const Problem& p, const std::vector<std::pair<Assignment, Problem>>& cases, Json split,
                              const std::string& tag, int depth) {
  std::vector<Verdict> parts;
  Json cj = Json::array();
  std::vector<Assignment> partial;
  bool inconclusive = false;
  for (const auto& [fixed, q] : cases) {
    tick();
    Verdict v = single(q, depth + 1, nullptr);
    for (const auto& [var, val] : fixed) v = add_fixed(v, var, val);
    if (!v.definitive()) {
      inconclusive = true;
      for (const auto& t : v.trace) partial.insert(partial.end(), t.solutions.begin(), t.solutions.end());
      continue;
    }
    if (v.status == Status::NoSolution) cj.push_back({{"assign", assignment_json(fixed)}, {"certificate", to_json(*v.certificate)}});
    parts.push_back(v);
  }
  (void)p;
  if (inconclusive) {
    Verdict r = Verdict::inconclusive();
    for (const auto& v : parts) partial.insert(partial.end(), v.solutions.begin(), v.solutions.end());
    canonicalize(partial);
    r.trace.push_back({"case_split", "some case inconclusive", 0, partial});
    return r;
  }
  return merge(parts, tag, make_cert("case_split", {{"split", split}, {"cases", cj}}));
}

std::optional<Verdict> Engine::split_cases(const Problem& p, const BoundSet& bs, int depth, std::vector<TraceEntry>* tr) {
  if (depth >= kMaxDepth) return std::nullopt;
  const auto& eq = p.equations[0];
  // a variable with a short proved range
  {
    std::string best;
    Integer width;
    for (const auto& [v, b] : bs.vars) {
      if (!b.bounded() || b.provenance == "user-box") continue;
      Integer w = *b.hi - *b.lo + 1;
      if (w <= kSplitWidth && (best.empty() || w < width)) {
        best = v;
        width = w;
      }
    }
    if (!best.empty() && eq.variables().size() > 1) {
      tick();
      Stage st{tr, "case_split"};
      std::vector<std::pair<Assignment, Problem>> cases;
      Json values = Json::array();
      for (Integer x = *bs.vars.at(best).lo; x <= *bs.vars.at(best).hi; ++x) {
        values.push_back(integer_json(x));
        if (auto q = substitute(p, best, x)) cases.push_back({{{best, x}}, *q});
      }
      Verdict v = cases_verdict(p, cases, {{"kind", "values"}, {"variable", best}, {"values", values}}, "bounded-exhaustive", depth);
      if (v.definitive()) {
        st.done("split on " + best + ": " + describe(v));
        return v;
      }
      st.done("split on " + best + " inconclusive", v.trace.empty() ? std::vector<Assignment>{} : v.trace.back().solutions);
    }
  }
  // modular bound on exponential or factorial variables
  bool transcendental = false;
  for (const auto& v : eq.variables()) transcendental |= eq.lhs.occurs_exponentially(v) || eq.lhs.occurs_factorially(v);
  if (!transcendental) return std::nullopt;
  tick();
  Stage st{tr, "modular_bound"};
  DomainMap eff = effective_domains(eq, p.domains);
  std::uint64_t scanned = 0;
  std::optional<ModularBound> mb;
  try {
    mb = find_modular_bound(eq, eff, cfg_.bounding_max_modulus, cfg_.state_budget, &scanned);
  } catch (const std::exception& e) {
    st.done(std::string("not applicable: ") + e.what());
    return std::nullopt;
  }
  stats.moduli_scanned += scanned;
  if (!mb) {
    st.done("no bounding modulus up to " + std::to_string(cfg_.bounding_max_modulus));
    return std::nullopt;
  }
  std::vector<std::pair<Assignment, Problem>> cases;
  Json forced = Json::object();
  for (const auto& [v, P] : mb->forced) {
    forced[v] = P;
    Integer lo = eff.count(v) && eff.at(v).lower() ? *eff.at(v).lower() : Integer(0);
    for (Integer x = lo; x < P; ++x)
      if (auto q = substitute(p, v, x)) cases.push_back({{{v, x}}, *q});
  }
  Verdict v = cases_verdict(p, cases, {{"kind", "modular_bound"}, {"modulus", mb->modulus}, {"forced", forced}},
                            "modular-plus-inspection", depth);
  if (v.definitive()) {
    st.done("modulus " + std::to_string(mb->modulus) + " bounds " + forced.dump() + ": " + describe(v));
    return v;
  }
  st.done("modulus " + std::to_string(mb->modulus) + " bounds " + forced.dump() + ", some case inconclusive",
          v.trace.empty() ? std::vector<Assignment>{} : v.trace.back().solutions);
  return std::nullopt;
}

std::optional<Verdict> Engine::common_factor(const Problem& p, int depth, std::vector<TraceEntry>* tr) {
  const auto& eq = p.equations[0];
  auto cf = common_variable_factor(eq.lhs);
  if (!cf || depth >= kMaxDepth) return std::nullopt;
  tick();
  Stage st{tr, "common_factor"};
  const auto& [v, quotient] = *cf;
  std::vector<Verdict> parts;
  if (auto z = substitute(p, v, 0)) {
    Verdict zv = single(*z, depth + 1, nullptr);
    if (!zv.definitive()) {
      st.done("inconclusive on " + v + " = 0");
      return std::nullopt;
    }
    parts.push_back(add_fixed(zv, v, 0));
  }
  Problem q = p;
  q.equations[0].lhs = quotient;
  q.equations[0].source.reset();
  for (const auto& w : p.variables()) q.domains[w] = p.domain_of(w);
  Verdict qv = single(q, depth + 1, nullptr);
  if (!qv.definitive()) {
    st.done("inconclusive on the cofactor");
    return std::nullopt;
  }
  parts.push_back(qv);
  Json cases = Json::array();
  if (qv.status == Status::NoSolution) cases.push_back({{"certificate", to_json(*qv.certificate)}});
  std::string tag = qv.status == Status::Finite ? qv.completeness : "factor-enumeration";
  Verdict r = merge(parts, tag, make_cert("case_split", {{"split", {{"kind", "common_factor"}, {"variable", v}}}, {"cases", cases}}));
  st.done("factor " + v + ": " + describe(r));
  return r;
}

std::optional<Verdict> Engine::divisor_split(const Problem& p, int depth, std::vector<TraceEntry>* tr) {
  const auto& eq = p.equations[0];
  auto v = dividing_variable(eq);
  if (!v || depth >= kMaxDepth || eq.variables().size() < 2) return std::nullopt;
  tick();
  Stage st{tr, "divisor_split"};
  std::vector<Integer> divs;
  try {
    divs = signed_divisors(abs(eq.constant()));
  } catch (const std::exception& e) {
    st.done(std::string("not applicable: ") + e.what());
    return std::nullopt;
  }
  if (divs.size() > kMaxDivisors) {
    st.done("not applicable: " + std::to_string(divs.size()) + " divisors");
    return std::nullopt;
  }
  std::vector<std::pair<Assignment, Problem>> cases;
  for (const auto& d : divs)
    if (auto q = substitute(p, *v, d)) cases.push_back({{{*v, d}}, *q});
  Verdict r = cases_verdict(p, cases, {{"kind", "divisors"}, {"variable", *v}}, "divisor-candidates", depth);
  if (r.definitive()) {
    st.done(*v + " divides " + to_string(eq.constant()) + ": " + describe(r));
    return r;
  }
  st.done(*v + " divides the constant, some case inconclusive");
  return std::nullopt;
}

std::optional<Verdict> Engine::relaxed(const Problem& p, int depth, std::vector<TraceEntry>* tr) {
  auto nv = p.nonvanishing();
  if (nv.empty() || depth >= kMaxDepth || !all_z(without_nonvanishing(p), p.equations[0].variables())) return std::nullopt;
  tick();
  Stage st{tr, "relaxed"};
  Verdict r = single(without_nonvanishing(p), depth + 1, nullptr);
  if (!r.definitive()) {
    st.done("relaxed problem inconclusive");
    return std::nullopt;
  }
  if (r.status == Status::NoSolution) {
    Verdict out = Verdict::no_solution(
        make_cert("case_split", {{"split", {{"kind", "relaxed"}}}, {"cases", Json::array({{{"certificate", to_json(*r.certificate)}}})}}));
    st.done("no solution even with zero allowed");
    return out;
  }
  std::vector<Assignment> pts;
  for (const auto& s : r.solutions)
    if (p.satisfied_by(s)) pts.push_back(s);
  std::vector<Family> fams;
  for (const auto& f : r.families) {
    auto parts = exclude_zeros(f, nv);
    if (!parts) {
      st.done("not applicable: cannot exclude zeros from a family");
      return std::nullopt;
    }
    fams.insert(fams.end(), parts->first.begin(), parts->first.end());
    for (const auto& a : parts->second)
      if (p.satisfied_by(a)) pts.push_back(a);
  }
  canonicalize(pts);
  Verdict out;
  if (!fams.empty()) {
    for (const auto& a : pts) fams.push_back(point_family(a));
    out = Verdict::family(fams);
  } else if (!pts.empty()) {
    out = Verdict::finite(pts, r.status == Status::Finite ? r.completeness : "bounded-exhaustive");
  } else {
    out = Verdict::no_solution(exhaustion("relaxed"));
  }
  st.done("zero-free part of the relaxed solution: " + describe(out));
  return out;
}

Verdict Engine::single(const Problem& p0, int depth, std::vector<TraceEntry>* tr) {
  tick();
  const auto& eq0 = p0.equations[0];
  auto eqvars = eq0.variables();
  std::vector<std::string> free;
  for (const auto& v : p0.variables())
    if (!eqvars.count(v)) free.push_back(v);
  if (!free.empty()) {
    Problem q = equation_problem(p0, 0);
    return add_free(single(q, depth, tr), free, p0);
  }
  const Problem& p = p0;
  const auto& eq = p.equations[0];
  if (eq.lhs.is_zero() && p.variables().empty() && depth > 0) return Verdict::finite({Assignment{}}, "bounded-exhaustive");
  if (eq.lhs.is_zero()) {
    Family all;
    all.kind = "indexed";
    if (tr) tr->push_back({"trivial", "identity", 0, {}});
    return Verdict::family({all});
  }
  if (auto v = sensibility(p, tr)) return *v;

  // classification
  if (auto v = attempt(tr, "univariate", [&] { return univariate_solve(p); })) return *v;
  if (auto v = attempt(tr, "linear", [&] { return linear_solve(p); })) return *v;
  if (auto v = attempt(tr, "flt", [&] {
        auto m = flt_check(eq, p);
        if (!m) throw NotApplicable("no shared exponent >= 3");
        if (m->zero_cases.status == Status::NoSolution) return Verdict::no_solution(m->certificate);
        return m->zero_cases;
      }))
    return *v;
  if (auto v = attempt(tr, "pell", [&] { return pell_solve(p); })) return *v;
  if (auto v = common_factor(p, depth, tr)) return *v;
  if (auto v = attempt(tr, "product_form", [&] { return product_form_solve(p); })) return *v;
  if (auto v = attempt(tr, "discriminant", [&] { return discriminant_any(p); })) return *v;
  if (auto v = divisor_split(p, depth, tr)) return *v;
  if (auto v = attempt(tr, "separation", [&] { return separation_solve(eq, p); })) return *v;
  if (auto v = attempt(tr, "product_dominant", [&] { return product_dominant_solve(p); })) return *v;
  if (auto v = attempt(tr, "isolated_linear", [&] { return isolated_linear_solve(eq, p); })) return *v;
  if (auto v = relaxed(p, depth, tr)) return *v;

  // bounds and enumeration
  tick();
  std::vector<std::string> vars(eqvars.begin(), eqvars.end());
  DomainMap eff = effective_domains(eq, p.domains);
  BoundSet bs = cfg_.box ? user_box(vars, cfg_.box->first, cfg_.box->second, eff) : infer_bounds(eq, p.domains);
  std::vector<Assignment> seen;
  {
    Stage st{tr, "bounds"};
    bool bounded = std::all_of(bs.vars.begin(), bs.vars.end(), [](const auto& kv) { return kv.second.bounded(); });
    Integer states = 1;
    if (bounded)
      for (const auto& [v, b] : bs.vars) states *= *b.hi - *b.lo + 1;
    if (bounded && states <= cfg_.enum_budget) {
      EnumOptions o;
      o.budget = cfg_.enum_budget;
      o.deadline = deadline_;
      EnumResult r = enumerate_box(p, bs, detect_symmetry(eq, p.domains), o);
      stats.evaluations += r.evaluations;
      if (r.budget_exceeded) tick();
      if (r.complete) {
        Verdict v = r.solutions.empty() ? Verdict::no_solution(exhaustion("bounded_enumeration"))
                                        : Verdict::finite(r.solutions, "bounded-exhaustive");
        st.done("complete box of " + states.get_str() + " states: " + describe(v));
        return v;
      }
      seen = r.solutions;
      st.done(std::string(bs.complete ? "enumeration budget exceeded" : "user box only") + ", " +
                  std::to_string(seen.size()) + " solutions seen",
              seen);
    } else {
      st.done(bounded ? "box of " + states.get_str() + " states exceeds budget" : "no complete bounds");
    }
  }
  if (!cfg_.box)
    if (auto v = split_cases(p, bs, depth, tr)) return *v;
  if (depth > 0) return Verdict::inconclusive();

  // probing
  tick();
  Verdict out = Verdict::inconclusive();
  {
    Stage st{tr, "probe"};
    ProbeReport pr = probe(p, cfg_.probe_radius, cfg_.probe_budget);
    stats.evaluations += pr.evaluations;
    seen.insert(seen.end(), pr.hits.begin(), pr.hits.end());
    canonicalize(seen);
    st.done(std::to_string(pr.hits.size()) + " hits in " + std::to_string(pr.evaluations) + " samples", seen);
  }
  if (seen.empty()) {
    tick();
    Stage st{tr, "modular_extended"};
    std::vector<unsigned long> ms;
    for (unsigned long m = cfg_.max_modulus + 1; m <= 4 * cfg_.max_modulus; ++m) ms.push_back(m);
    try {
      auto scan = find_obstruction(eq, ms, effective_domains(eq, p.domains), cfg_.state_budget);
      stats.moduli_scanned += scan.scanned;
      if (scan.certificate) {
        st.done("no solutions modulo " + std::to_string(scan.certificate->modulus));
        return Verdict::no_solution(make_cert("modular", {{"states_checked", scan.certificate->states_checked}, {"domain_note", scan.certificate->domain_note}},
                                              Integer(scan.certificate->modulus)));
      }
      st.done("no obstruction up to " + std::to_string(4 * cfg_.max_modulus));
    } catch (const std::exception& e) {
      st.done(std::string("not applicable: ") + e.what());
    }
  }
  return out;
}

// ---- systems

/// Joint intervals from every equation intersected; nullopt-free intervals mean complete.
struct JointBounds {
  BoundSet set;
  std::optional<std::string> conflict;
};

JointBounds joint_bounds(const Problem& p) {
  JointBounds jb;
  for (const auto& v : p.variables()) {
    VarBound b;
    Domain d = p.domain_of(v);
    b.lo = d.lower();
    b.hi = d.upper();
    b.provenance = "domain";
    jb.set.vars[v] = b;
  }
  for (std::size_t i = 0; i < p.equations.size(); ++i) {
    BoundSet bs = infer_bounds(p.equations[i], p.domains);
    for (const auto& [v, b] : bs.vars) {
      auto& j = jb.set.vars[v];
      if (b.lo && (!j.lo || *b.lo > *j.lo)) {
        j.lo = b.lo;
        j.provenance = b.provenance;
      }
      if (b.hi && (!j.hi || *b.hi < *j.hi)) {
        j.hi = b.hi;
        j.provenance = b.provenance;
      }
    }
  }
  jb.set.complete = true;
  for (const auto& [v, b] : jb.set.vars) {
    if (b.lo && b.hi && *b.lo > *b.hi && !jb.conflict) jb.conflict = v;
    jb.set.complete = jb.set.complete && b.bounded();
  }
  return jb;
}

/// Every solution of equation `index` substituted into the rest.
std::vector<std::pair<Assignment, Problem>> known_cases(const Problem& p, std::size_t index, const std::vector<Assignment>& sols) {
  std::vector<std::pair<Assignment, Problem>> out;
  for (const auto& s : sols) {
    Problem q = p;
    q.equations.erase(q.equations.begin() + static_cast<long>(index));
    bool ok = true;
    for (const auto& [v, x] : s) {
      auto r = substitute(q, v, x);
      if (!r) {
        ok = false;
        break;
      }
      q = *r;
    }
    if (ok) out.push_back({s, q});
  }
  return out;
}

Verdict Engine::system(const Problem& p, int depth, std::vector<TraceEntry>* tr) {
  tick();
  const std::size_t n = p.equations.size();
  // drop identities and reject nonzero constants
  {
    Problem q = p;
    q.equations.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (p.equations[i].lhs.is_zero()) continue;
      q.equations.push_back(p.equations[i]);
    }
    for (const auto& v : p.variables()) q.domains[v] = p.domain_of(v);
    if (q.equations.size() < n) {
      if (q.equations.empty()) {
        q.equations.push_back({});
        return single(q, depth, tr);
      }
      if (q.equations.size() == 1) return single(q, depth, tr);
      return system(q, depth, tr);
    }
  }
  // per-equation sensibility
  for (std::size_t i = 0; i < n; ++i) {
    Problem q = equation_problem(p, i);
    if (auto v = sensibility(q, tr)) {
      v->certificate->data["equation"] = i;
      return *v;
    }
  }
  tick();
  JointBounds jb = joint_bounds(p);
  {
    Stage st{tr, "sign_consistency"};
    if (jb.conflict) {
      st.done("empty joint interval for " + *jb.conflict);
      return Verdict::no_solution(make_cert("sign_magnitude", {{"rule", "interval-conflict"}, {"variable", *jb.conflict}}));
    }
    st.done(jb.set.complete ? "joint bounds complete" : "no conflict");
  }
  // test of known solutions
  std::vector<Verdict> single_verdicts(n);
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < n; ++i) {
    tick();
    Stage st{tr, "equation_" + std::to_string(i)};
    single_verdicts[i] = single(equation_problem(p, i), depth + 1, nullptr);
    st.done(describe(single_verdicts[i]));
    const auto& v = single_verdicts[i];
    if (v.status == Status::NoSolution) {
      Verdict r = v;
      r.certificate->data["equation"] = i;
      return r;
    }
    if (v.status == Status::Finite && (!best || v.solutions.size() < single_verdicts[*best].solutions.size())) best = i;
  }
  if (best && depth < kMaxDepth) {
    tick();
    Stage st{tr, "test_of_known"};
    auto cases = known_cases(p, *best, single_verdicts[*best].solutions);
    std::vector<Verdict> parts;
    Json cj = Json::array();
    bool ok = true;
    for (const auto& [s, q] : cases) {
      tick();
      Verdict v;
      if (q.equations.size() > 1)
        v = system(q, depth + 1, nullptr);
      else
        v = single(q, depth + 1, nullptr);
      if (!v.definitive()) {
        ok = false;
        break;
      }
      for (const auto& [var, x] : s) v = add_fixed(v, var, x);
      if (v.status == Status::NoSolution) cj.push_back({{"assign", assignment_json(s)}, {"certificate", to_json(*v.certificate)}});
      parts.push_back(v);
    }
    if (ok) {
      Verdict r = merge(parts, single_verdicts[*best].completeness,
                        exhaustion("test_of_known", {{"equation", *best}, {"cases", cj}}));
      st.done("equation " + std::to_string(*best) + " tested on the rest: " + describe(r));
      return r;
    }
    st.done("some case inconclusive");
  }
  // substitution of a linear equation's lattice
  if (auto ls_idx = [&]() -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < n; ++i)
          if (as_linear_system({p.equations[i]})) return i;
        return std::nullopt;
      }();
      ls_idx && depth < kMaxDepth) {
    tick();
    Stage st{tr, "substitution"};
    std::size_t i = *ls_idx;
    auto ls = as_linear_system({p.equations[i]});
    LinearSolution s = solve_linear_lattice(ls->A, ls->b);
    bool usable = s.lattice.has_value();
    for (std::size_t k = 0; k < n && usable; ++k)
      for (const auto& v : ls->variables)
        usable = usable && !p.equations[k].lhs.occurs_exponentially(v) && !p.equations[k].lhs.occurs_factorially(v);
    if (usable) {
      auto vars = p.variables();
      std::set<std::string> taken(vars.begin(), vars.end());
      std::vector<std::string> params;
      for (std::size_t j = 0; j < s.lattice->basis.size(); ++j) {
        params.push_back(fresh(taken, "t" + std::to_string(j + 1)));
        taken.insert(params.back());
      }
      std::map<std::string, Polynomial> expr;
      for (std::size_t k = 0; k < ls->variables.size(); ++k) {
        Polynomial e = Polynomial::constant(s.lattice->particular[k]);
        for (std::size_t j = 0; j < params.size(); ++j) e = e + Polynomial::variable(params[j]) * s.lattice->basis[j][k];
        expr[ls->variables[k]] = e;
      }
      Problem q;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i) continue;
        NormalizedEquation e;
        e.lhs = p.equations[k].lhs;
        for (const auto& [v, ex] : expr) e.lhs = e.lhs.substitute(v, ex);
        q.equations.push_back(e);
      }
      for (const auto& v : vars)
        if (!expr.count(v)) q.domains[v] = p.domain_of(v);
      for (const auto& t : params) q.domains[t] = Domain::integers();
      for (const auto& c : p.constraints) {
        std::set<std::string> c2;
        bool touches = false;
        for (const auto& v : c) touches |= expr.count(v) > 0;
        if (!touches) q.constraints.push_back(c);
      }
      for (auto& e : q.equations)
        for (const auto& v : p.nonvanishing())
          if (!expr.count(v) && e.lhs.variables().count(v)) e.nonvanishing.insert(v);
      Verdict sub = q.equations.size() > 1 ? system(q, depth + 1, nullptr) : single(q, depth + 1, nullptr);
      if (sub.status == Status::Finite || sub.status == Status::NoSolution) {
        std::vector<Assignment> sols;
        for (const auto& t : sub.solutions) {
          Assignment a;
          for (const auto& v : vars) {
            if (expr.count(v))
              a[v] = expr[v].evaluate(t);
            else
              a[v] = t.at(v);
          }
          if (p.satisfied_by(a)) sols.push_back(a);
        }
        Verdict r = sols.empty()
                        ? Verdict::no_solution(exhaustion("substitution",
                                                          {{"equation", i},
                                                           {"certificate", sub.certificate ? to_json(*sub.certificate) : Json()},
                                                           {"candidates", sub.solutions.size()}}))
                        : Verdict::finite(sols, sub.completeness);
        st.done("lattice of equation " + std::to_string(i) + " substituted: " + describe(r));
        return r;
      }
      std::set<std::string> lin(ls->variables.begin(), ls->variables.end());
      if (sub.status == Status::Family && all_z(p, lin)) {
        std::vector<Family> fams;
        bool ok = true;
        auto lift_point = [&](const Assignment& t) {
          Family f = point_family(t);
          f.kind = "indexed";
          return f;
        };
        std::vector<Family> src = sub.families;
        for (const auto& t : sub.solutions) src.push_back(lift_point(t));
        for (const auto& f : src) {
          if (f.pell) {
            ok = false;
            break;
          }
          Family g;
          g.kind = f.kind;
          g.parameters = f.parameters;
          g.constraints = f.constraints;
          for (const auto& v : vars) {
            if (!expr.count(v)) {
              g.expressions[v] = f.expressions.at(v);
              continue;
            }
            // linear in the lattice parameters, each itself numerator / denominator
            Integer D = 1;
            for (const auto& t : params) D = lcm(D, f.expressions.at(t).denominator);
            Polynomial num = Polynomial::constant(expr[v].constant_term() * D);
            for (std::size_t j = 0; j < params.size(); ++j) {
              const ParamExpr& pe = f.expressions.at(params[j]);
              Integer c = expr[v].coefficient(Polynomial::variable(params[j]).terms().begin()->first);
              num = num + pe.numerator * Integer(c * (D / pe.denominator));
            }
            g.expressions[v] = {num, D};
          }
          fams.push_back(g);
        }
        if (ok) {
          Verdict r = Verdict::family(fams);
          st.done("lattice of equation " + std::to_string(i) + " substituted: " + describe(r));
          return r;
        }
      }
      st.done("substituted system " + describe(sub));
    } else {
      st.done("not applicable: lattice enters an exponent or factorial");
    }
  }
  // joint enumeration
  if (jb.set.complete) {
    tick();
    Stage st{tr, "joint_enumeration"};
    Integer states = 1;
    for (const auto& [v, b] : jb.set.vars) states *= *b.hi - *b.lo + 1;
    if (states <= cfg_.enum_budget) {
      EnumOptions o;
      o.budget = cfg_.enum_budget;
      o.deadline = deadline_;
      o.sign_split = false;
      EnumResult r = enumerate_box(p, jb.set, {}, o);
      stats.evaluations += r.evaluations;
      if (r.complete) {
        Verdict v = r.solutions.empty() ? Verdict::no_solution(exhaustion("joint_enumeration"))
                                        : Verdict::finite(r.solutions, "bounded-exhaustive");
        st.done(describe(v));
        return v;
      }
      st.done("budget exceeded");
    } else {
      st.done("box too large");
    }
  }
  if (depth > 0) return Verdict::inconclusive();
  tick();
  Verdict out = Verdict::inconclusive();
  Stage st{tr, "probe"};
  ProbeReport pr = probe(p, cfg_.probe_radius, cfg_.probe_budget);
  stats.evaluations += pr.evaluations;
  st.done(std::to_string(pr.hits.size()) + " hits in " + std::to_string(pr.evaluations) + " samples", pr.hits);
  return out;
}

}  // namespace

Verdict solve(const Problem& problem, const Config& config) {
  Engine e(config);
  std::vector<TraceEntry> trace;
  Verdict v = e.run(problem, &trace);
  v.trace = std::move(trace);
  v.stats = e.stats;
  return v;
}

Verdict solve_system(const Problem& problem, const Config& config) { return solve(problem, config); }

// ------------------------------------------------------------------ checking

namespace {

CheckReport yes(const std::string& m) { return {true, m}; }
CheckReport no(const std::string& m) { return {false, m}; }

Json need(const Certificate& c, const char* key) {
  if (!c.data.is_object() || !c.data.contains(key)) throw MalformedCertificate(c.kind + " certificate needs '" + key + "'");
  return c.data[key];
}

CheckReport expect_empty(const std::function<Verdict()>& fn, const std::string& what) {
  try {
    Verdict v = fn();
    if (v.status == Status::NoSolution) return yes(what + " re-run finds nothing");
    return no(what + " re-run gives " + describe(v));
  } catch (const std::exception& e) {
    return no(what + " does not apply: " + e.what());
  }
}

CheckReport check_single(const Problem& p0, const Certificate& c);

CheckReport check_case_split(const Problem& p, const Certificate& c) {
  Json split = need(c, "split");
  Json cases = need(c, "cases");
  const auto& eq = p.equations[0];
  auto find_case = [&](const Assignment& a) -> std::optional<Certificate> {
    for (const auto& cs : cases)
      if (cs.contains("assign") && assignment_from_json(cs["assign"]) == a) return certificate_from_json(cs["certificate"]);
    return std::nullopt;
  };
  auto check_value = [&](const std::string& v, const Integer& x) -> CheckReport {
    auto q = substitute(p, v, x);
    if (!q) return yes("");
    auto cert = find_case({{v, x}});
    if (!cert) return no("no case for " + v + " = " + x.get_str());
    CheckReport r = check_single(*q, *cert);
    if (!r.ok) return no(v + " = " + x.get_str() + ": " + r.message);
    return yes("");
  };
  std::string kind = split.value("kind", std::string());
  if (kind == "values") {
    std::string v = split.value("variable", std::string());
    BoundSet bs = infer_bounds(eq, p.domains);
    auto it = bs.vars.find(v);
    if (it == bs.vars.end() || !it->second.bounded()) return no("no proved bound for " + v);
    for (Integer x = *it->second.lo; x <= *it->second.hi; ++x)
      if (auto r = check_value(v, x); !r.ok) return r;
    return yes("every value of " + v + " in [" + it->second.lo->get_str() + ", " + it->second.hi->get_str() + "] refuted");
  }
  if (kind == "modular_bound") {
    ModularBound mb;
    mb.modulus = split.at("modulus").get<unsigned long>();
    for (auto& [v, P] : split.at("forced").items()) mb.forced[v] = P.get<unsigned long>();
    DomainMap eff = effective_domains(eq, p.domains);
    if (!check_modular_bound(eq, eff, mb)) return no("modular bound does not hold");
    for (const auto& [v, P] : mb.forced) {
      Integer lo = eff.count(v) && eff.at(v).lower() ? *eff.at(v).lower() : Integer(0);
      for (Integer x = lo; x < P; ++x)
        if (auto r = check_value(v, x); !r.ok) return r;
    }
    return yes("modulus " + std::to_string(mb.modulus) + " forces a small exponent; every case refuted");
  }
  if (kind == "divisors") {
    std::string v = split.value("variable", std::string());
    if (dividing_variable(eq) != v) {
      bool ok = eq.constant() != 0 && eq.lhs.is_polynomial_only();
      for (const auto& [sig, k] : eq.lhs.terms())
        if (!sig.is_constant() && !sig.powers.count(v)) ok = false;
      if (!ok) return no(v + " does not divide every nonconstant term");
    }
    auto divs = signed_divisors(abs(eq.constant()));
    if (divs.size() > kMaxDivisors) return no("too many divisors to re-check");
    for (const auto& d : divs)
      if (auto r = check_value(v, d); !r.ok) return r;
    return yes(v + " divides " + to_string(eq.constant()) + "; every divisor refuted");
  }
  if (kind == "relaxed") {
    if (cases.size() != 1) throw MalformedCertificate("relaxed split needs one case");
    CheckReport r = check_single(without_nonvanishing(p), certificate_from_json(cases[0]["certificate"]));
    if (!r.ok) return no("relaxed: " + r.message);
    return yes("no solution even with zero allowed");
  }
  if (kind == "common_factor") {
    std::string v = split.value("variable", std::string());
    auto cf = common_variable_factor(eq.lhs);
    if (!cf || cf->first != v) return no(v + " is not a common factor");
    if (substitute(p, v, 0)) return no(v + " = 0 is admissible");
    if (cases.size() != 1) throw MalformedCertificate("common_factor split needs one case");
    Problem q = p;
    q.equations[0].lhs = cf->second;
    q.equations[0].source.reset();
    for (const auto& w : p.variables()) q.domains[w] = p.domain_of(w);
    CheckReport r = check_single(q, certificate_from_json(cases[0]["certificate"]));
    if (!r.ok) return no("cofactor: " + r.message);
    return yes("cofactor refuted and " + v + " cannot vanish");
  }
  throw MalformedCertificate("unknown split kind '" + kind + "'");
}

CheckReport check_exhaustion(const Problem& p, const Certificate& c) {
  const auto& eq = p.equations[0];
  std::string method = need(c, "method").get<std::string>();
  if (method == "factor_pairs" || method == "zero_forms") {
    ProductForm pf;
    for (const auto& f : need(c, "forms")) {
      ParamExpr e = ParamExpr::parse(f.get<std::string>());
      if (e.denominator != 1) throw MalformedCertificate("fractional form");
      pf.forms.push_back(e.numerator);
    }
    pf.N = method == "zero_forms" ? Integer(0) : integer_from_json(need(c, "N"));
    pf.scale = method == "zero_forms" ? Integer(1) : integer_from_json(need(c, "scale"));
    if (method == "zero_forms") {
      pf.scale = 0;
      Polynomial prod = pf.expand();
      for (auto k : {Integer(1), Integer(-1)})
        if (prod == eq.lhs * k) pf.scale = k;
      if (pf.scale == 0) {
        // scaled product
        Integer a = prod.content(), b = eq.lhs.content();
        if (b != 0 && a % b == 0 && (prod == eq.lhs * Integer(a / b) || prod == eq.lhs * Integer(-a / b))) pf.scale = 1;
      }
      if (pf.scale == 0) return no("forms do not multiply to the equation");
      return expect_empty([&] { return zero_form_solve(pf, p); }, "zero forms");
    }
    if (!pf.matches(eq.lhs)) return no("forms do not multiply to the equation");
    return expect_empty([&] { return factor_pair_solve(pf, p); }, "factor pairs");
  }
  if (method == "discriminant") {
    std::string pivot = need(c, "pivot").get<std::string>();
    return expect_empty([&] { return discriminant_solve(eq, pivot, p); }, "discriminant");
  }
  if (method == "separation") return expect_empty([&] { return separation_solve(eq, p); }, "separation");
  if (method == "isolated_linear") return expect_empty([&] { return isolated_linear_solve(eq, p); }, "isolated linear");
  if (method == "product_dominant") return expect_empty([&] { return product_dominant_solve(p); }, "product bound");
  if (method == "linear") return expect_empty([&] { return linear_solve(p); }, "linear");
  if (method == "univariate_roots") return expect_empty([&] { return univariate_solve(p); }, "rational roots");
  if (method == "relaxed") {
    Verdict r = solve(without_nonvanishing(p));
    if (r.status != Status::Finite) return no("relaxed problem is not finite on re-solve");
    for (const auto& a : r.solutions)
      if (p.satisfied_by(a)) return no(render_assignment(a) + " survives");
    return yes("every relaxed solution has a forbidden zero");
  }
  if (method == "bounded_enumeration") {
    BoundSet bs = infer_bounds(eq, p.domains);
    if (!bs.complete) return no("bounds are not complete");
    EnumResult r = enumerate_box(p, bs, detect_symmetry(eq, p.domains));
    if (!r.complete) return no("enumeration incomplete");
    if (!r.solutions.empty()) return no("enumeration finds " + render_assignment(r.solutions[0]));
    return yes("complete enumeration of the proved box is empty");
  }
  throw MalformedCertificate("unknown exhaustion method '" + method + "'");
}

/// Certificate produced by a solver that is re-run from scratch.
CheckReport same_as_rerun(const std::function<Verdict()>& fn, const Certificate& c, const std::string& what) {
  try {
    Verdict v = fn();
    if (v.status == Status::NoSolution && to_json(*v.certificate) == to_json(c)) return yes(what + " reproduced");
    return no(what + " re-run gives " + describe(v));
  } catch (const std::exception& e) {
    return no(what + " does not apply: " + e.what());
  }
}

CheckReport check_single(const Problem& p0, const Certificate& c) {
  if (p0.equations.size() != 1) throw MalformedCertificate("expected a single equation");
  Problem p = equation_problem(p0, 0);
  const auto& eq = p.equations[0];
  if (c.kind == "modular") {
    if (!c.modulus || *c.modulus < 2 || !fits_long(*c.modulus)) throw MalformedCertificate("modular certificate needs a modulus >= 2");
    unsigned long m = c.modulus->get_ui();
    try {
      if (has_satisfying_state(eq, m, effective_domains(eq, p.domains))) return no("a residue class modulo " + std::to_string(m) + " satisfies the equation");
    } catch (const std::exception& e) {
      return no(e.what());
    }
    return yes("no residue class modulo " + std::to_string(m) + " satisfies the equation");
  }
  if (c.kind == "content") {
    Integer d = integer_from_json(need(c, "divisor"));
    if (d < 2) return no("divisor must exceed 1");
    for (const auto& [sig, k] : eq.lhs.terms())
      if (!sig.is_constant() && k % d != 0) return no(d.get_str() + " does not divide every coefficient");
    if (eq.constant() % d == 0) return no(d.get_str() + " divides the constant");
    return yes(d.get_str() + " divides every coefficient but not the constant");
  }
  if (c.kind == "sign_magnitude") {
    BoundSet bs = infer_bounds(eq, p.domains);
    if (bs.infeasible) return yes("bound argument excludes every assignment: " + bs.argument.dump());
    return no("bound argument does not exclude every assignment");
  }
  if (c.kind == "gcd_linear") {
    auto ls = as_linear_system({eq});
    if (!ls) return no("equation is not linear");
    Vector lambda;
    for (const auto& x : need(c, "lambda")) lambda.push_back(integer_from_json(x));
    Integer g = integer_from_json(need(c, "g"));
    if (lambda.size() != ls->A.size()) return no("multiplier count mismatch");
    if (check_linear_certificate(ls->A, ls->b, lambda, g)) return yes("gcd " + g.get_str() + " does not divide the constant");
    return no("gcd certificate does not hold");
  }
  if (c.kind == "flt") {
    auto m = flt_check(eq, p);
    if (!m) return no("equation is not a sum of like powers");
    if (m->n != need(c, "n").get<unsigned long>()) return no("exponent mismatch");
    if (m->zero_cases.status != Status::NoSolution) return no("some term may vanish");
    return yes("rewrites as " + m->rewrite + " with no vanishing term");
  }
  if (c.kind == "pell_empty_class" || c.kind == "pell_orbit") {
    CheckReport r = same_as_rerun([&] { return pell_solve(p); }, c, "Pell reduction");
    if (r.ok) return r;
    return same_as_rerun([&] { return discriminant_any(p); }, c, "discriminant reduction");
  }
  if (c.kind == "exhaustion") return check_exhaustion(p, c);
  if (c.kind == "case_split") return check_case_split(p, c);
  throw MalformedCertificate("unknown certificate kind '" + c.kind + "'");
}

CheckReport check_system(const Problem& p, const Certificate& c) {
  if (c.kind == "sign_magnitude" && c.data.value("rule", std::string()) == "interval-conflict") {
    JointBounds jb = joint_bounds(p);
    if (jb.conflict) return yes("joint bounds for " + *jb.conflict + " are empty");
    return no("joint bounds are consistent");
  }
  if (c.kind == "exhaustion") {
    std::string method = c.data.value("method", std::string());
    if (method == "joint_enumeration") {
      JointBounds jb = joint_bounds(p);
      if (!jb.set.complete) return no("joint bounds are not complete");
      EnumOptions o;
      o.sign_split = false;
      EnumResult r = enumerate_box(p, jb.set, {}, o);
      if (r.complete && r.solutions.empty()) return yes("joint box enumeration is empty");
      return no("joint box enumeration is not empty");
    }
    if (method == "test_of_known") {
      std::size_t i = need(c, "equation").get<std::size_t>();
      if (i >= p.equations.size()) throw MalformedCertificate("equation index out of range");
      Verdict v = solve(equation_problem(p, i));
      if (v.status != Status::Finite) return no("equation " + std::to_string(i) + " is not finite on re-solve");
      for (const auto& [s, q] : known_cases(p, i, v.solutions)) {
        std::optional<Certificate> cert;
        for (const auto& cs : need(c, "cases"))
          if (assignment_from_json(cs["assign"]) == s) cert = certificate_from_json(cs["certificate"]);
        if (!cert) return no("no case for " + render_assignment(s));
        CheckReport r = verify_certificate(q, *cert);
        if (!r.ok) return no(render_assignment(s) + ": " + r.message);
      }
      return yes("every solution of equation " + std::to_string(i) + " fails the rest");
    }
    if (method == "substitution") {
      Verdict v = solve(p);
      if (v.status == Status::NoSolution && v.certificate->kind == "exhaustion" &&
          v.certificate->data.value("method", std::string()) == "substitution")
        return yes("substitution re-derived");
      return no("substitution does not re-derive");
    }
  }
  if (c.data.is_object() && c.data.contains("equation")) {
    std::size_t i = c.data["equation"].get<std::size_t>();
    if (i >= p.equations.size()) throw MalformedCertificate("equation index out of range");
    Certificate inner = c;
    inner.data.erase("equation");
    CheckReport r = check_single(equation_problem(p, i), inner);
    r.message = "equation " + std::to_string(i) + ": " + r.message;
    return r;
  }
  throw MalformedCertificate("system certificate needs an 'equation' index");
}

}  // namespace

CheckReport verify_certificate(const Problem& problem, const Certificate& cert) {
  if (problem.equations.empty()) return no("no equation");
  if (problem.equations.size() > 1) return check_system(problem, cert);
  return check_single(problem, cert);
}

SolutionReport verify_solutions(const Problem& problem, const std::vector<Assignment>& solutions,
                                const std::vector<Family>& families) {
  SolutionReport rep;
  auto check = [&](const Assignment& a, const std::string& label) {
    for (const auto& v : problem.variables()) {
      auto it = a.find(v);
      if (it == a.end()) {
        rep.failures.push_back(label + ": missing " + v);
        return;
      }
      if (!problem.domain_of(v).contains(it->second)) {
        rep.failures.push_back(label + ": " + v + " outside " + problem.domain_of(v).name());
        return;
      }
    }
    for (const auto& v : problem.nonvanishing())
      if (a.at(v) == 0) {
        rep.failures.push_back(label + ": " + v + " must be nonzero");
        return;
      }
    for (std::size_t i = 0; i < problem.equations.size(); ++i) {
      Integer val;
      try {
        val = problem.equations[i].lhs.evaluate(a);
      } catch (const std::exception& e) {
        rep.failures.push_back(label + ": " + e.what());
        return;
      }
      if (val != 0) {
        std::string which = problem.equations.size() > 1 ? "equation " + std::to_string(i) + " " : "";
        rep.failures.push_back(label + ": " + which + "evaluates to " + val.get_str());
        return;
      }
    }
  };
  for (const auto& s : solutions) check(s, render_assignment(s));
  for (std::size_t fi = 0; fi < families.size(); ++fi) {
    const Family& f = families[fi];
    const std::size_t k = f.parameters.size();
    long step = 1;
    while (k > 0 && std::pow(21.0 / static_cast<double>(step), static_cast<double>(k)) > 20000) ++step;
    Assignment prm;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == k) {
        std::string label = "family " + std::to_string(fi) + " at " + render_assignment(prm);
        auto a = f.materialize(prm);
        if (!a) {
          rep.failures.push_back(label + ": not integral");
          return;
        }
        check(*a, label);
        return;
      }
      const Domain& d = f.parameters[i].domain;
      long lo = 0, hi = 20;
      if (auto l = d.lower(); l && *l > lo) {
        lo = l->get_si();
        hi = lo + 20;
      }
      if (auto u = d.upper(); u && *u < hi) {
        hi = u->get_si();
        if (!d.lower() || hi - 20 > lo) lo = std::max(lo, hi - 20);
        if (d.lower()) lo = std::max(d.lower()->get_si(), hi - 20);
      }
      for (long t = lo; t <= hi; t += step) {
        prm[f.parameters[i].name] = t;
        rec(i + 1);
      }
      prm.erase(f.parameters[i].name);
    };
    rec(0);
  }
  rep.ok = rep.failures.empty();
  return rep;
}

SolutionReport verify_verdict(const Problem& problem, const Verdict& verdict) {
  SolutionReport rep;
  switch (verdict.status) {
    case Status::NoSolution: {
      if (!verdict.certificate) {
        rep.ok = false;
        rep.failures.push_back("no certificate");
        return rep;
      }
      CheckReport c = verify_certificate(problem, *verdict.certificate);
      rep.ok = c.ok;
      if (!c.ok) rep.failures.push_back(c.message);
      return rep;
    }
    case Status::Finite:
    case Status::Family: return verify_solutions(problem, verdict.solutions, verdict.families);
    case Status::Inconclusive: {
      std::vector<Assignment> seen;
      for (const auto& t : verdict.trace) seen.insert(seen.end(), t.solutions.begin(), t.solutions.end());
      return verify_solutions(problem, seen);
    }
  }
  return rep;
}

}  // namespace dioph
