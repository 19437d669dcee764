#include "dioph/search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "dioph/poly.hpp"

namespace dioph {

// ------------------------------------------------------------------ evaluator

namespace {

Integer from_i128(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  Integer hi = static_cast<unsigned long>(u >> 64), lo = static_cast<unsigned long>(u & ~0ul);
  Integer r = (hi << 64) + lo;
  return neg ? Integer(-r) : r;
}

bool to_i128(const Integer& v, __int128& out) {
  if (mpz_sizeinbase(v.get_mpz_t(), 2) > 120) return false;
  Integer a = abs(v);
  Integer hi = a >> 64, lo = a - (hi << 64);
  unsigned __int128 u = (static_cast<unsigned __int128>(hi.get_ui()) << 64) | lo.get_ui();
  out = v < 0 ? -static_cast<__int128>(u) : static_cast<__int128>(u);
  return true;
}

}  // namespace

Evaluator::Evaluator(const Polynomial& p, const std::vector<std::string>& order) : poly_(p), order_(order) {
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < order.size(); ++i) idx[order[i]] = i;
  for (const auto& [sig, c] : p.terms()) {
    Term t;
    t.coef = c;
    t.fits = to_i128(c, t.small);
    for (const auto& [v, k] : sig.powers) t.factors.push_back({idx.at(v), k, 0, false});
    for (const auto& [v, b] : sig.exponentials) {
      Factor f{idx.at(v), 0, 0, false};
      if (!fits_long(b) || abs(b) > 1'000'000) {
        t.fits = false;
      } else {
        f.base = b.get_si();
      }
      t.factors.push_back(f);
    }
    for (const auto& v : sig.factorials) t.factors.push_back({idx.at(v), 0, 0, true});
    terms_.push_back(std::move(t));
  }
}

bool Evaluator::fast(const std::vector<long>& values, __int128& out) const {
  static const std::vector<__int128> facts = [] {
    std::vector<__int128> f{1};
    for (int i = 1; i <= 33; ++i) f.push_back(f.back() * i);
    return f;
  }();
  __int128 sum = 0;
  for (const auto& t : terms_) {
    if (!t.fits) return false;
    __int128 m = t.small;
    for (const auto& f : t.factors) {
      long x = values[f.var];
      if (f.factorial) {
        if (x < 0 || x > 33) return false;
        if (__builtin_mul_overflow(m, facts[static_cast<std::size_t>(x)], &m)) return false;
      } else if (f.base != 0) {
        if (x < 0) return false;
        for (long i = 0; i < x; ++i)
          if (__builtin_mul_overflow(m, static_cast<__int128>(f.base), &m)) return false;
      } else {
        for (unsigned long i = 0; i < f.power; ++i)
          if (__builtin_mul_overflow(m, static_cast<__int128>(x), &m)) return false;
      }
      if (m == 0) break;
    }
    if (__builtin_add_overflow(sum, m, &sum)) return false;
  }
  out = sum;
  return true;
}

Integer Evaluator::value(const std::vector<long>& values) const {
  __int128 v;
  if (fast(values, v)) return from_i128(v);
  Assignment a;
  for (std::size_t i = 0; i < order_.size(); ++i) a[order_[i]] = values[i];
  return poly_.evaluate(a);
}

bool Evaluator::is_zero(const std::vector<long>& values) const {
  __int128 v;
  if (fast(values, v)) return v == 0;
  return value(values) == 0;
}

// ------------------------------------------------------------------ univariate analysis

namespace {

constexpr long kScanCap = 2'000'000;

struct Uni {
  Polynomial f;
  std::string var;
  Integer at(const Integer& x) const { return f.evaluate({{var, x}}); }
};

/// Fujiwara bound: every real root of the coefficients (low to high) lies in (-R, R).
Integer root_radius(const std::vector<Rational>& c) {
  const std::size_t n = c.size() - 1;
  const Rational lead = abs(c.back());
  Integer best = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    Rational q = abs(c[n - k]) / lead;
    if (k == n) q /= 2;
    if (q == 0) continue;
    Integer ceilq = ceil_div(q.get_num(), q.get_den());
    Integer r = iroot_floor(ceilq, static_cast<unsigned long>(k)) + 1;
    best = std::max(best, r);
  }
  return 2 * best + 1;
}

/// Smallest R with f(x) > U for every x > R, when f grows without bound.
std::optional<Integer> right_cutoff(const Uni& u, const Integer& U) {
  if (u.f.is_polynomial_only()) {
    auto g = UniPoly::from_polynomial(u.f - Polynomial::constant(U), u.var);
    if (!g || g->degree() < 1 || g->lead() < 0) return std::nullopt;
    return root_radius(g->c);
  }
  struct GT {
    Integer c;
    bool fact;
    Integer B;
    unsigned long k;
    Signature sig;
  };
  std::vector<GT> ts;
  bool negative_base = false;
  for (const auto& mo : u.f.monomials()) {
    GT t{mo.coefficient, mo.sig.factorials.count(u.var) > 0, 1, 0, mo.sig};
    if (auto it = mo.sig.powers.find(u.var); it != mo.sig.powers.end()) t.k = it->second;
    for (const auto& [v, b] : mo.sig.exponentials) {
      t.B *= abs(b);
      if (b < 0) negative_base = true;
    }
    ts.push_back(t);
  }
  auto key_less = [](const GT& a, const GT& b) {
    return std::tie(a.fact, a.B, a.k) < std::tie(b.fact, b.B, b.k);
  };
  auto dom = std::max_element(ts.begin(), ts.end(), key_less);
  for (auto it = ts.begin(); it != ts.end(); ++it)
    if (it != dom && !key_less(*it, *dom)) return std::nullopt;
  if (dom->c < 0) return std::nullopt;
  for (const auto& [v, b] : dom->sig.exponentials)
    if (b < 0) return std::nullopt;
  (void)negative_base;
  // past vstar every other term grows by a smaller ratio than the dominant one
  Integer vstar = 1;
  for (const auto& t : ts) {
    if (&t == &*dom) continue;
    if (dom->fact && !t.fact) {
      vstar = std::max({vstar, Integer(2 * t.B), Integer(2 * t.k)});
    } else if (t.B < dom->B) {
      double r = std::log(dom->B.get_d() / t.B.get_d());
      vstar = std::max(vstar, Integer(static_cast<unsigned long>(std::ceil(1.01 * static_cast<double>(t.k) / r)) + 1));
    }
  }
  const Integer absU = abs(U);
  for (Integer x = vstar; x < vstar + 20000; ++x) {
    Integer D, S = 0;
    for (const auto& t : ts) {
      Polynomial p;
      p.add_term(t.sig, t.c);
      Integer val = p.evaluate({{u.var, x}});
      if (&t == &*dom)
        D = val;
      else
        S += abs(val);
    }
    if (D > S + absU) return x - 1;
  }
  return std::nullopt;
}

/// Largest L with f(x) > U for every x < L (polynomial f only).
std::optional<Integer> left_cutoff(const Uni& u, const Integer& U) {
  if (!u.f.is_polynomial_only()) return std::nullopt;
  auto g = UniPoly::from_polynomial(u.f - Polynomial::constant(U), u.var);
  if (!g || g->degree() < 1) return std::nullopt;
  int s = sgn(g->lead()) * (g->degree() % 2 ? -1 : 1);
  if (s < 0) return std::nullopt;
  return -root_radius(g->c);
}

/// R with every real critical point of f inside (-R, R); f is monotone beyond it.
std::optional<Integer> critical_radius(const Uni& u) {
  if (!u.f.is_polynomial_only()) return std::nullopt;
  auto g = UniPoly::from_polynomial(u.f, u.var);
  if (!g) return std::nullopt;
  if (g->degree() <= 1) return Integer(0);
  std::vector<Rational> d;
  for (int i = 1; i <= g->degree(); ++i) d.push_back(g->c[static_cast<std::size_t>(i)] * i);
  return root_radius(d);
}

/// First x in [a, b] with f(x) <= U, given f(a) > U >= f(b) and f monotone on [a, b].
Integer first_at_most(const Uni& u, Integer a, Integer b, const Integer& U) {
  while (b - a > 1) {
    Integer mid = floor_div(a + b, 2);
    if (u.at(mid) <= U)
      b = mid;
    else
      a = mid;
  }
  return b;
}

/// Last x in [a, b] with f(x) <= U, given f(a) <= U < f(b) and f monotone on [a, b].
Integer last_at_most(const Uni& u, Integer a, Integer b, const Integer& U) {
  while (b - a > 1) {
    Integer mid = floor_div(a + b, 2);
    if (u.at(mid) <= U)
      a = mid;
    else
      b = mid;
  }
  return a;
}

struct Level {
  bool empty = false;
  std::optional<Integer> lo, hi;
};

/// Interval containing every x in [lo, hi] with f(x) <= U.
Level level_set(const Uni& u, std::optional<Integer> lo, std::optional<Integer> hi, const Integer& U) {
  Level L;
  L.lo = lo;
  L.hi = hi;
  if (!L.lo)
    if (auto c = left_cutoff(u, U)) L.lo = c;
  if (!L.hi)
    if (auto c = right_cutoff(u, U)) L.hi = c;
  if (lo && L.lo && *L.lo < *lo) L.lo = lo;
  if (hi && L.hi && *L.hi > *hi) L.hi = hi;
  if (L.lo && L.hi && *L.lo > *L.hi) {
    L.empty = true;
    return L;
  }
  const auto R = critical_radius(u);
  if (L.lo) {
    long steps = 0;
    Integer x = *L.lo;
    if (R && x < -*R && u.at(x) > U) {
      Integer b = L.hi ? std::min(Integer(-*R), *L.hi) : Integer(-*R);
      x = u.at(b) > U ? b + 1 : first_at_most(u, x, b, U);
    }
    while (steps < kScanCap && (!L.hi || x <= *L.hi) && u.at(x) > U) {
      ++x;
      ++steps;
    }
    if (L.hi && x > *L.hi) {
      L.empty = true;
      return L;
    }
    L.lo = x;
  }
  if (L.hi) {
    long steps = 0;
    Integer x = *L.hi;
    if (R && x > *R && u.at(x) > U) {
      Integer a = std::max(*R, *L.lo);
      x = u.at(a) > U ? a - 1 : last_at_most(u, a, x, U);
    }
    while (steps < kScanCap && x >= *L.lo && u.at(x) > U) {
      --x;
      ++steps;
    }
    L.hi = x;
  }
  return L;
}

std::optional<Integer> minimum(const Uni& u, const std::optional<Integer>& lo, const std::optional<Integer>& hi) {
  Integer x0 = 0;
  if (lo && x0 < *lo) x0 = *lo;
  if (hi && x0 > *hi) x0 = *hi;
  Integer best = u.at(x0);
  Level L = level_set(u, lo, hi, best);
  if (L.empty || !L.lo || !L.hi || *L.hi - *L.lo > kScanCap) return std::nullopt;
  for (Integer x = *L.lo; x <= *L.hi; ++x) best = std::min(best, u.at(x));
  return best;
}

std::optional<Integer> maximum(const Uni& u, const std::optional<Integer>& lo, const std::optional<Integer>& hi) {
  auto m = minimum({-u.f, u.var}, lo, hi);
  if (!m) return std::nullopt;
  return -*m;
}

std::string provenance_of(const Polynomial& f, const std::string& v) {
  if (f.occurs_exponentially(v) || f.occurs_factorially(v)) return "proved-exponential-log";
  return "proved-even-power";
}

bool separable(const Polynomial& p) {
  for (const auto& [sig, c] : p.terms())
    if (sig.variables().size() > 1) return false;
  return true;
}

void tighten(VarBound& b, const std::optional<Integer>& lo, const std::optional<Integer>& hi, const std::string& prov,
             bool& changed) {
  if (lo && (!b.lo || *lo > *b.lo)) {
    b.lo = lo;
    b.provenance = prov;
    changed = true;
  }
  if (hi && (!b.hi || *hi < *b.hi)) {
    b.hi = hi;
    b.provenance = prov;
    changed = true;
  }
}

void separable_bounds(const NormalizedEquation& eq, BoundSet& bs) {
  std::map<std::string, Uni> parts;
  for (const auto& [sig, c] : eq.lhs.terms()) {
    if (sig.is_constant()) continue;
    const std::string v = *sig.variables().begin();
    auto& u = parts.try_emplace(v, Uni{Polynomial(), v}).first->second;
    Polynomial t;
    t.add_term(sig, c);
    u.f = u.f + t;
  }
  const Integer C = eq.constant();
  for (int round = 0; round < 4; ++round) {
    std::map<std::string, std::optional<Integer>> mins, maxs;
    for (const auto& [v, u] : parts) {
      mins[v] = minimum(u, bs.vars[v].lo, bs.vars[v].hi);
      maxs[v] = maximum(u, bs.vars[v].lo, bs.vars[v].hi);
    }
    bool all_min = std::all_of(mins.begin(), mins.end(), [](auto& kv) { return kv.second.has_value(); });
    bool all_max = std::all_of(maxs.begin(), maxs.end(), [](auto& kv) { return kv.second.has_value(); });
    if (all_min) {
      Integer s = C;
      for (auto& [v, m] : mins) s += *m;
      if (s > 0) {
        bs.infeasible = true;
        Json mj = Json::object();
        for (auto& [v, m] : mins) mj[v] = integer_json(*m);
        bs.argument = {{"rule", "separable-minimum"}, {"constant", integer_json(C)}, {"minima", mj}, {"total", integer_json(s)}, {"round", round}};
        return;
      }
    }
    if (all_max) {
      Integer s = C;
      for (auto& [v, m] : maxs) s += *m;
      if (s < 0) {
        bs.infeasible = true;
        Json mj = Json::object();
        for (auto& [v, m] : maxs) mj[v] = integer_json(*m);
        bs.argument = {{"rule", "separable-maximum"}, {"constant", integer_json(C)}, {"maxima", mj}, {"total", integer_json(s)}, {"round", round}};
        return;
      }
    }
    bool changed = false;
    for (const auto& [v, u] : parts) {
      auto& b = bs.vars[v];
      // f_v(v) = -C - sum of the others
      std::optional<Integer> U = -C, Lo = -C;
      for (const auto& [w, m] : mins)
        if (w != v) U = (U && m) ? std::optional<Integer>(*U - *m) : std::nullopt;
      for (const auto& [w, m] : maxs)
        if (w != v) Lo = (Lo && m) ? std::optional<Integer>(*Lo - *m) : std::nullopt;
      if (U) {
        Level L = level_set(u, b.lo, b.hi, *U);
        if (L.empty) {
          bs.infeasible = true;
          bs.argument = {{"rule", "level-set-empty"}, {"variable", v}, {"upper", integer_json(*U)}};
          return;
        }
        tighten(b, L.lo, L.hi, provenance_of(u.f, v), changed);
      }
      if (Lo) {
        Level L = level_set({-u.f, v}, b.lo, b.hi, -*Lo);
        if (L.empty) {
          bs.infeasible = true;
          bs.argument = {{"rule", "level-set-empty"}, {"variable", v}, {"lower", integer_json(*Lo)}};
          return;
        }
        tighten(b, L.lo, L.hi, provenance_of(u.f, v), changed);
      }
    }
    if (!changed) break;
  }
}

/// Two-variable quadratic: real solvability in one variable bounds the other.
void discriminant_bounds(const NormalizedEquation& eq, BoundSet& bs) {
  auto vs = eq.variables();
  if (vs.size() != 2 || !eq.lhs.is_polynomial_only() || eq.lhs.degree() != 2) return;
  for (const auto& pivot : vs) {
    const std::string other = pivot == *vs.begin() ? *std::next(vs.begin()) : *vs.begin();
    if (eq.lhs.degree_in(pivot) != 2) continue;
    auto co = eq.lhs.coefficients_in(pivot);
    auto A = UniPoly::from_polynomial(co[2], other), B = UniPoly::from_polynomial(co[1], other),
         Cc = UniPoly::from_polynomial(co[0], other);
    if (!A || !B || !Cc || A->degree() != 0) continue;
    UniPoly D = (*B) * (*B) - (*A) * (*Cc).scaled(4);
    if (D.degree() != 2 || D.lead() >= 0) continue;
    // D(w) >= 0 iff -D(w) <= 0
    Uni u{Polynomial(), other};
    for (int i = 0; i <= 2; ++i) {
      Integer ci = -Rational(D.c[static_cast<std::size_t>(i)]).get_num();
      u.f = u.f + Polynomial::variable(other, static_cast<unsigned long>(i)) * ci;
    }
    auto& b = bs.vars[other];
    Level L = level_set(u, b.lo, b.hi, 0);
    if (L.empty) {
      bs.infeasible = true;
      bs.argument = {{"rule", "negative-discriminant"}, {"pivot", pivot}};
      return;
    }
    bool changed = false;
    tighten(b, L.lo, L.hi, "proved-even-power", changed);
  }
}

/// Rational-form terms c/(monomial) are bounded by |c| once the denominators are nonzero integers.
void reciprocal_bounds(const NormalizedEquation& eq, const DomainMap& domains, BoundSet& bs) {
  if (!eq.source) return;
  Rational K = 0;
  Rational slack_lo = 0, slack_hi = 0;
  std::optional<std::pair<std::string, Rational>> linear;
  bool ok = true;
  auto positive = [&](const std::string& v) {
    auto it = domains.find(v);
    return it != domains.end() && it->second.lower() && *it->second.lower() >= 1;
  };
  for (const auto& t : eq.source->terms) {
    if (t.numerator.is_constant() && t.denominator.empty()) {
      K += t.coefficient;
    } else if (t.numerator.is_constant()) {
      bool pos = true;
      for (const auto& [v, k] : t.denominator) pos &= positive(v) || k % 2 == 0;
      Rational c = t.coefficient;
      if (pos) {
        slack_lo += std::min(Rational(0), c);
        slack_hi += std::max(Rational(0), c);
      } else {
        slack_lo -= abs(c);
        slack_hi += abs(c);
      }
    } else if (t.denominator.empty() && t.numerator.powers.size() == 1 && t.numerator.exponentials.empty() &&
               t.numerator.factorials.empty() && t.numerator.powers.begin()->second == 1 && !linear) {
      linear = std::make_pair(t.numerator.powers.begin()->first, t.coefficient);
    } else {
      ok = false;
    }
  }
  if (!ok) return;
  if (!linear) {
    // sum of bounded reciprocals = -K
    if (-K < slack_lo || -K > slack_hi) {
      bs.infeasible = true;
      bs.argument = {{"rule", "reciprocal-magnitude"},
                     {"target", to_string(-K)},
                     {"range", {to_string(slack_lo), to_string(slack_hi)}}};
    }
    return;
  }
  // a*v = -K - (reciprocals)
  auto [v, a] = *linear;
  Rational lo = (-K - slack_hi) / a, hi = (-K - slack_lo) / a;
  if (a < 0) std::swap(lo, hi);
  bool changed = false;
  tighten(bs.vars[v], ceil_div(lo.get_num(), lo.get_den()), floor_div(hi.get_num(), hi.get_den()), "proved-reciprocal",
          changed);
  auto& b = bs.vars[v];
  if (b.lo && b.hi && *b.lo > *b.hi) {
    bs.infeasible = true;
    bs.argument = {{"rule", "reciprocal-magnitude"}, {"variable", v}};
  }
}

}  // namespace

BoundSet infer_bounds(const NormalizedEquation& eq, const DomainMap& domains_in) {
  BoundSet bs;
  DomainMap domains = effective_domains(eq, domains_in);
  for (const auto& v : eq.variables()) {
    VarBound b;
    auto it = domains.find(v);
    if (it != domains.end()) {
      b.lo = it->second.lower();
      b.hi = it->second.upper();
      if (b.lo || b.hi) b.provenance = "domain";
    }
    bs.vars[v] = b;
  }
  for (const auto& v : eq.nonvanishing)
    if (!bs.vars.count(v)) bs.vars[v] = {};
  reciprocal_bounds(eq, domains, bs);
  if (!bs.infeasible && separable(eq.lhs)) separable_bounds(eq, bs);
  if (!bs.infeasible) discriminant_bounds(eq, bs);
  if (bs.infeasible) {
    bs.complete = true;
    return bs;
  }
  bs.complete = !bs.vars.empty() || eq.lhs.is_constant();
  for (const auto& [v, b] : bs.vars) bs.complete = bs.complete && b.bounded();
  return bs;
}

BoundSet user_box(const std::vector<std::string>& vars, const Integer& lo, const Integer& hi, const DomainMap& domains) {
  BoundSet bs;
  for (const auto& v : vars) {
    VarBound b{lo, hi, "user-box"};
    if (auto it = domains.find(v); it != domains.end()) {
      if (auto l = it->second.lower(); l && *l > *b.lo) b.lo = l;
      if (auto h = it->second.upper(); h && *h < *b.hi) b.hi = h;
    }
    bs.vars[v] = b;
  }
  bs.complete = false;
  return bs;
}

// ------------------------------------------------------------------ symmetry

namespace {

bool invariant(const NormalizedEquation& eq, const std::map<std::string, std::string>& perm, const DomainMap& domains) {
  Polynomial q = eq.lhs.rename(perm);
  if (!(q == eq.lhs) && !(q == -eq.lhs)) return false;
  auto dom = [&](const std::string& v) {
    auto it = domains.find(v);
    return it == domains.end() ? Domain::integers() : it->second;
  };
  for (const auto& [a, b] : perm) {
    if (!(dom(a) == dom(b))) return false;
    if (eq.nonvanishing.count(a) != eq.nonvanishing.count(b)) return false;
  }
  return true;
}

}  // namespace

SymmetryInfo detect_symmetry(const NormalizedEquation& eq, const DomainMap& domains) {
  SymmetryInfo info;
  auto vs = eq.variables();
  std::vector<std::string> vars(vs.begin(), vs.end());
  const std::size_t n = vars.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) { return parent[i] == i ? i : parent[i] = find(parent[i]); };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (find(i) != find(j) && invariant(eq, {{vars[i], vars[j]}, {vars[j], vars[i]}}, domains)) parent[find(j)] = find(i);
  std::map<std::size_t, std::vector<std::string>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(vars[i]);
  for (auto& [r, g] : groups)
    if (g.size() >= 2) info.symmetric.push_back(g);
  bool fully = info.symmetric.size() == 1 && info.symmetric[0].size() == n;
  if (!fully && n >= 3 && n <= 6) {
    std::vector<std::string> rest(vars.begin() + 1, vars.end());
    do {
      std::vector<std::string> cyc{vars[0]};
      cyc.insert(cyc.end(), rest.begin(), rest.end());
      std::map<std::string, std::string> perm;
      for (std::size_t i = 0; i < n; ++i) perm[cyc[i]] = cyc[(i + 1) % n];
      if (invariant(eq, perm, domains)) {
        info.cyclic.push_back(cyc);
        break;
      }
    } while (std::next_permutation(rest.begin(), rest.end()));
  }
  return info;
}

bool sign_flip_invariant(const NormalizedEquation& eq) {
  if (!eq.lhs.is_polynomial_only()) return false;
  int parity = -1;
  for (const auto& [sig, c] : eq.lhs.terms()) {
    int p = static_cast<int>(sig.degree() % 2);
    if (parity >= 0 && p != parity) return false;
    parity = p;
  }
  return true;
}

// ------------------------------------------------------------------ enumeration

EnumResult enumerate_box(const Problem& problem, const BoundSet& bounds, const SymmetryInfo& sym_in, const EnumOptions& opts) {
  EnumResult res;
  std::vector<std::string> all = problem.variables();
  for (const auto& v : all) {
    auto it = bounds.vars.find(v);
    if (it == bounds.vars.end() || !it->second.bounded()) throw std::invalid_argument("unbounded variable " + v);
    if (!fits_long(*it->second.lo) || !fits_long(*it->second.hi)) throw std::invalid_argument("bounds too large for " + v);
  }
  auto lo = [&](const std::string& v) { return bounds.vars.at(v).lo->get_si(); };
  auto hi = [&](const std::string& v) { return bounds.vars.at(v).hi->get_si(); };
  auto same_box = [&](const std::vector<std::string>& g) {
    for (const auto& v : g)
      if (lo(v) != lo(g[0]) || hi(v) != hi(g[0])) return false;
    return true;
  };
  SymmetryInfo sym;
  if (opts.use_symmetry) {
    for (const auto& g : sym_in.symmetric)
      if (same_box(g)) sym.symmetric.push_back(g);
    for (const auto& c : sym_in.cyclic)
      if (same_box(c) && sym.symmetric.empty()) sym.cyclic.push_back(c);
  }
  // order: symmetric groups, then the cycle, then the rest
  std::vector<std::string> order;
  std::vector<long> group_prev;  // index of the previous member in the same group, or -1
  std::set<std::string> placed;
  for (const auto& g : sym.symmetric)
    for (std::size_t i = 0; i < g.size(); ++i) {
      group_prev.push_back(i == 0 ? -1 : static_cast<long>(order.size()) - 1);
      order.push_back(g[i]);
      placed.insert(g[i]);
    }
  std::vector<std::size_t> cyc_idx;
  for (const auto& c : sym.cyclic)
    for (const auto& v : c) {
      cyc_idx.push_back(order.size());
      group_prev.push_back(-1);
      order.push_back(v);
      placed.insert(v);
    }
  for (const auto& v : all)
    if (!placed.count(v)) {
      group_prev.push_back(-1);
      order.push_back(v);
    }
  const std::size_t n = order.size();

  std::vector<Evaluator> evs;
  for (const auto& e : problem.equations) evs.emplace_back(e.lhs, order);

  // sign split on a free variable when every equation is odd or even and the box is symmetric
  long split = -1;
  if (opts.sign_split && !problem.equations.empty()) {
    bool ok = std::all_of(problem.equations.begin(), problem.equations.end(), [](const NormalizedEquation& e) { return sign_flip_invariant(e); });
    for (const auto& v : order) ok = ok && lo(v) == -hi(v);
    for (const auto& [v, d] : problem.domains) ok = ok && (d.kind == Domain::Kind::Z || d.kind == Domain::Kind::Interval);
    if (ok)
      for (std::size_t i = 0; i < n; ++i)
        if (!placed.count(order[i])) {
          split = static_cast<long>(i);
          break;
        }
  }

  std::vector<long> vals(n);
  std::vector<std::vector<long>> found;
  bool stop = false;
  auto leaf = [&]() {
    if (!cyc_idx.empty()) {
      std::vector<long> t;
      for (auto i : cyc_idx) t.push_back(vals[i]);
      for (std::size_t r = 1; r < t.size(); ++r) {
        std::vector<long> rot(t.begin() + static_cast<long>(r), t.end());
        rot.insert(rot.end(), t.begin(), t.begin() + static_cast<long>(r));
        if (rot < t) return;
      }
    }
    ++res.evaluations;
    if (res.evaluations > opts.budget) {
      res.budget_exceeded = true;
      stop = true;
      return;
    }
    if (opts.deadline && (res.evaluations & 0xFFFF) == 0 && std::chrono::steady_clock::now() > *opts.deadline) {
      res.budget_exceeded = true;
      stop = true;
      return;
    }
    for (const auto& ev : evs)
      if (!ev.is_zero(vals)) return;
    found.push_back(vals);
  };
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (stop) return;
    if (i == n) {
      leaf();
      return;
    }
    long a = lo(order[i]), b = hi(order[i]);
    if (group_prev[i] >= 0) a = std::max(a, vals[static_cast<std::size_t>(group_prev[i])]);
    if (static_cast<long>(i) == split) a = std::max(a, 0l);
    for (long x = a; x <= b && !stop; ++x) {
      vals[i] = x;
      rec(i + 1);
    }
  };
  rec(0);

  // orbit expansion
  std::set<std::vector<long>> expanded;
  for (const auto& f : found) {
    std::vector<std::vector<long>> cur{f};
    std::size_t base = 0;
    for (const auto& g : sym.symmetric) {
      std::vector<std::vector<long>> next;
      for (const auto& t : cur) {
        std::vector<long> part(t.begin() + static_cast<long>(base), t.begin() + static_cast<long>(base + g.size()));
        std::sort(part.begin(), part.end());
        do {
          auto u = t;
          std::copy(part.begin(), part.end(), u.begin() + static_cast<long>(base));
          next.push_back(u);
        } while (std::next_permutation(part.begin(), part.end()));
      }
      cur = std::move(next);
      base += g.size();
    }
    if (!cyc_idx.empty()) {
      std::vector<std::vector<long>> next;
      for (const auto& t : cur)
        for (std::size_t r = 0; r < cyc_idx.size(); ++r) {
          auto u = t;
          for (std::size_t j = 0; j < cyc_idx.size(); ++j) u[cyc_idx[j]] = t[cyc_idx[(j + r) % cyc_idx.size()]];
          next.push_back(u);
        }
      cur = std::move(next);
    }
    for (const auto& t : cur) {
      expanded.insert(t);
      if (split >= 0) {
        auto m = t;
        for (auto& x : m) x = -x;
        expanded.insert(m);
      }
    }
  }
  for (const auto& t : expanded) {
    Assignment a;
    for (std::size_t i = 0; i < n; ++i) a[order[i]] = t[i];
    if (problem.satisfied_by(a)) res.solutions.push_back(a);
  }
  canonicalize(res.solutions);
  res.complete = bounds.complete && !res.budget_exceeded;
  return res;
}

// ------------------------------------------------------------------ probe

ProbeReport probe(const Problem& problem, long radius, std::uint64_t budget, std::size_t max_hits) {
  ProbeReport rep;
  std::vector<std::string> vars = problem.variables();
  const std::size_t n = vars.size();
  std::vector<long> clo(n), chi(n);
  for (std::size_t i = 0; i < n; ++i) {
    DomainMap dm(problem.domains.begin(), problem.domains.end());
    Domain d = problem.domain_of(vars[i]);
    for (const auto& e : problem.equations)
      if (e.lhs.occurs_exponentially(vars[i]) || e.lhs.occurs_factorially(vars[i])) {
        if (!d.lower() || *d.lower() < 0) d = d.kind == Domain::Kind::Interval ? Domain::interval(std::max(Integer(0), d.lo), d.hi) : Domain::naturals0();
      }
    clo[i] = d.lower() ? std::max(-radius, static_cast<long>(std::max(Integer(-radius), *d.lower()).get_si())) : -radius;
    chi[i] = d.upper() ? std::min(radius, static_cast<long>(std::min(Integer(radius), *d.upper()).get_si())) : radius;
  }
  std::vector<Evaluator> evs;
  for (const auto& e : problem.equations) evs.emplace_back(e.lhs, vars);
  std::vector<long> vals(n);
  bool stop = false;
  auto visit = [&]() {
    if (rep.evaluations >= budget) {
      stop = true;
      return;
    }
    ++rep.evaluations;
    if (evs.empty()) return;
    Integer v0 = evs[0].value(vals);
    if (!rep.min_abs || abs(v0) < *rep.min_abs) rep.min_abs = abs(v0);
    if (v0 != 0) return;
    for (std::size_t k = 1; k < evs.size(); ++k)
      if (!evs[k].is_zero(vals)) return;
    Assignment a;
    for (std::size_t i = 0; i < n; ++i) a[vars[i]] = vals[i];
    if (problem.admits(a) && rep.hits.size() < max_hits) rep.hits.push_back(a);
  };
  std::function<void(std::size_t, long, bool)> shell = [&](std::size_t i, long r, bool reached) {
    if (stop) return;
    if (i == n) {
      if (reached) visit();
      return;
    }
    long a = std::max(clo[i], -r), b = std::min(chi[i], r);
    // innermost coordinate without a shell hit must sit on the shell
    if (i + 1 == n && !reached) {
      for (long x : {-r, r}) {
        if (x < a || x > b || (x == -r && r == 0 && false)) continue;
        vals[i] = x;
        shell(i + 1, r, true);
        if (r == 0) break;
      }
      return;
    }
    // small values first within the shell
    for (long m = 0; m <= r && !stop; ++m)
      for (long x : {m, -m}) {
        if (x < a || x > b) continue;
        vals[i] = x;
        shell(i + 1, r, reached || std::labs(x) == r);
        if (m == 0) break;
      }
  };
  if (n == 0) {
    visit();
    rep.exhausted = true;
    return rep;
  }
  long maxr = 0;
  for (std::size_t i = 0; i < n; ++i) maxr = std::max({maxr, std::labs(clo[i]), std::labs(chi[i])});
  for (long r = 0; r <= maxr && !stop; ++r) shell(0, r, false);
  rep.exhausted = !stop;
  return rep;
}

}  // namespace dioph
