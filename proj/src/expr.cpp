#include "dioph/expr.hpp"

#include <algorithm>

namespace dioph {

unsigned long Signature::degree() const {
  unsigned long d = 0;
  for (const auto& [v, k] : powers) d += k;
  return d;
}

std::set<std::string> Signature::variables() const {
  std::set<std::string> out;
  for (const auto& [v, k] : powers) out.insert(v);
  for (const auto& [v, b] : exponentials) out.insert(v);
  out.insert(factorials.begin(), factorials.end());
  return out;
}

bool Signature::mentions(const std::string& v) const {
  return powers.count(v) || exponentials.count(v) || factorials.count(v);
}

Signature Signature::operator*(const Signature& o) const {
  Signature r = *this;
  for (const auto& [v, k] : o.powers) r.powers[v] += k;
  for (const auto& [v, b] : o.exponentials) {
    auto it = r.exponentials.find(v);
    if (it == r.exponentials.end())
      r.exponentials[v] = b;
    else
      it->second *= b;
  }
  for (const auto& v : o.factorials) {
    if (!r.factorials.insert(v).second) throw UnsupportedTerm("repeated factorial " + v + "!");
  }
  return r;
}

int compare_signatures(const Signature& a, const Signature& b) {
  if (a.is_constant() != b.is_constant()) return a.is_constant() ? 1 : -1;
  auto da = a.degree(), db = b.degree();
  if (da != db) return da > db ? -1 : 1;
  {
    auto ia = a.powers.begin(), ib = b.powers.begin();
    for (; ia != a.powers.end() && ib != b.powers.end(); ++ia, ++ib) {
      if (ia->first != ib->first) return ia->first < ib->first ? -1 : 1;
      if (ia->second != ib->second) return ia->second > ib->second ? -1 : 1;
    }
    if (ia != a.powers.end()) return -1;
    if (ib != b.powers.end()) return 1;
  }
  {
    auto ia = a.exponentials.begin(), ib = b.exponentials.begin();
    for (; ia != a.exponentials.end() && ib != b.exponentials.end(); ++ia, ++ib) {
      if (ia->first != ib->first) return ia->first < ib->first ? -1 : 1;
      int c = cmp(ia->second, ib->second);
      if (c != 0) return c < 0 ? -1 : 1;
    }
    if (ia != a.exponentials.end()) return 1;
    if (ib != b.exponentials.end()) return -1;
  }
  {
    auto ia = a.factorials.begin(), ib = b.factorials.begin();
    for (; ia != a.factorials.end() && ib != b.factorials.end(); ++ia, ++ib) {
      if (*ia != *ib) return *ia < *ib ? -1 : 1;
    }
    if (ia != a.factorials.end()) return 1;
    if (ib != b.factorials.end()) return -1;
  }
  return 0;
}

// ---------------------------------------------------------------- Polynomial

Polynomial Polynomial::constant(const Integer& c) {
  Polynomial p;
  p.add_term(Signature{}, c);
  return p;
}

Polynomial Polynomial::variable(const std::string& name, unsigned long power) {
  Polynomial p;
  Signature s;
  if (power > 0) s.powers[name] = power;
  p.add_term(s, 1);
  return p;
}

Polynomial Polynomial::exponential(const Integer& base, const std::string& name) {
  if (base == 0 || base == -1) throw UnsupportedTerm("exponential base " + base.get_str());
  if (base == 1) return constant(1);
  Polynomial p;
  Signature s;
  s.exponentials[name] = base;
  p.add_term(s, 1);
  return p;
}

Polynomial Polynomial::factorial_of(const std::string& name) {
  Polynomial p;
  Signature s;
  s.factorials.insert(name);
  p.add_term(s, 1);
  return p;
}

void Polynomial::add_term(const Signature& sig, const Integer& coefficient) {
  if (coefficient == 0) return;
  auto it = terms_.find(sig);
  if (it == terms_.end()) {
    terms_.emplace(sig, coefficient);
    return;
  }
  it->second += coefficient;
  if (it->second == 0) terms_.erase(it);
}

Integer Polynomial::constant_term() const { return coefficient(Signature{}); }

Integer Polynomial::coefficient(const Signature& sig) const {
  auto it = terms_.find(sig);
  return it == terms_.end() ? Integer(0) : it->second;
}

std::vector<Monomial> Polynomial::monomials() const {
  std::vector<Monomial> out;
  for (const auto& [s, c] : terms_)
    if (!s.is_constant()) out.push_back({c, s});
  return out;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_constant());
}

std::set<std::string> Polynomial::variables() const {
  std::set<std::string> out;
  for (const auto& [s, c] : terms_) {
    auto v = s.variables();
    out.insert(v.begin(), v.end());
  }
  return out;
}

unsigned long Polynomial::degree() const {
  unsigned long d = 0;
  for (const auto& [s, c] : terms_) d = std::max(d, s.degree());
  return d;
}

unsigned long Polynomial::degree_in(const std::string& var) const {
  unsigned long d = 0;
  for (const auto& [s, c] : terms_) {
    auto it = s.powers.find(var);
    if (it != s.powers.end()) d = std::max(d, it->second);
  }
  return d;
}

bool Polynomial::is_polynomial_only() const {
  for (const auto& [s, c] : terms_)
    if (!s.exponentials.empty() || !s.factorials.empty()) return false;
  return true;
}

bool Polynomial::occurs_exponentially(const std::string& var) const {
  for (const auto& [s, c] : terms_)
    if (s.exponentials.count(var)) return true;
  return false;
}

bool Polynomial::occurs_factorially(const std::string& var) const {
  for (const auto& [s, c] : terms_)
    if (s.factorials.count(var)) return true;
  return false;
}

bool Polynomial::occurs_polynomially(const std::string& var) const {
  for (const auto& [s, c] : terms_)
    if (s.powers.count(var)) return true;
  return false;
}

Integer Polynomial::content() const {
  Integer g = 0;
  for (const auto& [s, c] : terms_) g = gcd(g, c);
  return g;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  for (const auto& [s, c] : o.terms_) r.add_term(s, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial r = *this;
  for (const auto& [s, c] : o.terms_) r.add_term(s, -c);
  return r;
}

Polynomial Polynomial::operator-() const { return *this * Integer(-1); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r;
  for (const auto& [s1, c1] : terms_)
    for (const auto& [s2, c2] : o.terms_) r.add_term(s1 * s2, c1 * c2);
  return r;
}

Polynomial Polynomial::operator*(const Integer& k) const {
  Polynomial r;
  if (k == 0) return r;
  for (const auto& [s, c] : terms_) r.terms_.emplace(s, c * k);
  return r;
}

Polynomial Polynomial::pow(unsigned long e) const {
  Polynomial r = constant(1), b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

Polynomial Polynomial::divided_by(const Integer& k) const {
  Polynomial r;
  for (const auto& [s, c] : terms_) {
    if (c % k != 0) throw std::invalid_argument("inexact polynomial division");
    r.terms_.emplace(s, c / k);
  }
  return r;
}

Polynomial Polynomial::substitute(const std::string& var, const Polynomial& replacement) const {
  if (replacement.is_constant()) return substitute_value(var, replacement.constant_term());
  Polynomial out;
  std::map<unsigned long, Polynomial> cache;
  for (const auto& [s, c] : terms_) {
    if (s.exponentials.count(var) || s.factorials.count(var))
      throw UnsupportedTerm("cannot substitute a polynomial into an exponent or factorial of " + var);
    auto it = s.powers.find(var);
    if (it == s.powers.end()) {
      out.add_term(s, c);
      continue;
    }
    unsigned long k = it->second;
    Signature rest = s;
    rest.powers.erase(var);
    auto cit = cache.find(k);
    if (cit == cache.end()) cit = cache.emplace(k, replacement.pow(k)).first;
    Polynomial part;
    part.add_term(rest, c);
    out = out + part * cit->second;
  }
  return out;
}

Polynomial Polynomial::substitute_value(const std::string& var, const Integer& value) const {
  Polynomial out;
  for (const auto& [s, c] : terms_) {
    if (!s.mentions(var)) {
      out.add_term(s, c);
      continue;
    }
    Integer coef = c;
    Signature rest = s;
    if (auto it = rest.powers.find(var); it != rest.powers.end()) {
      coef *= ipow(value, it->second);
      rest.powers.erase(it);
    }
    if (auto it = rest.exponentials.find(var); it != rest.exponentials.end()) {
      if (value < 0) throw DomainViolation("negative exponent for " + var);
      coef *= ipow(it->second, to_long(value));
      rest.exponentials.erase(it);
    }
    if (rest.factorials.count(var)) {
      if (value < 0) throw DomainViolation("negative factorial argument for " + var);
      coef *= factorial(to_long(value));
      rest.factorials.erase(var);
    }
    out.add_term(rest, coef);
  }
  return out;
}

Polynomial Polynomial::rename(const std::map<std::string, std::string>& mapping) const {
  auto name = [&](const std::string& v) {
    auto it = mapping.find(v);
    return it == mapping.end() ? v : it->second;
  };
  Polynomial out;
  for (const auto& [s, c] : terms_) {
    Signature r;
    for (const auto& [v, k] : s.powers) r.powers[name(v)] += k;
    for (const auto& [v, b] : s.exponentials) r.exponentials[name(v)] = b;
    for (const auto& v : s.factorials) r.factorials.insert(name(v));
    out.add_term(r, c);
  }
  return out;
}

std::vector<Polynomial> Polynomial::coefficients_in(const std::string& var) const {
  std::vector<Polynomial> out(degree_in(var) + 1);
  for (const auto& [s, c] : terms_) {
    if (s.exponentials.count(var) || s.factorials.count(var))
      throw UnsupportedTerm(var + " occurs non-polynomially");
    unsigned long k = 0;
    Signature rest = s;
    if (auto it = rest.powers.find(var); it != rest.powers.end()) {
      k = it->second;
      rest.powers.erase(it);
    }
    out[k].add_term(rest, c);
  }
  return out;
}

namespace {

const Integer& lookup(const Assignment& a, const std::string& v) {
  auto it = a.find(v);
  if (it == a.end()) throw std::invalid_argument("assignment misses variable " + v);
  return it->second;
}

Integer eval_signature(const Signature& s, const Assignment& a) {
  Integer r = 1;
  for (const auto& [v, k] : s.powers) r *= ipow(lookup(a, v), k);
  for (const auto& [v, b] : s.exponentials) {
    const Integer& e = lookup(a, v);
    if (e < 0) throw DomainViolation("negative exponent for " + v);
    if (!e.fits_ulong_p() || e > 100000000) throw DomainViolation("exponent too large for " + v);
    r *= ipow(b, e.get_ui());
  }
  for (const auto& v : s.factorials) {
    const Integer& e = lookup(a, v);
    if (e < 0) throw DomainViolation("negative factorial argument for " + v);
    if (e > 1000000) throw DomainViolation("factorial argument too large for " + v);
    r *= factorial(e.get_ui());
  }
  return r;
}

}  // namespace

Integer Polynomial::evaluate(const Assignment& a) const {
  Integer total = 0;
  for (const auto& [s, c] : terms_) total += c * eval_signature(s, a);
  return total;
}

Rational RationalForm::evaluate(const Assignment& a) const {
  Rational total = 0;
  for (const auto& t : terms) {
    Integer den = 1;
    for (const auto& [v, k] : t.denominator) den *= ipow(lookup(a, v), k);
    if (den == 0) throw DomainViolation("vanishing denominator");
    Rational term(eval_signature(t.numerator, a), den);
    term.canonicalize();
    total += t.coefficient * term;
  }
  return total;
}

// ---------------------------------------------------------------- Domain / Problem

bool Domain::contains(const Integer& v) const {
  switch (kind) {
    case Kind::Z: return true;
    case Kind::N: return v >= 1;
    case Kind::N0: return v >= 0;
    case Kind::Interval: return v >= lo && v <= hi;
  }
  return false;
}

std::optional<Integer> Domain::lower() const {
  switch (kind) {
    case Kind::Z: return std::nullopt;
    case Kind::N: return Integer(1);
    case Kind::N0: return Integer(0);
    case Kind::Interval: return lo;
  }
  return std::nullopt;
}

std::optional<Integer> Domain::upper() const {
  if (kind == Kind::Interval) return hi;
  return std::nullopt;
}

bool Domain::nonnegative() const {
  auto l = lower();
  return l && *l >= 0;
}

std::string Domain::name() const {
  switch (kind) {
    case Kind::Z: return "Z";
    case Kind::N: return "N";
    case Kind::N0: return "N0";
    case Kind::Interval: return "[" + lo.get_str() + "," + hi.get_str() + "]";
  }
  return "Z";
}

bool Domain::operator==(const Domain& o) const {
  if (kind != o.kind) return false;
  return kind != Kind::Interval || (lo == o.lo && hi == o.hi);
}

std::vector<std::string> Problem::variables() const {
  std::set<std::string> all;
  for (const auto& e : equations) {
    auto v = e.variables();
    all.insert(v.begin(), v.end());
    all.insert(e.nonvanishing.begin(), e.nonvanishing.end());
  }
  for (const auto& [v, d] : domains) all.insert(v);
  for (const auto& c : constraints) all.insert(c.begin(), c.end());
  return {all.begin(), all.end()};
}

std::set<std::string> Problem::nonvanishing() const {
  std::set<std::string> out;
  for (const auto& e : equations) out.insert(e.nonvanishing.begin(), e.nonvanishing.end());
  for (const auto& c : constraints) out.insert(c.begin(), c.end());
  return out;
}

Domain Problem::domain_of(const std::string& v) const {
  auto it = domains.find(v);
  return it == domains.end() ? Domain::integers() : it->second;
}

bool Problem::admits(const Assignment& a) const {
  for (const auto& v : variables()) {
    auto it = a.find(v);
    if (it == a.end()) return false;
    if (!domain_of(v).contains(it->second)) return false;
  }
  for (const auto& v : nonvanishing())
    if (a.at(v) == 0) return false;
  return true;
}

bool Problem::satisfied_by(const Assignment& a) const {
  if (!admits(a)) return false;
  for (const auto& e : equations)
    if (e.lhs.evaluate(a) != 0) return false;
  return true;
}

// ---------------------------------------------------------------- Raw trees

std::shared_ptr<RawExpr> RawExpr::integer(const Integer& v) {
  auto e = std::make_shared<RawExpr>();
  e->kind = Kind::Int;
  e->value = v;
  return e;
}

std::shared_ptr<RawExpr> RawExpr::var(const std::string& n) {
  auto e = std::make_shared<RawExpr>();
  e->kind = Kind::Var;
  e->name = n;
  return e;
}

std::shared_ptr<RawExpr> RawExpr::node(Kind k, std::vector<std::shared_ptr<RawExpr>> a) {
  auto e = std::make_shared<RawExpr>();
  e->kind = k;
  e->args = std::move(a);
  return e;
}

std::optional<Rational> evaluate_raw(const RawExpr& e, const Assignment& a) {
  using K = RawExpr::Kind;
  switch (e.kind) {
    case K::Int: return Rational(e.value);
    case K::Var: return Rational(lookup(a, e.name));
    case K::Factorial: {
      const Integer& v = lookup(a, e.name);
      if (v < 0) throw DomainViolation("negative factorial argument");
      return Rational(factorial(v.get_ui()));
    }
    case K::Exponential: {
      const Integer& v = lookup(a, e.name);
      if (v < 0) throw DomainViolation("negative exponent");
      return Rational(ipow(e.value, v.get_ui()));
    }
    case K::Power: {
      auto b = evaluate_raw(*e.args[0], a);
      if (!b) return std::nullopt;
      Rational r = 1;
      for (Integer i = 0; i < e.value; ++i) r *= *b;
      return r;
    }
    case K::Neg: {
      auto b = evaluate_raw(*e.args[0], a);
      if (!b) return std::nullopt;
      return Rational(-*b);
    }
    default: break;
  }
  auto l = evaluate_raw(*e.args[0], a);
  auto r = evaluate_raw(*e.args[1], a);
  if (!l || !r) return std::nullopt;
  switch (e.kind) {
    case K::Add: return Rational(*l + *r);
    case K::Sub: return Rational(*l - *r);
    case K::Mul: return Rational(*l * *r);
    case K::Div:
      if (*r == 0) return std::nullopt;
      return Rational(*l / *r);
    default: break;
  }
  return std::nullopt;
}

namespace {

using Den = std::map<std::string, unsigned long>;

struct RatKey {
  Signature num;
  Den den;
};

struct RatKeyOrder {
  bool operator()(const RatKey& a, const RatKey& b) const {
    int c = compare_signatures(a.num, b.num);
    if (c != 0) return c < 0;
    return a.den < b.den;
  }
};

using RatPoly = std::map<RatKey, Rational, RatKeyOrder>;

void add_to(RatPoly& p, const RatKey& k, const Rational& c) {
  if (c == 0) return;
  auto it = p.find(k);
  if (it == p.end()) {
    p.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second == 0) p.erase(it);
}

RatKey multiply_keys(const RatKey& a, const RatKey& b) {
  RatKey r{a.num * b.num, a.den};
  for (const auto& [v, k] : b.den) r.den[v] += k;
  return r;
}

RatPoly mul(const RatPoly& a, const RatPoly& b) {
  RatPoly r;
  for (const auto& [k1, c1] : a)
    for (const auto& [k2, c2] : b) add_to(r, multiply_keys(k1, k2), c1 * c2);
  return r;
}

RatPoly constant_poly(const Rational& c) {
  RatPoly p;
  add_to(p, RatKey{}, c);
  return p;
}

struct Converter {
  std::set<std::string> denominators;

  RatPoly run(const RawExpr& e) {
    using K = RawExpr::Kind;
    switch (e.kind) {
      case K::Int: return constant_poly(Rational(e.value));
      case K::Var: {
        RatKey k;
        k.num.powers[e.name] = 1;
        RatPoly p;
        p.emplace(k, Rational(1));
        return p;
      }
      case K::Factorial: {
        RatKey k;
        k.num.factorials.insert(e.name);
        RatPoly p;
        p.emplace(k, Rational(1));
        return p;
      }
      case K::Exponential: {
        const Integer& b = e.value;
        if (b == 0) throw UnsupportedTerm("exponential with base 0");
        if (b == -1) throw UnsupportedTerm("exponential with base -1");
        if (b == 1) return constant_poly(1);
        RatKey k;
        k.num.exponentials[e.name] = b;
        RatPoly p;
        p.emplace(k, Rational(1));
        return p;
      }
      case K::Power: {
        RatPoly base = run(*e.args[0]);
        RatPoly r = constant_poly(1);
        if (!e.value.fits_ulong_p()) throw UnsupportedTerm("exponent too large");
        for (unsigned long i = 0; i < e.value.get_ui(); ++i) r = mul(r, base);
        return r;
      }
      case K::Neg: {
        RatPoly r = run(*e.args[0]);
        for (auto& [k, c] : r) c = -c;
        return r;
      }
      case K::Add:
      case K::Sub: {
        RatPoly l = run(*e.args[0]);
        RatPoly r = run(*e.args[1]);
        for (const auto& [k, c] : r) add_to(l, k, e.kind == K::Add ? c : Rational(-c));
        return l;
      }
      case K::Mul: return mul(run(*e.args[0]), run(*e.args[1]));
      case K::Div: {
        RatPoly num = run(*e.args[0]);
        RatPoly den = run(*e.args[1]);
        if (den.empty()) throw ZeroDenominatorConstant("division by zero");
        if (den.size() > 1) throw NestedFraction("denominator contains a sum");
        const auto& [dk, dc] = *den.begin();
        if (!dk.num.exponentials.empty() || !dk.num.factorials.empty())
          throw UnsupportedTerm("exponential or factorial in a denominator");
        RatKey inv;
        inv.num.powers = dk.den;
        inv.den = dk.num.powers;
        for (const auto& [v, k] : dk.num.powers) denominators.insert(v);
        RatPoly invp;
        invp.emplace(inv, Rational(1) / dc);
        return mul(num, invp);
      }
    }
    return {};
  }
};

struct Cleared {
  NormalizedEquation eq;
  std::set<std::string> nonvanishing;
};

Cleared clear(const RatPoly& p, const std::set<std::string>& dens) {
  Integer lden = 1;
  Den lmono;
  bool variable_den = false;
  for (const auto& [k, c] : p) {
    lden = lcm(lden, c.get_den());
    for (const auto& [v, e] : k.den) {
      lmono[v] = std::max(lmono[v], e);
      variable_den = true;
    }
  }
  Polynomial out;
  for (const auto& [k, c] : p) {
    Signature s = k.num;
    for (const auto& [v, e] : lmono) {
      unsigned long have = 0;
      if (auto it = k.den.find(v); it != k.den.end()) have = it->second;
      if (e > have) s.powers[v] += e - have;
    }
    Rational scaled = c * lden;
    out.add_term(s, scaled.get_num());
  }
  Cleared r;
  r.eq.lhs = out;
  r.nonvanishing = dens;
  r.eq.nonvanishing = dens;
  if (variable_den) {
    RationalForm f;
    for (const auto& [k, c] : p) f.terms.push_back({c, k.num, k.den});
    r.eq.source = f;
  }
  return r;
}

}  // namespace

ClearedEquation clear_denominators(const RawEquation& raw) {
  Converter conv;
  RatPoly l = conv.run(*raw.lhs);
  RatPoly r = conv.run(*raw.rhs);
  for (const auto& [k, c] : r) add_to(l, k, -c);
  Cleared c = clear(l, conv.denominators);
  return {c.eq, c.nonvanishing};
}

NormalizedEquation normalize(const RawEquation& raw) { return clear_denominators(raw).equation; }

std::pair<Polynomial, Integer> to_fraction(const RawExpr& e) {
  Converter conv;
  RatPoly p = conv.run(e);
  Integer den = 1;
  for (const auto& [k, c] : p) {
    if (!k.den.empty()) throw UnsupportedTerm("variable denominator");
    den = lcm(den, c.get_den());
  }
  Polynomial num;
  for (const auto& [k, c] : p) num.add_term(k.num, Rational(c * den).get_num());
  return {num, den};
}

NormalizedEquation clear_rational_form(const RationalForm& form) {
  RatPoly p;
  std::set<std::string> dens;
  for (const auto& t : form.terms) {
    add_to(p, RatKey{t.numerator, t.denominator}, t.coefficient);
    for (const auto& [v, k] : t.denominator) dens.insert(v);
  }
  return clear(p, dens).eq;
}

// ---------------------------------------------------------------- completing squares

std::optional<CenteredForm> complete_square_reduce(const NormalizedEquation& eq) {
  if (!eq.lhs.is_polynomial_only()) return std::nullopt;
  std::map<std::string, Integer> a, b;
  for (const auto& m : eq.lhs.monomials()) {
    if (m.sig.powers.size() != 1) return std::nullopt;
    const auto& [v, k] = *m.sig.powers.begin();
    if (k == 2)
      a[v] = m.coefficient;
    else if (k == 1)
      b[v] = m.coefficient;
    else
      return std::nullopt;
  }
  for (const auto& [v, c] : b)
    if (!a.count(v)) return std::nullopt;
  if (a.empty()) return std::nullopt;

  std::map<std::string, Integer> alpha;
  Integer scale = 1;
  for (const auto& [v, av] : a) {
    Integer bv = b.count(v) ? b[v] : Integer(0);
    Integer two_a = abs(Integer(2 * av));
    Integer al = two_a / gcd(two_a, bv);
    alpha[v] = al;
    Integer sq = al * al;
    Integer need = sq / gcd(sq, abs(av));
    scale = lcm(scale, need);
  }
  CenteredForm f;
  f.scale = scale;
  Integer sum_cb2 = 0;
  for (const auto& [v, av] : a) {
    Integer bv = b.count(v) ? b[v] : Integer(0);
    Integer al = alpha[v];
    Integer c = scale * av / (al * al);
    Integer beta = bv * al / (2 * av);
    f.terms.push_back({c, v, al, beta});
    sum_cb2 += c * beta * beta;
  }
  f.N = sum_cb2 - scale * eq.constant();
  return f;
}

Polynomial expand(const CenteredForm& f) {
  Polynomial p;
  for (const auto& t : f.terms) {
    Polynomial lin = Polynomial::variable(t.var) * t.alpha + Polynomial::constant(t.beta);
    p = p + lin.pow(2) * t.c;
  }
  return p - Polynomial::constant(f.N);
}

Integer evaluate(const NormalizedEquation& eq, const Assignment& a) { return eq.lhs.evaluate(a); }

Assignment AffineMap::apply(const Assignment& old) const {
  Assignment out = old;
  for (const auto& [v, ab] : maps) out[v] = ab.first * lookup(old, v) + ab.second;
  return out;
}

std::optional<Assignment> AffineMap::invert(const Assignment& image) const {
  Assignment out = image;
  for (const auto& [v, ab] : maps) {
    Integer num = lookup(image, v) - ab.second;
    if (num % ab.first != 0) return std::nullopt;
    out[v] = num / ab.first;
  }
  return out;
}

// ---------------------------------------------------------------- rendering

std::string render_monomial(const Integer& coefficient, const Signature& sig) {
  std::vector<std::string> factors;
  for (const auto& [v, k] : sig.powers) factors.push_back(k == 1 ? v : v + "^" + std::to_string(k));
  for (const auto& [v, b] : sig.exponentials)
    factors.push_back((b < 0 ? "(" + b.get_str() + ")" : b.get_str()) + "^" + v);
  for (const auto& v : sig.factorials) factors.push_back(v + "!");
  if (factors.empty()) return coefficient.get_str();
  std::string body;
  for (std::size_t i = 0; i < factors.size(); ++i) body += (i ? "*" : "") + factors[i];
  if (coefficient == 1) return body;
  if (coefficient == -1) return "-" + body;
  return coefficient.get_str() + "*" + body;
}

std::string render_polynomial(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [s, c] : p.terms()) {
    if (first) {
      out = render_monomial(c, s);
      first = false;
      continue;
    }
    out += c < 0 ? " - " : " + ";
    out += render_monomial(abs(c), s);
  }
  return out;
}

}  // namespace dioph
