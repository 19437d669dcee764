#include "dioph/poly.hpp"

#include <algorithm>

namespace dioph {

UniPoly::UniPoly(std::vector<Rational> coeffs) : c(std::move(coeffs)) { trim(); }

void UniPoly::trim() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

UniPoly UniPoly::from_integers(const std::vector<Integer>& coeffs) {
  std::vector<Rational> r;
  for (const auto& x : coeffs) r.emplace_back(x);
  return UniPoly(r);
}

std::optional<UniPoly> UniPoly::from_polynomial(const Polynomial& p, const std::string& var) {
  std::vector<Rational> r;
  for (const auto& [sig, coef] : p.terms()) {
    if (!sig.exponentials.empty() || !sig.factorials.empty()) return std::nullopt;
    if (sig.powers.size() > 1) return std::nullopt;
    unsigned long k = 0;
    if (sig.powers.size() == 1) {
      if (sig.powers.begin()->first != var) return std::nullopt;
      k = sig.powers.begin()->second;
    }
    if (r.size() <= k) r.resize(k + 1, Rational(0));
    r[k] += coef;
  }
  return UniPoly(r);
}

Rational UniPoly::evaluate(const Rational& x) const {
  Rational v = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
  std::vector<Rational> r(std::max(c.size(), o.c.size()), Rational(0));
  for (std::size_t i = 0; i < c.size(); ++i) r[i] += c[i];
  for (std::size_t i = 0; i < o.c.size(); ++i) r[i] += o.c[i];
  return UniPoly(r);
}

UniPoly UniPoly::operator-(const UniPoly& o) const { return *this + o.scaled(-1); }

UniPoly UniPoly::operator*(const UniPoly& o) const {
  if (c.empty() || o.c.empty()) return {};
  std::vector<Rational> r(c.size() + o.c.size() - 1, Rational(0));
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < o.c.size(); ++j) r[i + j] += c[i] * o.c[j];
  return UniPoly(r);
}

UniPoly UniPoly::scaled(const Rational& k) const {
  std::vector<Rational> r = c;
  for (auto& x : r) x *= k;
  return UniPoly(r);
}

std::vector<Integer> UniPoly::primitive_integer() const {
  Integer den = 1;
  for (const auto& x : c) den = lcm(den, x.get_den());
  std::vector<Integer> out;
  for (const auto& x : c) out.push_back(Rational(x * den).get_num());
  return out;
}

DivMod divmod(const UniPoly& a, const UniPoly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Rational> q(a.c.size() >= b.c.size() ? a.c.size() - b.c.size() + 1 : 0, Rational(0));
  UniPoly r = a;
  while (!r.is_zero() && r.degree() >= b.degree()) {
    std::size_t shift = static_cast<std::size_t>(r.degree() - b.degree());
    Rational k = r.lead() / b.lead();
    q[shift] = k;
    std::vector<Rational> t(shift + b.c.size(), Rational(0));
    for (std::size_t i = 0; i < b.c.size(); ++i) t[shift + i] = b.c[i] * k;
    r = r - UniPoly(t);
  }
  return {UniPoly(q), r};
}

Bezout extended_euclid(const UniPoly& a, const UniPoly& b) {
  UniPoly r0 = a, r1 = b;
  UniPoly s0({Rational(1)}), s1, t0, t1({Rational(1)});
  while (!r1.is_zero()) {
    DivMod d = divmod(r0, r1);
    UniPoly r2 = d.remainder;
    UniPoly s2 = s0 - d.quotient * s1;
    UniPoly t2 = t0 - d.quotient * t1;
    r0 = r1;
    r1 = r2;
    s0 = s1;
    s1 = s2;
    t0 = t1;
    t1 = t2;
  }
  if (!r0.is_zero()) {
    Rational k = 1 / r0.lead();
    r0 = r0.scaled(k);
    s0 = s0.scaled(k);
    t0 = t0.scaled(k);
  }
  return {r0, s0, t0};
}

std::vector<Integer> integer_roots(const std::vector<Integer>& coeffs_in) {
  std::vector<Integer> coeffs = coeffs_in;
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
  std::vector<Integer> roots;
  if (coeffs.size() <= 1) return roots;
  std::size_t low = 0;
  while (coeffs[low] == 0) ++low;
  if (low > 0) roots.push_back(0);
  std::vector<Integer> rest(coeffs.begin() + static_cast<long>(low), coeffs.end());
  if (rest.size() > 1) {
    auto eval = [&](const Integer& x) {
      Integer v = 0;
      for (auto it = rest.rbegin(); it != rest.rend(); ++it) v = v * x + *it;
      return v;
    };
    // Cauchy bound; scan when small, otherwise test divisors of the constant term
    Integer bound = 0;
    for (std::size_t i = 0; i + 1 < rest.size(); ++i) bound = std::max(bound, Integer(abs(rest[i])));
    bound = bound / abs(rest.back()) + 1;
    if (bound <= 200000) {
      for (Integer x = -bound; x <= bound; ++x)
        if (x != 0 && eval(x) == 0) roots.push_back(x);
    } else {
      for (const auto& d : signed_divisors(rest[0]))
        if (eval(d) == 0) roots.push_back(d);
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

}  // namespace dioph
