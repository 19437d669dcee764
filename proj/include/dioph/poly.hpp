#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dioph/expr.hpp"

namespace dioph {

/// Dense univariate polynomial over Q, coefficients from the constant term up.
struct UniPoly {
  std::vector<Rational> c;

  UniPoly() = default;
  explicit UniPoly(std::vector<Rational> coeffs);
  static UniPoly from_integers(const std::vector<Integer>& coeffs);
  /// nullopt unless p is polynomial in var alone.
  static std::optional<UniPoly> from_polynomial(const Polynomial& p, const std::string& var);

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  const Rational& lead() const { return c.back(); }
  Rational evaluate(const Rational& x) const;

  UniPoly operator+(const UniPoly& o) const;
  UniPoly operator-(const UniPoly& o) const;
  UniPoly operator*(const UniPoly& o) const;
  UniPoly scaled(const Rational& k) const;
  bool operator==(const UniPoly& o) const = default;

  /// Integer coefficients after clearing denominators (positive scale).
  std::vector<Integer> primitive_integer() const;

 private:
  void trim();
};

struct DivMod {
  UniPoly quotient, remainder;
};
DivMod divmod(const UniPoly& a, const UniPoly& b);

/// s*a + t*b = g with g monic (or zero).
struct Bezout {
  UniPoly g, s, t;
};
Bezout extended_euclid(const UniPoly& a, const UniPoly& b);

/// Integer roots of an integer polynomial (coefficients from the constant term up), ascending.
/// The zero polynomial has no listed roots.
std::vector<Integer> integer_roots(const std::vector<Integer>& coeffs);

}  // namespace dioph
