#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dioph {

using Integer = mpz_class;
using Rational = mpq_class;

/// Variable name to value.
using Assignment = std::map<std::string, Integer>;

Integer ipow(const Integer& base, unsigned long exp);
Integer factorial(unsigned long n);

/// Floor of the square root; n must be non-negative.
Integer isqrt(const Integer& n);
bool is_square(const Integer& n, Integer* root = nullptr);

/// Floor of the k-th root of a non-negative n.
Integer iroot_floor(const Integer& n, unsigned long k);

/// Exact k-th root when one exists (negative n allowed for odd k).
std::optional<Integer> exact_root(const Integer& n, unsigned long k);

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);
Integer floor_div(const Integer& a, const Integer& b);
Integer ceil_div(const Integer& a, const Integer& b);
Integer mod_floor(const Integer& a, const Integer& m);

bool fits_long(const Integer& v);
long to_long(const Integer& v);
std::string to_string(const Integer& v);
std::string to_string(const Rational& v);

/// Prime factorization of |n| (n != 0), primes ascending.
/// Trial division up to 10^6, then Miller-Rabin and Pollard rho.
std::vector<std::pair<Integer, unsigned>> factorize(const Integer& n);

/// Positive divisors of |n| in increasing order; n != 0.
std::vector<Integer> positive_divisors(const Integer& n);

/// Signed divisors of n: +d and -d for every positive divisor.
std::vector<Integer> signed_divisors(const Integer& n);

/// Largest w with w! <= n (n >= 1).
unsigned long factorial_floor_inverse(const Integer& n);

/// Largest e with b^e <= n, for b >= 2 and n >= 1.
unsigned long log_floor(const Integer& n, const Integer& b);

}  // namespace dioph
