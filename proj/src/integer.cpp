#include "dioph/integer.hpp"

#include <algorithm>
#include <climits>

namespace dioph {

Integer ipow(const Integer& base, unsigned long exp) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

Integer factorial(unsigned long n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

Integer isqrt(const Integer& n) {
  if (n < 0) throw std::domain_error("isqrt of negative value");
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

bool is_square(const Integer& n, Integer* root) {
  if (n < 0) return false;
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return false;
  if (root) *root = isqrt(n);
  return true;
}

Integer iroot_floor(const Integer& n, unsigned long k) {
  if (n < 0) throw std::domain_error("iroot of negative value");
  Integer r;
  mpz_root(r.get_mpz_t(), n.get_mpz_t(), k);
  return r;
}

std::optional<Integer> exact_root(const Integer& n, unsigned long k) {
  if (k == 0) return std::nullopt;
  if (k == 1) return n;
  if (n < 0) {
    if (k % 2 == 0) return std::nullopt;
    auto r = exact_root(-n, k);
    if (!r) return std::nullopt;
    return Integer(-*r);
  }
  Integer r;
  if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), k) == 0) return std::nullopt;
  return r;
}

Integer gcd(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer ceil_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

bool fits_long(const Integer& v) { return v.fits_slong_p(); }

long to_long(const Integer& v) {
  if (!v.fits_slong_p()) throw std::overflow_error("integer does not fit in a machine word");
  return v.get_si();
}

std::string to_string(const Integer& v) { return v.get_str(); }

std::string to_string(const Rational& v) { return v.get_str(); }

namespace {

Integer pollard_brent(const Integer& n, unsigned long seed) {
  if (n % 2 == 0) return 2;
  Integer y = seed % n, c = (seed * 7 + 1) % n, m = 128, g = 1, r = 1, q = 1, x, ys;
  auto f = [&](const Integer& v) {
    Integer t = v * v + c;
    return Integer(t % n);
  };
  while (g == 1) {
    x = y;
    for (Integer i = 0; i < r; ++i) y = f(y);
    Integer k = 0;
    while (k < r && g == 1) {
      ys = y;
      Integer lim = std::min(m, Integer(r - k));
      for (Integer i = 0; i < lim; ++i) {
        y = f(y);
        Integer d = x - y;
        if (d < 0) d = -d;
        q = (q * d) % n;
      }
      g = gcd(q, n);
      k += m;
    }
    r *= 2;
  }
  if (g == n) {
    do {
      ys = f(ys);
      Integer d = x - ys;
      if (d < 0) d = -d;
      g = gcd(d, n);
    } while (g == 1);
  }
  return g;
}

void split(const Integer& n, std::map<Integer, unsigned>& out) {
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 30) != 0) {
    out[n] += 1;
    return;
  }
  for (unsigned long seed = 2;; ++seed) {
    Integer d = pollard_brent(n, seed);
    if (d != n && d != 1) {
      split(d, out);
      split(Integer(n / d), out);
      return;
    }
  }
}

}  // namespace

std::vector<std::pair<Integer, unsigned>> factorize(const Integer& n) {
  if (n == 0) throw std::invalid_argument("factorize(0)");
  Integer m = abs(n);
  std::map<Integer, unsigned> found;
  for (unsigned long p = 2; p <= 1000000; p += (p == 2 ? 1 : 2)) {
    Integer pp = p;
    if (pp * pp > m) break;
    while (m % p == 0) {
      found[pp] += 1;
      m /= p;
    }
  }
  if (m > 1) split(m, found);
  return {found.begin(), found.end()};
}

std::vector<Integer> positive_divisors(const Integer& n) {
  std::vector<Integer> divs{1};
  for (const auto& [p, e] : factorize(n)) {
    std::size_t count = divs.size();
    Integer pk = 1;
    for (unsigned i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < count; ++j) divs.push_back(divs[j] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

std::vector<Integer> signed_divisors(const Integer& n) {
  std::vector<Integer> out;
  for (const auto& d : positive_divisors(n)) {
    out.push_back(d);
    out.push_back(-d);
  }
  return out;
}

unsigned long factorial_floor_inverse(const Integer& n) {
  unsigned long w = 0;
  Integer f = 1;
  while (true) {
    Integer next = f * (w + 1);
    if (next > n) return w;
    f = next;
    ++w;
  }
}

unsigned long log_floor(const Integer& n, const Integer& b) {
  unsigned long e = 0;
  Integer p = b;
  while (p <= n) {
    p *= b;
    ++e;
  }
  return e;
}

}  // namespace dioph
