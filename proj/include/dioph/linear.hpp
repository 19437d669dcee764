#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dioph/verdict.hpp"

namespace dioph {

struct BothZero : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ExtendedGcd {
  Integer g, s, t;
};

/// g = gcd(a, b) > 0 with s*a + t*b = g.
ExtendedGcd extended_gcd(const Integer& a, const Integer& b);

using Vector = std::vector<Integer>;
using Matrix = std::vector<Vector>;

/// {particular + sum t_i * basis_i}
struct AffineLattice {
  Vector particular;
  std::vector<Vector> basis;

  Vector member(const std::vector<Integer>& t) const;
};

/// Either a lattice or a certificate lambda, g: lambda*A == 0 (mod g) entrywise and g does not divide lambda*b.
struct LinearSolution {
  std::optional<AffineLattice> lattice;
  Vector lambda;
  Integer g;
};

LinearSolution solve_linear_lattice(const Matrix& A, const Vector& b);

/// Checks the unsolvability certificate.
bool check_linear_certificate(const Matrix& A, const Vector& b, const Vector& lambda, const Integer& g);

/// a_1 x_1 + ... + a_n x_n = b; variable names default to x1..xn.
Verdict solve_linear(const Vector& a, const Integer& b, const std::vector<std::string>& names = {});
Verdict solve_linear_system(const Matrix& A, const Vector& b, const std::vector<std::string>& names = {});

/// Family for a lattice with parameters t1.., in the given variable order.
Family lattice_family(const AffineLattice& lat, const std::vector<std::string>& names,
                      const std::string& param_prefix = "t");

/// Coefficient matrix of linear equations; nullopt when some equation is not linear.
struct LinearSystem {
  std::vector<std::string> variables;
  Matrix A;
  Vector b;
};
std::optional<LinearSystem> as_linear_system(const std::vector<NormalizedEquation>& eqs);

}  // namespace dioph
