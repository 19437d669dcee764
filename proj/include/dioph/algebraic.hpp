#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dioph/verdict.hpp"

namespace dioph {

struct NotApplicable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ZeroTarget : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// (prod forms) - N == scale * source.
struct ProductForm {
  std::vector<Polynomial> forms;
  Integer N;
  Integer scale = 1;

  Polynomial expand() const;
  bool matches(const Polynomial& source) const { return expand() == source * scale; }
};

/// Every ordered factorization of N over the forms, each solved as a linear system.
/// Variables of `problem` missing from the forms are free. Throws ZeroTarget when N = 0.
Verdict factor_pair_solve(const ProductForm& pf, const Problem& problem);

/// N = 0: one family per vanishing form.
Verdict zero_form_solve(const ProductForm& pf, const Problem& problem);

/// Variable dividing every monomial (no constant term) and the cofactor.
std::optional<std::pair<std::string, Polynomial>> common_variable_factor(const Polynomial& p);

/// a*xy + b*x + c*y + d = 0  ->  (a*x + c)(a*y + b) = bc - ad
std::optional<ProductForm> bilinear_product_form(const Polynomial& p);

/// Two-variable diagonal quadratic p*X^2 - n*Y^2 = N with p*n a square.
std::optional<ProductForm> difference_of_squares(const NormalizedEquation& eq);

/// Quadratic in pivot with coefficients in one other variable.
Verdict discriminant_solve(const NormalizedEquation& eq, const std::string& pivot, const Problem& problem);

/// Linear in one variable with a coefficient coprime (as polynomials) to the rest.
Verdict separation_solve(const NormalizedEquation& eq, const Problem& problem);

struct FltMatch {
  unsigned long n = 0;
  std::string rewrite;
  Certificate certificate;
  /// Union of the cases where one term vanishes.
  Verdict zero_cases;
};

/// Three power terms sharing an exponent n >= 3 with n-th power coefficients.
std::optional<FltMatch> flt_check(const NormalizedEquation& eq, const Problem& problem);

/// alpha*u^a + beta*w^b = 0 over the domains of u and w (u != w).
std::vector<Family> solve_binomial(const Integer& alpha, const std::string& u, unsigned long a, const Integer& beta,
                                   const std::string& w, unsigned long b, const Problem& problem);

/// A variable occurring once as A*z: z = -g/A over the residue classes with A | g.
Verdict isolated_linear_solve(const NormalizedEquation& eq, const Problem& problem);

/// Family with no parameters standing for a single point.
Family point_family(const Assignment& a);

}  // namespace dioph
