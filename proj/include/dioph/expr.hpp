#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dioph/integer.hpp"

namespace dioph {

struct UnsupportedTerm : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NestedFraction : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ZeroDenominatorConstant : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Declared for completeness; arithmetic is arbitrary precision so it is never thrown.
struct OverflowImpossible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shape of a monomial without its coefficient.
struct Signature {
  std::map<std::string, unsigned long> powers;
  std::map<std::string, Integer> exponentials;
  std::set<std::string> factorials;

  bool is_constant() const { return powers.empty() && exponentials.empty() && factorials.empty(); }
  unsigned long degree() const;
  std::set<std::string> variables() const;
  bool mentions(const std::string& v) const;
  /// Product of two shapes. Throws UnsupportedTerm on a repeated factorial.
  Signature operator*(const Signature& o) const;
  bool operator==(const Signature& o) const = default;
};

/// Canonical ordering: negative when a is rendered before b.
int compare_signatures(const Signature& a, const Signature& b);

struct SignatureOrder {
  bool operator()(const Signature& a, const Signature& b) const { return compare_signatures(a, b) < 0; }
};

struct Monomial {
  Integer coefficient;
  Signature sig;
  bool operator==(const Monomial& o) const = default;
};

/// Integer polynomial in variable powers, integer-base exponentials and factorials.
class Polynomial {
 public:
  using TermMap = std::map<Signature, Integer, SignatureOrder>;

  Polynomial() = default;
  static Polynomial constant(const Integer& c);
  static Polynomial variable(const std::string& name, unsigned long power = 1);
  static Polynomial exponential(const Integer& base, const std::string& name);
  static Polynomial factorial_of(const std::string& name);

  void add_term(const Signature& sig, const Integer& coefficient);
  const TermMap& terms() const { return terms_; }
  Integer constant_term() const;
  /// Non-constant monomials in canonical order.
  std::vector<Monomial> monomials() const;
  Integer coefficient(const Signature& sig) const;

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  std::set<std::string> variables() const;
  unsigned long degree() const;
  /// Highest power of var over all monomials.
  unsigned long degree_in(const std::string& var) const;
  bool is_polynomial_only() const;
  bool occurs_exponentially(const std::string& var) const;
  bool occurs_factorially(const std::string& var) const;
  bool occurs_polynomially(const std::string& var) const;
  Integer content() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Integer& k) const;
  Polynomial pow(unsigned long e) const;
  /// Exact division of every coefficient.
  Polynomial divided_by(const Integer& k) const;

  /// Replace a variable occurring only polynomially by a polynomial.
  Polynomial substitute(const std::string& var, const Polynomial& replacement) const;
  /// Fix a variable to a value; handles exponential and factorial occurrences.
  Polynomial substitute_value(const std::string& var, const Integer& value) const;
  Polynomial rename(const std::map<std::string, std::string>& mapping) const;

  /// Coefficients of var^0, var^1, ... as polynomials in the other variables.
  /// Requires var to occur only polynomially.
  std::vector<Polynomial> coefficients_in(const std::string& var) const;

  Integer evaluate(const Assignment& a) const;

  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }

 private:
  TermMap terms_;
};

/// One term c * numerator / denominator of a fractional source equation.
struct RationalTerm {
  Rational coefficient;
  Signature numerator;
  std::map<std::string, unsigned long> denominator;
  bool operator==(const RationalTerm& o) const = default;
};

/// Sum of rational terms equated to zero, kept from before denominators are cleared.
struct RationalForm {
  std::vector<RationalTerm> terms;
  bool operator==(const RationalForm& o) const = default;
  Rational evaluate(const Assignment& a) const;
};

struct NormalizedEquation {
  Polynomial lhs;
  std::set<std::string> nonvanishing;
  std::optional<RationalForm> source;

  std::vector<Monomial> terms() const { return lhs.monomials(); }
  Integer constant() const { return lhs.constant_term(); }
  std::set<std::string> variables() const { return lhs.variables(); }
  bool operator==(const NormalizedEquation& o) const = default;
};

struct Domain {
  enum class Kind { Z, N, N0, Interval };
  Kind kind = Kind::Z;
  Integer lo, hi;

  static Domain integers() { return {}; }
  static Domain naturals() { return {Kind::N, 0, 0}; }
  static Domain naturals0() { return {Kind::N0, 0, 0}; }
  static Domain interval(const Integer& lo, const Integer& hi) { return {Kind::Interval, lo, hi}; }

  bool contains(const Integer& v) const;
  std::optional<Integer> lower() const;
  std::optional<Integer> upper() const;
  bool nonnegative() const;
  std::string name() const;
  bool operator==(const Domain& o) const;
};

struct Problem {
  std::vector<NormalizedEquation> equations;
  std::map<std::string, Domain> domains;
  /// Each entry is a product of variables required to be nonzero.
  std::vector<std::set<std::string>> constraints;

  std::vector<std::string> variables() const;
  /// Variables forced nonzero by constraints or cleared denominators.
  std::set<std::string> nonvanishing() const;
  Domain domain_of(const std::string& v) const;
  bool admits(const Assignment& a) const;
  bool satisfied_by(const Assignment& a) const;
  bool operator==(const Problem& o) const = default;
};

/// Parsed but not yet normalized expression.
struct RawExpr {
  enum class Kind { Int, Var, Factorial, Power, Exponential, Add, Sub, Mul, Div, Neg };
  Kind kind = Kind::Int;
  Integer value;        // Int literal, Power exponent, Exponential base
  std::string name;     // Var, Factorial, Exponential exponent variable
  std::vector<std::shared_ptr<RawExpr>> args;

  static std::shared_ptr<RawExpr> integer(const Integer& v);
  static std::shared_ptr<RawExpr> var(const std::string& n);
  static std::shared_ptr<RawExpr> node(Kind k, std::vector<std::shared_ptr<RawExpr>> a);
};
using RawPtr = std::shared_ptr<RawExpr>;

struct RawEquation {
  RawPtr lhs, rhs;
};

/// Exact rational value of a raw tree; nullopt where a denominator vanishes.
std::optional<Rational> evaluate_raw(const RawExpr& e, const Assignment& a);

struct ClearedEquation {
  NormalizedEquation equation;
  std::set<std::string> nonvanishing;
};

NormalizedEquation normalize(const RawEquation& raw);
ClearedEquation clear_denominators(const RawEquation& raw);
/// Numerator and positive constant denominator of an expression; variable denominators are rejected.
std::pair<Polynomial, Integer> to_fraction(const RawExpr& e);
/// Clears a rational form directly.
NormalizedEquation clear_rational_form(const RationalForm& form);

struct CenteredTerm {
  Integer c;
  std::string var;
  Integer alpha, beta;
  bool operator==(const CenteredTerm& o) const = default;
};

/// sum c_i (alpha_i v_i + beta_i)^2 = N, equal to scale * eq.
struct CenteredForm {
  std::vector<CenteredTerm> terms;
  Integer N;
  Integer scale;
};

std::optional<CenteredForm> complete_square_reduce(const NormalizedEquation& eq);
Polynomial expand(const CenteredForm& f);

Integer evaluate(const NormalizedEquation& eq, const Assignment& a);

struct AffineMap {
  /// new = alpha * old + beta
  std::map<std::string, std::pair<Integer, Integer>> maps;

  Assignment apply(const Assignment& old) const;
  /// nullopt when some back-substitution is not integral.
  std::optional<Assignment> invert(const Assignment& image) const;
};

std::string render_monomial(const Integer& coefficient, const Signature& sig);
std::string render_polynomial(const Polynomial& p);

}  // namespace dioph
