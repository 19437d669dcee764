#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dioph/expr.hpp"

namespace dioph {

using Json = nlohmann::ordered_json;

/// Integers become JSON numbers when they fit in 64 bits, strings otherwise.
Json integer_json(const Integer& v);
Integer integer_from_json(const Json& j);
Json assignment_json(const Assignment& a);
Assignment assignment_from_json(const Json& j);

struct MalformedCertificate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Closed form over family parameters: numerator / denominator, exact when the family is sound.
struct ParamExpr {
  Polynomial numerator;
  Integer denominator = 1;

  static ParamExpr constant(const Integer& c) { return {Polynomial::constant(c), 1}; }
  static ParamExpr param(const std::string& name) { return {Polynomial::variable(name), 1}; }
  static ParamExpr parse(const std::string& text);

  /// nullopt when the value is not an integer.
  std::optional<Integer> evaluate(const Assignment& params) const;
  std::string render() const;
  bool operator==(const ParamExpr& o) const = default;
};

struct Parameter {
  std::string name;
  Domain domain;
  bool operator==(const Parameter& o) const = default;
};

/// Orbit of a Pell-type base solution: X + Y*sqrt(d) = (x0 + y0*sqrt(d)) * (u + v*sqrt(d))^n,
/// n = offset + step*k, mapped back through X = ax*x + bx, Y = ay*y + by.
struct PellOrbit {
  Integer d, c;
  Integer u, v;
  Integer x0, y0;
  Integer offset = 0, step = 1;
  std::string xvar, yvar;
  Integer ax = 1, bx = 0, ay = 1, by = 0;

  std::pair<Integer, Integer> member(const Integer& n) const;
  bool operator==(const PellOrbit& o) const = default;
};

struct Family {
  /// affine_lattice | pell_orbit | indexed | zero_form
  std::string kind;
  std::vector<Parameter> parameters;
  std::map<std::string, ParamExpr> expressions;
  std::vector<std::string> constraints;
  std::optional<PellOrbit> pell;

  /// Solution for the given parameter values; nullopt when not integral.
  std::optional<Assignment> materialize(const Assignment& params) const;
  bool operator==(const Family& o) const = default;
};

struct Certificate {
  /// modular | content | sign_magnitude | gcd_linear | flt | pell_empty_class | pell_orbit | exhaustion | case_split
  std::string kind;
  std::optional<Integer> modulus;
  Json data = Json::object();
};

enum class Status { NoSolution, Finite, Family, Inconclusive };
std::string status_name(Status s);
Status status_from_name(const std::string& s);

struct TraceEntry {
  std::string stage;
  std::string outcome;
  double millis = 0;
  std::vector<Assignment> solutions;
};

struct Stats {
  std::uint64_t evaluations = 0;
  std::uint64_t moduli_scanned = 0;
};

struct Verdict {
  Status status = Status::Inconclusive;
  std::optional<Certificate> certificate;
  std::vector<Assignment> solutions;
  /// bounded-exhaustive | factor-enumeration | discriminant-range | divisor-candidates | modular-plus-inspection
  std::string completeness;
  std::vector<Family> families;
  std::vector<TraceEntry> trace;
  Stats stats;

  static Verdict no_solution(Certificate c);
  static Verdict finite(std::vector<Assignment> sols, std::string tag);
  static Verdict family(std::vector<Family> fams);
  static Verdict inconclusive();
  bool definitive() const { return status != Status::Inconclusive; }
};

/// Sorts and deduplicates a solution list.
void canonicalize(std::vector<Assignment>& sols);

Json to_json(const Certificate& c);
Certificate certificate_from_json(const Json& j);
Json to_json(const Family& f);
Family family_from_json(const Json& j);
/// Timing is only emitted when requested so that plain output is reproducible.
Json to_json(const Verdict& v, bool with_timing = false);
Verdict verdict_from_json(const Json& j);

}  // namespace dioph
