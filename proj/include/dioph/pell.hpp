#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dioph/verdict.hpp"

namespace dioph {

struct PerfectSquare : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// x^2 - d*y^2 = c
struct PellForm {
  Integer d, c;
};

struct PellUnit {
  Integer u, v;
};

/// Minimal positive solution of x^2 - d*y^2 = 1: brute-force pre-pass over y <= prepass, then the
/// continued fraction of sqrt(d).
PellUnit fundamental_solution(const Integer& d, unsigned long prepass = 1000);

struct PellClasses {
  PellUnit unit;
  /// Signed base solutions, one per orbit under multiplication by units and overall sign.
  std::vector<std::pair<Integer, Integer>> bases;
  Integer bound;
  /// false when the class search would exceed its budget.
  bool searched = true;
};

/// Class representatives with 0 <= y <= bound; every solution is +-base * unit^n.
PellClasses pell_classes(const PellForm& form, std::uint64_t search_budget = 10'000'000, unsigned long prepass = 1000);

/// Search bound ceil(sqrt(|c| * 2u / d)) for the class representatives.
Integer class_bound(const PellForm& form, const PellUnit& unit);

Verdict solve_pell(const PellForm& form, const std::string& xvar = "x", const std::string& yvar = "y");

struct PellReduction {
  PellForm form;
  std::string xvar, yvar;
  /// X = ax*x + bx, Y = ay*y + by
  Integer ax, bx, ay, by;
  Integer scale;
};

/// Two-variable quadratic without a mixed term to X^2 - d*Y^2 = c with affine X, Y.
std::optional<PellReduction> reduce_to_pell(const NormalizedEquation& eq);

struct BackTransform {
  /// all | none | some
  std::string classification;
  Verdict verdict;
  /// First members in increasing |Y|.
  std::vector<Assignment> first;
};

BackTransform back_transform(const PellClasses& classes, const PellReduction& red, std::size_t count = 5);

/// Orbit families for the reduction, each with integral members only.
std::vector<Family> pell_families(const PellClasses& classes, const PellReduction& red, std::string* classification);

}  // namespace dioph
