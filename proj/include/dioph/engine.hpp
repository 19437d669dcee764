#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dioph/verdict.hpp"

namespace dioph {

struct Config {
  unsigned long max_modulus = 64;
  /// Largest modulus tried when looking for a bound on exponential/factorial variables.
  unsigned long bounding_max_modulus = 2048;
  std::uint64_t state_budget = 10'000'000;
  std::uint64_t probe_budget = 1'000'000;
  long probe_radius = 100;
  std::uint64_t enum_budget = 100'000'000;
  long timeout_ms = 10'000;
  unsigned long pell_prepass = 1000;
  /// Replaces inferred bounds; results are never complete.
  std::optional<std::pair<Integer, Integer>> box;

  /// Multiplies every budget (not the moduli).
  Config scaled(double factor) const;
  /// Applies DIOPH_BUDGET_SCALE when set.
  static Config from_environment();
};

/// One or more equations; systems go through solve_system.
Verdict solve(const Problem& problem, const Config& config = {});
Verdict solve_system(const Problem& problem, const Config& config = {});

struct CheckReport {
  bool ok = false;
  std::string message;
};

/// Re-derives the contradiction from the payload and the problem. Throws MalformedCertificate.
CheckReport verify_certificate(const Problem& problem, const Certificate& cert);

struct SolutionReport {
  bool ok = true;
  std::vector<std::string> failures;
};

/// Substitutes every solution, and family members with parameters 0..20, into all equations and constraints.
SolutionReport verify_solutions(const Problem& problem, const std::vector<Assignment>& solutions,
                                const std::vector<Family>& families = {});

/// Certificate check for NoSolution, solution check for Finite/Family, trivially true otherwise.
SolutionReport verify_verdict(const Problem& problem, const Verdict& verdict);

/// Problem made of one equation of a system, restricted to its variables.
Problem equation_problem(const Problem& problem, std::size_t index);

/// Fixes var = value; nullopt when the value is outside the domain or forced nonzero.
std::optional<Problem> substitute(const Problem& problem, const std::string& var, const Integer& value);

}  // namespace dioph
