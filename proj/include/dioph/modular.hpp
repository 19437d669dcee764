#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dioph/expr.hpp"

namespace dioph {

struct DomainUnbounded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StateBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using DomainMap = std::map<std::string, Domain>;

/// Eventual periodicity of b^v mod m for v >= 0.
struct Periodicity {
  unsigned long preperiod = 0;
  unsigned long period = 1;
};
Periodicity power_periodicity(const Integer& base, unsigned long m);

struct ResidueProfile {
  std::string variable;
  unsigned long modulus = 2;
  unsigned long preperiod = 0;
  unsigned long period = 1;
  unsigned long horizon = 1;
  /// Representative values; for exponential/factorial variables values >= preperiod stand for their class mod period.
  std::vector<Integer> representatives;
  bool periodic_tail = false;
};

/// Throws DomainUnbounded when an exponential/factorial variable may be negative.
ResidueProfile residue_profile(const NormalizedEquation& eq, const std::string& var, unsigned long m,
                               const DomainMap& domains = {});

/// Domain restricted to N0 for variables that occur as exponents or factorial arguments.
DomainMap effective_domains(const NormalizedEquation& eq, const DomainMap& domains);

using State = std::vector<Integer>;

struct StateSpace {
  std::vector<std::string> variables;
  std::vector<ResidueProfile> profiles;
  std::vector<State> states;
  std::uint64_t checked = 0;
};

constexpr std::uint64_t kDefaultStateBudget = 10'000'000;

/// Every representative tuple with eq == 0 (mod m).
StateSpace satisfying_states(const NormalizedEquation& eq, unsigned long m, const DomainMap& domains = {},
                             std::uint64_t budget = kDefaultStateBudget);

/// True iff some representative tuple satisfies eq mod m; cheaper than listing them.
bool has_satisfying_state(const NormalizedEquation& eq, unsigned long m, const DomainMap& domains = {},
                          std::uint64_t budget = kDefaultStateBudget, std::uint64_t* checked = nullptr);

struct ModularCertificate {
  unsigned long modulus = 0;
  std::uint64_t states_checked = 0;
  std::string domain_note;
};

struct ObstructionScan {
  std::optional<ModularCertificate> certificate;
  std::vector<unsigned long> skipped;
  std::uint64_t scanned = 0;
};

std::vector<unsigned long> default_moduli(unsigned long max_modulus = 64);

ObstructionScan find_obstruction(const NormalizedEquation& eq, const std::vector<unsigned long>& moduli,
                                 const DomainMap& domains = {}, std::uint64_t budget = kDefaultStateBudget);

/// Admissible values of one variable: explicit values, plus residues mod period for values >= threshold
/// (for every value when there is no threshold).
struct ResidueClasses {
  std::set<Integer> exact;
  bool has_tail = false;
  std::optional<Integer> threshold;
  unsigned long period = 1;
  std::set<unsigned long> residues;

  bool admits(const Integer& v) const;
  bool unrestricted() const;
  std::string describe(const std::string& var) const;
};

struct CongruenceReport {
  unsigned long modulus = 0;
  std::map<std::string, ResidueClasses> classes;
  StateSpace space;
};

CongruenceReport congruence_constraints(const NormalizedEquation& eq, unsigned long m, const DomainMap& domains = {},
                                        std::uint64_t budget = kDefaultStateBudget);

/// A modulus showing that every solution has some variable of `forced` below its preperiod.
struct ModularBound {
  unsigned long modulus = 0;
  std::map<std::string, unsigned long> forced;
};

/// Scans moduli for a bound on exponential/factorial variables; smallest forced set first.
std::optional<ModularBound> find_modular_bound(const NormalizedEquation& eq, const DomainMap& domains,
                                               unsigned long max_modulus, std::uint64_t budget,
                                               std::uint64_t* scanned = nullptr);

/// Re-checks a ModularBound claim.
bool check_modular_bound(const NormalizedEquation& eq, const DomainMap& domains, const ModularBound& b,
                         std::uint64_t budget = kDefaultStateBudget);

}  // namespace dioph
