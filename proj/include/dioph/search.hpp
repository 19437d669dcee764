#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dioph/modular.hpp"
#include "dioph/verdict.hpp"

namespace dioph {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Closed interval; a missing end is unbounded.
struct VarBound {
  std::optional<Integer> lo, hi;
  /// proved-even-power | proved-reciprocal | proved-exponential-log | domain | user-box
  std::string provenance;
  bool bounded() const { return lo && hi; }
};

struct BoundSet {
  std::map<std::string, VarBound> vars;
  /// Every interval is finite and proved.
  bool complete = false;
  /// The bound argument itself excludes every assignment.
  bool infeasible = false;
  Json argument = Json::object();
};

BoundSet infer_bounds(const NormalizedEquation& eq, const DomainMap& domains = {});

/// Same box for every variable, clipped to the domains; never complete.
BoundSet user_box(const std::vector<std::string>& vars, const Integer& lo, const Integer& hi, const DomainMap& domains = {});

struct SymmetryInfo {
  /// Groups of at least two interchangeable variables.
  std::vector<std::vector<std::string>> symmetric;
  /// Ordered cycles v0 -> v1 -> ... -> v0 leaving the equation unchanged.
  std::vector<std::vector<std::string>> cyclic;
};

/// Invariance under variable swaps and cycles; domains and nonvanishing sets must agree too.
SymmetryInfo detect_symmetry(const NormalizedEquation& eq, const DomainMap& domains = {});

/// lhs(-v) == +-lhs(v), polynomial equations only.
bool sign_flip_invariant(const NormalizedEquation& eq);

/// Fast exact evaluation with 128-bit arithmetic and a big-integer fallback.
class Evaluator {
 public:
  Evaluator(const Polynomial& p, const std::vector<std::string>& order);
  /// values in the order given at construction.
  bool is_zero(const std::vector<long>& values) const;
  Integer value(const std::vector<long>& values) const;

 private:
  struct Factor {
    std::size_t var;
    unsigned long power = 0;
    long base = 0;  // exponential base, 0 when absent
    bool factorial = false;
  };
  struct Term {
    Integer coef;
    __int128 small = 0;
    bool fits = false;
    std::vector<Factor> factors;
  };
  std::vector<Term> terms_;
  Polynomial poly_;
  std::vector<std::string> order_;
  bool fast(const std::vector<long>& values, __int128& out) const;
};

struct EnumResult {
  std::vector<Assignment> solutions;
  bool complete = false;
  std::uint64_t evaluations = 0;
  bool budget_exceeded = false;
};

struct EnumOptions {
  std::uint64_t budget = 100'000'000;
  bool use_symmetry = true;
  bool sign_split = true;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Exhaustive scan of the box; solutions must satisfy every equation and the problem's constraints.
EnumResult enumerate_box(const Problem& problem, const BoundSet& bounds, const SymmetryInfo& sym,
                         const EnumOptions& opts = {});

struct ProbeReport {
  std::vector<Assignment> hits;
  std::uint64_t evaluations = 0;
  /// Whole box visited.
  bool exhausted = false;
  /// Smallest |lhs| seen over the first equation.
  std::optional<Integer> min_abs;
};

/// Spiral outward from the origin by max-norm shells.
ProbeReport probe(const Problem& problem, long radius = 100, std::uint64_t budget = 1'000'000,
                  std::size_t max_hits = 64);

}  // namespace dioph
