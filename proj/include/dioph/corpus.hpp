#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dioph/engine.hpp"

namespace dioph {

struct CorpusError : std::runtime_error {
  CorpusError(std::size_t line, const std::string& what);
  std::size_t line;
};

/// One value of the accepted TOML subset.
using TomlValue = std::variant<std::string, long, double, bool, std::vector<std::string>, std::vector<long>>;
using TomlTable = std::map<std::string, TomlValue>;

/// `[[name]]` array-of-tables with `key = value` lines; strings may be basic, literal or triple-quoted.
std::map<std::string, std::vector<TomlTable>> parse_toml_tables(const std::string& text);

struct CorpusCase {
  std::string name;
  std::string problem;
  /// no_solution | finite | family | finite_or_inconclusive
  std::string expect;
  std::optional<std::size_t> count;
  std::optional<std::vector<Assignment>> solutions;
  /// Compare only solutions inside [lo, hi] per variable.
  std::optional<std::pair<Integer, Integer>> within_box;
  std::optional<std::string> certificate;
  std::optional<long> max_certificate_modulus;
  std::optional<std::pair<Integer, Integer>> box;
  std::optional<long> timeout_ms;
  std::optional<std::uint64_t> probe_budget, enum_budget;
  std::optional<unsigned long> max_modulus;
};

std::vector<CorpusCase> parse_corpus(const std::string& text);

struct CaseResult {
  std::string name;
  bool passed = false;
  std::string detail;
  Verdict verdict;
};

CaseResult run_case(const CorpusCase& c, const Config& base);

/// Results in case order whatever the number of workers.
std::vector<CaseResult> run_corpus(const std::vector<CorpusCase>& cases, const Config& base, unsigned jobs = 1);

/// Deterministic report: no timings.
Json corpus_report(const std::vector<CaseResult>& results);

/// "LO..HI"
std::optional<std::pair<Integer, Integer>> parse_range(const std::string& text);

/// "x=1, y=-2"
Assignment parse_assignment(const std::string& text);

}  // namespace dioph
