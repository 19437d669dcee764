#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dioph/expr.hpp"

namespace dioph {

struct SyntaxError : std::runtime_error {
  SyntaxError(std::size_t line, std::size_t column, std::vector<std::string> expected, const std::string& found);
  std::size_t line;
  std::size_t column;
  std::vector<std::string> expected;
  std::string found;
};

struct UnknownDomainName : std::runtime_error {
  UnknownDomainName(std::size_t column, const std::string& name);
  std::size_t column;
};

Problem parse_problem(const std::string& text);

/// Equations only, before normalization.
std::vector<RawEquation> parse_raw_system(const std::string& text);

/// A single expression, e.g. a family member formula.
RawPtr parse_expression(const std::string& text);

std::string render(const Problem& problem);
std::string render_equation(const NormalizedEquation& eq);
std::string render_assignment(const Assignment& a);

}  // namespace dioph
