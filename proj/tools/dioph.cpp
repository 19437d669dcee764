#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dioph/corpus.hpp"
#include "dioph/engine.hpp"
#include "dioph/parse.hpp"

using namespace dioph;

namespace {

constexpr int kDefinitive = 0;
constexpr int kUsage = 1;
constexpr int kInconclusive = 2;

struct Flags {
  std::optional<unsigned long> max_modulus;
  std::string box;
  std::optional<std::uint64_t> probe_budget, enum_budget;
  std::optional<long> timeout_ms;
  bool json = false;
  bool trace = false;
  unsigned jobs = 1;
};

Config make_config(const Flags& f) {
  Config c = Config::from_environment();
  if (f.max_modulus) c.max_modulus = *f.max_modulus;
  if (f.probe_budget) c.probe_budget = *f.probe_budget;
  if (f.enum_budget) c.enum_budget = *f.enum_budget;
  if (f.timeout_ms) c.timeout_ms = *f.timeout_ms;
  if (!f.box.empty()) {
    auto r = parse_range(f.box);
    if (!r) throw std::invalid_argument("bad --box '" + f.box + "', expected LO..HI");
    c.box = r;
  }
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_family(std::ostream& os, const Family& f) {
  os << "  family " << f.kind;
  if (!f.parameters.empty()) {
    os << " over";
    for (std::size_t i = 0; i < f.parameters.size(); ++i)
      os << (i ? ", " : " ") << f.parameters[i].name << " in " << f.parameters[i].domain.name();
  }
  os << "\n";
  if (f.pell) {
    const auto& p = *f.pell;
    std::string k = f.parameters.empty() ? "k" : f.parameters.front().name;
    os << "    X + Y*sqrt(" << p.d << ") = (" << p.x0 << " + " << p.y0 << "*sqrt(" << p.d << ")) * (" << p.u << " + "
       << p.v << "*sqrt(" << p.d << "))^(" << p.offset << " + " << p.step << "*" << k << ")\n";
    os << "    X = " << p.ax << "*" << p.xvar << " + " << p.bx << ", Y = " << p.ay << "*" << p.yvar << " + " << p.by
       << "\n";
  }
  for (const auto& [var, e] : f.expressions) os << "    " << var << " = " << e.render() << "\n";
  for (const auto& c : f.constraints) os << "    where " << c << "\n";
  if (f.expressions.empty() && !f.pell) os << "    every assignment\n";
}

void print_text(std::ostream& os, const Verdict& v, bool trace) {
  os << "status: " << status_name(v.status) << "\n";
  if (v.certificate) {
    os << "certificate: " << v.certificate->kind;
    if (v.certificate->modulus) os << " (m=" << *v.certificate->modulus << ")";
    os << "\n";
  }
  if (v.status == Status::Finite) {
    os << v.solutions.size() << (v.solutions.size() == 1 ? " solution" : " solutions") << " (" << v.completeness
       << ")\n";
    for (const auto& s : v.solutions) os << "  " << render_assignment(s) << "\n";
  }
  if (v.status == Status::Family) {
    os << v.families.size() << (v.families.size() == 1 ? " family" : " families") << "\n";
    for (const auto& f : v.families) print_family(os, f);
  }
  if (v.status == Status::Inconclusive || trace) {
    os << "trace:\n";
    for (const auto& t : v.trace) {
      os << "  " << t.stage << ": " << t.outcome;
      if (trace) os << " [" << std::fixed << std::setprecision(3) << t.millis << " ms]";
      os << "\n";
      if (!t.solutions.empty()) {
        os << "    found " << t.solutions.size() << ":";
        for (const auto& s : t.solutions) os << " " << render_assignment(s);
        os << "\n";
      }
    }
  }
  os << "evaluations: " << v.stats.evaluations << ", moduli scanned: " << v.stats.moduli_scanned << "\n";
}

int cmd_solve(const std::string& text, const Flags& f) {
  Problem p = parse_problem(text);
  Verdict v = solve(p, make_config(f));
  if (f.json)
    std::cout << to_json(v, f.trace).dump(2) << "\n";
  else
    print_text(std::cout, v, f.trace);
  return v.definitive() ? kDefinitive : kInconclusive;
}

int cmd_corpus(const std::string& path, const Flags& f) {
  auto cases = parse_corpus(read_file(path));
  if (cases.empty()) {
    std::cerr << "warning: " << path << " contains zero cases\n";
    if (f.json) std::cout << corpus_report({}).dump(2) << "\n";
    return 0;
  }
  auto results = run_corpus(cases, make_config(f), f.jobs);
  std::size_t failed = 0;
  for (const auto& r : results) failed += !r.passed;
  if (f.json) {
    std::cout << corpus_report(results).dump(2) << "\n";
  } else {
    std::size_t width = 4;
    for (const auto& r : results) width = std::max(width, r.name.size());
    for (const auto& r : results) {
      std::cout << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(int(width)) << r.name << "  "
                << status_name(r.verdict.status);
      if (!r.passed) std::cout << "  " << r.detail;
      std::cout << "\n";
    }
    std::cout << "total " << results.size() << ", passed " << results.size() - failed << ", failed " << failed << "\n";
  }
  return failed == 0 ? 0 : 1;
}

Json read_json(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw MalformedCertificate(path + ": " + e.what());
  }
}

int cmd_check(const std::string& text, const std::string& cert_path) {
  Problem p = parse_problem(text);
  Json j = read_json(cert_path);
  if (j.is_object() && j.contains("status")) {
    if (!j.contains("certificate")) throw MalformedCertificate(cert_path + ": verdict carries no certificate");
    j = j["certificate"];
  }
  auto report = verify_certificate(p, certificate_from_json(j));
  std::cout << (report.ok ? "valid" : "invalid") << (report.message.empty() ? "" : ": " + report.message) << "\n";
  return report.ok ? 0 : 1;
}

int cmd_verify(const std::string& text, const std::string& sol_path) {
  Problem p = parse_problem(text);
  Json j = read_json(sol_path);
  std::vector<Assignment> sols;
  std::vector<Family> fams;
  if (j.is_array()) {
    for (const auto& s : j) sols.push_back(assignment_from_json(s));
  } else if (j.is_object() && (j.contains("solutions") || j.contains("families"))) {
    for (const auto& s : j.value("solutions", Json::array())) sols.push_back(assignment_from_json(s));
    for (const auto& s : j.value("families", Json::array())) fams.push_back(family_from_json(s));
  } else {
    throw MalformedCertificate(sol_path + ": expected an array of assignments or an object with 'solutions'");
  }
  auto report = verify_solutions(p, sols, fams);
  for (const auto& f : report.failures) std::cout << f << "\n";
  std::cout << (report.ok ? "valid" : "invalid") << "\n";
  return report.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diophantine equation solver"};
  app.require_subcommand(1);
  Flags f;
  std::string problem, path;

  auto add_engine_flags = [&](CLI::App* sub) {
    sub->add_option("--max-modulus", f.max_modulus, "largest modulus for obstruction search (default 64)");
    sub->add_option("--box", f.box, "search box LO..HI for every variable; results are never complete");
    sub->add_option("--probe-budget", f.probe_budget, "maximum probe evaluations");
    sub->add_option("--enum-budget", f.enum_budget, "maximum enumeration evaluations");
    sub->add_option("--timeout-ms", f.timeout_ms, "wall-clock limit per problem");
    sub->add_flag("--json", f.json, "JSON output");
  };

  auto* solve_cmd = app.add_subcommand("solve", "solve one equation or system");
  solve_cmd->add_option("problem", problem, "e.g. \"x^2+y^2=z^2 ; x,y,z in N\"")->required();
  add_engine_flags(solve_cmd);
  solve_cmd->add_flag("--trace", f.trace, "per-stage trace with timing");

  auto* corpus_cmd = app.add_subcommand("corpus", "run a corpus file");
  corpus_cmd->add_option("file", path)->required();
  add_engine_flags(corpus_cmd);
  corpus_cmd->add_option("--jobs", f.jobs, "parallel workers")->check(CLI::PositiveNumber);

  auto* check_cmd = app.add_subcommand("check", "check a non-existence certificate");
  check_cmd->add_option("problem", problem)->required();
  check_cmd->add_option("--cert", path, "certificate or verdict JSON")->required();

  auto* verify_cmd = app.add_subcommand("verify", "substitute solutions into a problem");
  verify_cmd->add_option("problem", problem)->required();
  verify_cmd->add_option("--solutions", path, "solutions JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(problem, f);
    if (*corpus_cmd) return cmd_corpus(path, f);
    if (*check_cmd) return cmd_check(problem, path);
    if (*verify_cmd) return cmd_verify(problem, path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
