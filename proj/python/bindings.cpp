#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dioph/corpus.hpp"
#include "dioph/engine.hpp"
#include "dioph/parse.hpp"

namespace py = pybind11;
using namespace dioph;

namespace {

Config make_config(std::optional<unsigned long> max_modulus, std::optional<std::string> box,
                   std::optional<std::uint64_t> probe_budget, std::optional<std::uint64_t> enum_budget,
                   std::optional<long> timeout_ms) {
  Config c = Config::from_environment();
  if (max_modulus) c.max_modulus = *max_modulus;
  if (probe_budget) c.probe_budget = *probe_budget;
  if (enum_budget) c.enum_budget = *enum_budget;
  if (timeout_ms) c.timeout_ms = *timeout_ms;
  if (box) {
    auto r = parse_range(*box);
    if (!r) throw py::value_error("box must look like LO..HI, got '" + *box + "'");
    c.box = r;
  }
  return c;
}

}  // namespace

// Everything crosses the boundary as JSON text; the Python side decodes it.
PYBIND11_MODULE(_core, m) {
  m.doc() = "Diophantine solver engine";

  py::register_exception<SyntaxError>(m, "ProblemSyntaxError", PyExc_ValueError);
  py::register_exception<UnknownDomainName>(m, "UnknownDomainName", PyExc_ValueError);
  static py::exception<MalformedCertificate> malformed(m, "MalformedInput", PyExc_ValueError);
  py::register_exception<CorpusError>(m, "CorpusError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const MalformedCertificate& e) {
      malformed(e.what());
    } catch (const Json::exception& e) {
      malformed(e.what());
    }
  });

  m.def(
      "solve_json",
      [](const std::string& problem, std::optional<unsigned long> max_modulus, std::optional<std::string> box,
         std::optional<std::uint64_t> probe_budget, std::optional<std::uint64_t> enum_budget,
         std::optional<long> timeout_ms, bool trace) {
        Problem p = parse_problem(problem);
        Config c = make_config(max_modulus, box, probe_budget, enum_budget, timeout_ms);
        Verdict v;
        {
          py::gil_scoped_release release;
          v = solve(p, c);
        }
        return to_json(v, trace).dump();
      },
      py::arg("problem"), py::arg("max_modulus") = py::none(), py::arg("box") = py::none(),
      py::arg("probe_budget") = py::none(), py::arg("enum_budget") = py::none(), py::arg("timeout_ms") = py::none(),
      py::arg("trace") = false);

  m.def(
      "check_certificate_json",
      [](const std::string& problem, const std::string& certificate) {
        Json j = Json::parse(certificate);
        if (j.is_object() && j.contains("status") && j.contains("certificate")) j = j["certificate"];
        auto r = verify_certificate(parse_problem(problem), certificate_from_json(j));
        return py::make_tuple(r.ok, r.message);
      },
      py::arg("problem"), py::arg("certificate"));

  m.def(
      "verify_solutions_json",
      [](const std::string& problem, const std::string& solutions, const std::string& families) {
        std::vector<Assignment> sols;
        std::vector<Family> fams;
        for (const auto& s : Json::parse(solutions)) sols.push_back(assignment_from_json(s));
        for (const auto& f : Json::parse(families)) fams.push_back(family_from_json(f));
        auto r = verify_solutions(parse_problem(problem), sols, fams);
        return py::make_tuple(r.ok, r.failures);
      },
      py::arg("problem"), py::arg("solutions"), py::arg("families") = "[]");

  m.def(
      "run_corpus_json",
      [](const std::string& text, unsigned jobs) {
        auto cases = parse_corpus(text);
        Config c = Config::from_environment();
        std::vector<CaseResult> results;
        {
          py::gil_scoped_release release;
          results = run_corpus(cases, c, jobs);
        }
        return corpus_report(results).dump();
      },
      py::arg("text"), py::arg("jobs") = 1);

  m.def(
      "normalize", [](const std::string& problem) { return render(parse_problem(problem)); }, py::arg("problem"));
}
