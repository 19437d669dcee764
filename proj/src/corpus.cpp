#include "dioph/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <set>
#include <sstream>
#include <thread>

#include "dioph/parse.hpp"

namespace dioph {

CorpusError::CorpusError(std::size_t l, const std::string& what)
    : std::runtime_error((l ? "line " + std::to_string(l) + ": " : std::string()) + what), line(l) {}

namespace {

class TomlReader {
 public:
  explicit TomlReader(const std::string& text) : s_(text) {}

  std::map<std::string, std::vector<TomlTable>> read() {
    std::map<std::string, std::vector<TomlTable>> out;
    TomlTable* cur = nullptr;
    while (true) {
      skip_blank_lines();
      if (at_end()) break;
      if (peek() == '[') {
        if (!consume("[[")) fail("expected '[[' (only arrays of tables are supported)");
        skip_ws();
        std::string name = bare_key();
        skip_ws();
        if (!consume("]]")) fail("expected ']]'");
        end_of_line();
        out[name].emplace_back();
        cur = &out[name].back();
        continue;
      }
      std::string key = peek() == '"' ? basic_string() : bare_key();
      if (!cur) fail("key '" + key + "' outside a [[table]]");
      if (cur->count(key)) fail("duplicate key '" + key + "'");
      skip_ws();
      if (!consume("=")) fail("expected '=' after key '" + key + "'");
      skip_ws();
      TomlValue v = value();
      end_of_line();
      (*cur)[key] = std::move(v);
    }
    return out;
  }

 private:
  const std::string& s_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;

  [[noreturn]] void fail(const std::string& what) const { throw CorpusError(line_, what); }
  bool at_end() const { return i_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[i_]; }
  char get() {
    char c = s_[i_++];
    if (c == '\n') ++line_;
    return c;
  }
  bool consume(const std::string& t) {
    if (s_.compare(i_, t.size(), t) != 0) return false;
    for (std::size_t k = 0; k < t.size(); ++k) get();
    return true;
  }
  void skip_ws() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) get();
  }
  void skip_comment() {
    if (peek() == '#')
      while (!at_end() && peek() != '\n') get();
  }
  void skip_blank_lines() {
    while (!at_end()) {
      skip_ws();
      skip_comment();
      if (peek() == '\r') get();
      if (peek() == '\n')
        get();
      else
        break;
    }
  }
  void end_of_line() {
    skip_ws();
    skip_comment();
    if (peek() == '\r') get();
    if (at_end()) return;
    if (peek() != '\n') fail(std::string("unexpected '") + peek() + "'");
    get();
  }
  std::string bare_key() {
    std::string k;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) k += get();
    if (k.empty()) fail("expected a key");
    return k;
  }
  std::string basic_string() {
    if (consume("\"\"\"")) return multi_line("\"\"\"", true);
    get();
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      char c = get();
      if (c == '"') return out;
      if (c == '\\') out += escape();
      else out += c;
    }
  }
  std::string literal_string() {
    if (consume("'''")) return multi_line("'''", false);
    get();
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      char c = get();
      if (c == '\'') return out;
      out += c;
    }
  }
  std::string multi_line(const std::string& close, bool escapes) {
    if (peek() == '\n') get();
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated multi-line string");
      if (consume(close)) return out;
      char c = get();
      if (escapes && c == '\\') out += escape();
      else out += c;
    }
  }
  char escape() {
    if (at_end()) fail("bad escape");
    char c = get();
    switch (c) {
      case 'n': return '\n';
      case 't': return '\t';
      case '"': return '"';
      case '\\': return '\\';
      default: fail(std::string("unsupported escape \\") + c);
    }
  }
  std::string scalar_token() {
    std::string t;
    while (!at_end() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != ',' && peek() != ']' && peek() != '#')
      t += get();
    return t;
  }
  TomlValue scalar() {
    std::string t = scalar_token();
    if (t == "true") return true;
    if (t == "false") return false;
    std::string digits;
    for (char c : t)
      if (c != '_') digits += c;
    if (digits.empty()) fail("expected a value");
    try {
      std::size_t used = 0;
      if (digits.find_first_of(".eE") == std::string::npos) {
        long v = std::stol(digits, &used);
        if (used == digits.size()) return v;
      } else {
        double v = std::stod(digits, &used);
        if (used == digits.size()) return v;
      }
    } catch (const std::exception&) {
    }
    fail("bad value '" + t + "'");
  }
  void skip_array_space() {
    while (!at_end()) {
      skip_ws();
      skip_comment();
      if (peek() == '\n' || peek() == '\r')
        get();
      else
        break;
    }
  }
  TomlValue array() {
    get();
    std::vector<std::string> strs;
    std::vector<long> ints;
    while (true) {
      skip_array_space();
      if (peek() == ']') {
        get();
        break;
      }
      if (peek() == '"' || peek() == '\'') {
        if (!ints.empty()) fail("mixed array");
        strs.push_back(peek() == '"' ? basic_string() : literal_string());
      } else {
        TomlValue v = scalar();
        if (!std::holds_alternative<long>(v) || !strs.empty()) fail("arrays hold strings or integers");
        ints.push_back(std::get<long>(v));
      }
      skip_array_space();
      if (peek() == ',') {
        get();
        continue;
      }
      if (peek() != ']') fail("expected ',' or ']' in array");
    }
    if (!ints.empty()) return ints;
    return strs;
  }
  TomlValue value() {
    if (peek() == '"') return basic_string();
    if (peek() == '\'') return literal_string();
    if (peek() == '[') return array();
    return scalar();
  }
};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

template <class T>
const T* field(const TomlTable& t, const std::string& key, const std::string& name) {
  auto it = t.find(key);
  if (it == t.end()) return nullptr;
  const T* v = std::get_if<T>(&it->second);
  if (!v) throw CorpusError(0, "case '" + name + "': field '" + key + "' has the wrong type");
  return v;
}

bool inside(const Assignment& a, const std::pair<Integer, Integer>& box) {
  for (const auto& [k, v] : a)
    if (v < box.first || v > box.second) return false;
  return true;
}

std::string listing(const std::vector<Assignment>& sols) {
  std::string out;
  for (const auto& s : sols) out += (out.empty() ? "" : " ") + render_assignment(s);
  return out;
}

}  // namespace

std::map<std::string, std::vector<TomlTable>> parse_toml_tables(const std::string& text) { return TomlReader(text).read(); }

std::optional<std::pair<Integer, Integer>> parse_range(const std::string& text) {
  auto pos = text.find("..");
  if (pos == std::string::npos) return std::nullopt;
  try {
    Integer lo(trim(text.substr(0, pos))), hi(trim(text.substr(pos + 2)));
    if (lo > hi) return std::nullopt;
    return std::make_pair(lo, hi);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

Assignment parse_assignment(const std::string& text) {
  Assignment a;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    if (part.empty()) continue;
    auto eq = part.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("expected var=value in '" + part + "'");
    std::string var = trim(part.substr(0, eq));
    try {
      a[var] = Integer(trim(part.substr(eq + 1)));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad integer in '" + part + "'");
    }
  }
  return a;
}

std::vector<CorpusCase> parse_corpus(const std::string& text) {
  auto tables = parse_toml_tables(text);
  std::vector<CorpusCase> out;
  for (const auto& [name, list] : tables)
    if (name != "case") throw CorpusError(0, "unknown table [[" + name + "]]");
  if (!tables.count("case")) return out;
  std::size_t idx = 0;
  for (const auto& t : tables.at("case")) {
    ++idx;
    static const std::set<std::string> known = {"name",        "problem",     "expect",       "count",
                                                "solutions",   "within_box",  "certificate",  "max_modulus_cert",
                                                "box",         "timeout_ms",  "probe_budget", "enum_budget",
                                                "max_modulus", "note"};
    CorpusCase c;
    auto* nm = field<std::string>(t, "name", "#" + std::to_string(idx));
    c.name = nm ? *nm : "case " + std::to_string(idx);
    for (const auto& [k, v] : t)
      if (!known.count(k)) throw CorpusError(0, "case '" + c.name + "': unknown field '" + k + "'");
    auto* pr = field<std::string>(t, "problem", c.name);
    auto* ex = field<std::string>(t, "expect", c.name);
    if (!pr || !ex) throw CorpusError(0, "case '" + c.name + "' needs 'problem' and 'expect'");
    c.problem = *pr;
    c.expect = *ex;
    if (c.expect != "no_solution" && c.expect != "finite" && c.expect != "family" && c.expect != "finite_or_inconclusive")
      throw CorpusError(0, "case '" + c.name + "': unknown expectation '" + c.expect + "'");
    if (auto* v = field<long>(t, "count", c.name)) c.count = static_cast<std::size_t>(*v);
    if (auto* v = field<std::vector<std::string>>(t, "solutions", c.name)) {
      std::vector<Assignment> sols;
      for (const auto& s : *v) sols.push_back(parse_assignment(s));
      canonicalize(sols);
      c.solutions = sols;
    }
    auto range = [&](const char* key) -> std::optional<std::pair<Integer, Integer>> {
      auto* v = field<std::string>(t, key, c.name);
      if (!v) return std::nullopt;
      auto r = parse_range(*v);
      if (!r) throw CorpusError(0, "case '" + c.name + "': bad range '" + *v + "'");
      return r;
    };
    c.within_box = range("within_box");
    c.box = range("box");
    if (auto* v = field<std::string>(t, "certificate", c.name)) c.certificate = *v;
    if (auto* v = field<long>(t, "max_modulus_cert", c.name)) c.max_certificate_modulus = *v;
    if (auto* v = field<long>(t, "timeout_ms", c.name)) c.timeout_ms = *v;
    if (auto* v = field<long>(t, "probe_budget", c.name)) c.probe_budget = static_cast<std::uint64_t>(*v);
    if (auto* v = field<long>(t, "enum_budget", c.name)) c.enum_budget = static_cast<std::uint64_t>(*v);
    if (auto* v = field<long>(t, "max_modulus", c.name)) c.max_modulus = static_cast<unsigned long>(*v);
    out.push_back(std::move(c));
  }
  return out;
}

CaseResult run_case(const CorpusCase& c, const Config& base) {
  CaseResult r;
  r.name = c.name;
  Config cfg = base;
  if (c.box) cfg.box = c.box;
  if (c.timeout_ms) cfg.timeout_ms = *c.timeout_ms;
  if (c.probe_budget) cfg.probe_budget = *c.probe_budget;
  if (c.enum_budget) cfg.enum_budget = *c.enum_budget;
  if (c.max_modulus) cfg.max_modulus = *c.max_modulus;
  Problem p;
  try {
    p = parse_problem(c.problem);
    r.verdict = solve(p, cfg);
  } catch (const std::exception& e) {
    r.detail = std::string("error: ") + e.what();
    return r;
  }
  const Verdict& v = r.verdict;
  SolutionReport check = verify_verdict(p, v);
  if (!check.ok) {
    r.detail = "verification failed: " + check.failures.front();
    return r;
  }
  auto compare_solutions = [&](const std::vector<Assignment>& got) -> bool {
    std::vector<Assignment> g = got, want = c.solutions.value_or(std::vector<Assignment>{});
    if (c.within_box) {
      std::erase_if(g, [&](const Assignment& a) { return !inside(a, *c.within_box); });
      std::erase_if(want, [&](const Assignment& a) { return !inside(a, *c.within_box); });
    }
    if (c.count && !c.within_box && g.size() != *c.count) {
      r.detail = "expected " + std::to_string(*c.count) + " solutions, got " + std::to_string(g.size());
      return false;
    }
    if (c.solutions && g != want) {
      r.detail = "solutions differ: got " + listing(g);
      return false;
    }
    return true;
  };
  const std::string got = status_name(v.status);
  if (c.expect == "no_solution" || (c.expect == "finite" && c.count == 0u && !c.solutions)) {
    if (v.status != Status::NoSolution) {
      r.detail = "expected no_solution, got " + got;
      return r;
    }
    if (c.certificate && v.certificate->kind != *c.certificate) {
      r.detail = "expected a " + *c.certificate + " certificate, got " + v.certificate->kind;
      return r;
    }
    if (c.max_certificate_modulus && (!v.certificate->modulus || *v.certificate->modulus > *c.max_certificate_modulus)) {
      r.detail = "certificate modulus exceeds " + std::to_string(*c.max_certificate_modulus);
      return r;
    }
    r.passed = true;
    r.detail = "no_solution (" + v.certificate->kind + ")";
    return r;
  }
  if (c.expect == "finite" || c.expect == "finite_or_inconclusive") {
    if (v.status == Status::Finite || (v.status == Status::NoSolution && c.solutions && c.solutions->empty())) {
      if (!compare_solutions(v.solutions)) return r;
      r.passed = true;
      r.detail = "finite: " + std::to_string(v.solutions.size()) + " (" + (v.completeness.empty() ? "empty" : v.completeness) + ")";
      return r;
    }
    if (v.status == Status::Inconclusive && c.expect == "finite_or_inconclusive") {
      std::vector<Assignment> seen;
      for (const auto& t : v.trace) seen.insert(seen.end(), t.solutions.begin(), t.solutions.end());
      canonicalize(seen);
      if (!compare_solutions(seen)) return r;
      r.passed = true;
      r.detail = "inconclusive, " + std::to_string(seen.size()) + " found";
      return r;
    }
    r.detail = "expected " + c.expect + ", got " + got;
    return r;
  }
  // family
  if (v.status != Status::Family) {
    r.detail = "expected family, got " + got;
    return r;
  }
  if (c.count && v.families.size() != *c.count) {
    r.detail = "expected " + std::to_string(*c.count) + " families, got " + std::to_string(v.families.size());
    return r;
  }
  r.passed = true;
  r.detail = "family: " + std::to_string(v.families.size());
  return r;
}

std::vector<CaseResult> run_corpus(const std::vector<CorpusCase>& cases, const Config& base, unsigned jobs) {
  std::vector<CaseResult> results(cases.size());
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, cases.size()))));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) results[i] = run_case(cases[i], base);
  };
  if (jobs == 1) {
    worker();
    return results;
  }
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < jobs; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return results;
}

Json corpus_report(const std::vector<CaseResult>& results) {
  Json cases = Json::array();
  std::size_t passed = 0;
  for (const auto& r : results) {
    passed += r.passed;
    cases.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"verdict", to_json(r.verdict)}});
  }
  return {{"cases", cases}, {"total", results.size()}, {"passed", passed}, {"failed", results.size() - passed}};
}

}  // namespace dioph
