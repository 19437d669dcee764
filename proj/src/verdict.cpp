#include "dioph/verdict.hpp"

#include <algorithm>

#include "dioph/parse.hpp"

namespace dioph {

Json integer_json(const Integer& v) {
  if (v.fits_slong_p()) return Json(static_cast<std::int64_t>(v.get_si()));
  return Json(v.get_str());
}

Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<std::int64_t>()));
  if (j.is_string()) {
    try {
      return Integer(j.get<std::string>());
    } catch (const std::invalid_argument&) {
    }
  }
  throw MalformedCertificate("expected an integer, got " + j.dump());
}

Json assignment_json(const Assignment& a) {
  Json j = Json::object();
  for (const auto& [k, v] : a) j[k] = integer_json(v);
  return j;
}

Assignment assignment_from_json(const Json& j) {
  if (!j.is_object()) throw MalformedCertificate("expected an object of variable values");
  Assignment a;
  for (const auto& [k, v] : j.items()) a[k] = integer_from_json(v);
  return a;
}

// ---------------------------------------------------------------- families

ParamExpr ParamExpr::parse(const std::string& text) {
  auto [num, den] = to_fraction(*parse_expression(text));
  return {num, den};
}

std::optional<Integer> ParamExpr::evaluate(const Assignment& params) const {
  Integer n;
  try {
    n = numerator.evaluate(params);
  } catch (const DomainViolation&) {
    return std::nullopt;
  }
  if (n % denominator != 0) return std::nullopt;
  return Integer(n / denominator);
}

std::string ParamExpr::render() const {
  std::string n = render_polynomial(numerator);
  if (denominator == 1) return n;
  return "(" + n + ")/" + denominator.get_str();
}

std::pair<Integer, Integer> PellOrbit::member(const Integer& n) const {
  Integer X = x0, Y = y0;
  Integer uu = u, vv = n < 0 ? Integer(-v) : v;
  Integer e = abs(n);
  // square-and-multiply in Z[sqrt d]
  Integer bu = uu, bv = vv;
  while (e > 0) {
    if (e % 2 == 1) {
      Integer nx = X * bu + d * Y * bv;
      Integer ny = X * bv + Y * bu;
      X = nx;
      Y = ny;
    }
    Integer su = bu * bu + d * bv * bv;
    Integer sv = 2 * bu * bv;
    bu = su;
    bv = sv;
    e /= 2;
  }
  return {X, Y};
}

std::optional<Assignment> Family::materialize(const Assignment& params) const {
  Assignment out;
  if (pell) {
    auto it = params.find("k");
    Integer k = it == params.end() ? Integer(0) : it->second;
    auto [X, Y] = pell->member(pell->offset + pell->step * k);
    Integer xn = X - pell->bx, yn = Y - pell->by;
    if (xn % pell->ax != 0 || yn % pell->ay != 0) return std::nullopt;
    out[pell->xvar] = xn / pell->ax;
    out[pell->yvar] = yn / pell->ay;
  }
  for (const auto& [v, e] : expressions) {
    auto val = e.evaluate(params);
    if (!val) return std::nullopt;
    out[v] = *val;
  }
  return out;
}

// ---------------------------------------------------------------- verdicts

std::string status_name(Status s) {
  switch (s) {
    case Status::NoSolution: return "no_solution";
    case Status::Finite: return "finite";
    case Status::Family: return "family";
    case Status::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Status status_from_name(const std::string& s) {
  if (s == "no_solution") return Status::NoSolution;
  if (s == "finite") return Status::Finite;
  if (s == "family") return Status::Family;
  if (s == "inconclusive") return Status::Inconclusive;
  throw MalformedCertificate("unknown status '" + s + "'");
}

Verdict Verdict::no_solution(Certificate c) {
  Verdict v;
  v.status = Status::NoSolution;
  v.certificate = std::move(c);
  return v;
}

Verdict Verdict::finite(std::vector<Assignment> sols, std::string tag) {
  Verdict v;
  v.status = Status::Finite;
  canonicalize(sols);
  v.solutions = std::move(sols);
  v.completeness = std::move(tag);
  return v;
}

Verdict Verdict::family(std::vector<Family> fams) {
  Verdict v;
  v.status = Status::Family;
  v.families = std::move(fams);
  return v;
}

Verdict Verdict::inconclusive() { return Verdict{}; }

void canonicalize(std::vector<Assignment>& sols) {
  std::sort(sols.begin(), sols.end());
  sols.erase(std::unique(sols.begin(), sols.end()), sols.end());
}

Json to_json(const Certificate& c) {
  Json j = Json::object();
  j["kind"] = c.kind;
  if (c.modulus) j["modulus"] = integer_json(*c.modulus);
  j["data"] = c.data;
  return j;
}

Certificate certificate_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw MalformedCertificate("certificate needs a string 'kind'");
  Certificate c;
  c.kind = j["kind"].get<std::string>();
  if (j.contains("modulus")) c.modulus = integer_from_json(j["modulus"]);
  if (j.contains("data")) c.data = j["data"];
  return c;
}

namespace {

Domain domain_from_name(const std::string& s) {
  if (s == "Z") return Domain::integers();
  if (s == "N") return Domain::naturals();
  if (s == "N0") return Domain::naturals0();
  throw MalformedCertificate("unknown parameter domain '" + s + "'");
}

std::string affine_back(const std::string& big, const Integer& a, const Integer& b) {
  std::string s = big;
  if (b > 0) s += " - " + b.get_str();
  if (b < 0) s += " + " + Integer(-b).get_str();
  if (a == 1) return s;
  if (b != 0) s = "(" + s + ")";
  return s + "/" + a.get_str();
}

}  // namespace

Json to_json(const Family& f) {
  Json j = Json::object();
  j["kind"] = f.kind;
  Json params = Json::array();
  for (const auto& p : f.parameters) params.push_back({{"name", p.name}, {"domain", p.domain.name()}});
  j["parameters"] = params;
  Json ex = Json::object();
  if (f.pell) {
    const auto& p = *f.pell;
    ex[p.xvar] = affine_back("X", p.ax, p.bx);
    ex[p.yvar] = affine_back("Y", p.ay, p.by);
  }
  for (const auto& [v, e] : f.expressions) ex[v] = e.render();
  j["expressions"] = ex;
  j["constraints"] = f.constraints;
  if (f.pell) {
    const auto& p = *f.pell;
    j["data"] = {{"d", integer_json(p.d)},
                 {"c", integer_json(p.c)},
                 {"unit", {integer_json(p.u), integer_json(p.v)}},
                 {"base", {integer_json(p.x0), integer_json(p.y0)}},
                 {"index", {{"offset", integer_json(p.offset)}, {"step", integer_json(p.step)}}},
                 {"map",
                  {{p.xvar, {integer_json(p.ax), integer_json(p.bx)}},
                   {p.yvar, {integer_json(p.ay), integer_json(p.by)}}}}};
  }
  return j;
}

Family family_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw MalformedCertificate("family needs a 'kind'");
  Family f;
  f.kind = j["kind"].get<std::string>();
  for (const auto& p : j.value("parameters", Json::array()))
    f.parameters.push_back({p.at("name").get<std::string>(), domain_from_name(p.at("domain").get<std::string>())});
  for (const auto& c : j.value("constraints", Json::array())) f.constraints.push_back(c.get<std::string>());
  if (f.kind == "pell_orbit") {
    if (!j.contains("data")) throw MalformedCertificate("pell_orbit family needs 'data'");
    const Json& d = j["data"];
    PellOrbit p;
    p.d = integer_from_json(d.at("d"));
    p.c = integer_from_json(d.at("c"));
    p.u = integer_from_json(d.at("unit").at(0));
    p.v = integer_from_json(d.at("unit").at(1));
    p.x0 = integer_from_json(d.at("base").at(0));
    p.y0 = integer_from_json(d.at("base").at(1));
    p.offset = integer_from_json(d.at("index").at("offset"));
    p.step = integer_from_json(d.at("index").at("step"));
    const Json& m = d.at("map");
    if (m.size() != 2) throw MalformedCertificate("pell_orbit map needs two variables");
    auto it = m.begin();
    p.xvar = it.key();
    p.ax = integer_from_json(it.value().at(0));
    p.bx = integer_from_json(it.value().at(1));
    ++it;
    p.yvar = it.key();
    p.ay = integer_from_json(it.value().at(0));
    p.by = integer_from_json(it.value().at(1));
    if (p.ax == 0 || p.ay == 0) throw MalformedCertificate("pell_orbit map with zero scale");
    f.pell = p;
    const Json exprs = j.value("expressions", Json::object());
    for (const auto& [v, e] : exprs.items())
      if (v != p.xvar && v != p.yvar) f.expressions[v] = ParamExpr::parse(e.get<std::string>());
    return f;
  }
  const Json exprs = j.value("expressions", Json::object());
  for (const auto& [v, e] : exprs.items()) {
    try {
      f.expressions[v] = ParamExpr::parse(e.get<std::string>());
    } catch (const std::exception& ex) {
      throw MalformedCertificate("bad family expression for " + v + ": " + ex.what());
    }
  }
  return f;
}

Json to_json(const Verdict& v, bool with_timing) {
  Json j = Json::object();
  j["status"] = status_name(v.status);
  if (v.certificate) j["certificate"] = to_json(*v.certificate);
  if (v.status == Status::Finite) {
    Json sols = Json::array();
    for (const auto& s : v.solutions) sols.push_back(assignment_json(s));
    j["solutions"] = sols;
    j["completeness"] = v.completeness;
  }
  if (v.status == Status::Family) {
    Json fams = Json::array();
    for (const auto& f : v.families) fams.push_back(to_json(f));
    j["families"] = fams;
  }
  if (with_timing || v.status == Status::Inconclusive) {
    Json tr = Json::array();
    for (const auto& t : v.trace) {
      Json e = {{"stage", t.stage}, {"outcome", t.outcome}};
      if (with_timing) e["millis"] = t.millis;
      if (!t.solutions.empty()) {
        Json sols = Json::array();
        for (const auto& s : t.solutions) sols.push_back(assignment_json(s));
        e["solutions"] = sols;
      }
      tr.push_back(e);
    }
    j["trace"] = tr;
  }
  j["stats"] = {{"evaluations", v.stats.evaluations}, {"moduli_scanned", v.stats.moduli_scanned}};
  return j;
}

Verdict verdict_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("status")) throw MalformedCertificate("verdict needs a 'status'");
  Verdict v;
  v.status = status_from_name(j["status"].get<std::string>());
  if (j.contains("certificate")) v.certificate = certificate_from_json(j["certificate"]);
  for (const auto& s : j.value("solutions", Json::array())) v.solutions.push_back(assignment_from_json(s));
  v.completeness = j.value("completeness", std::string());
  for (const auto& f : j.value("families", Json::array())) v.families.push_back(family_from_json(f));
  for (const auto& t : j.value("trace", Json::array())) {
    TraceEntry e{t.value("stage", std::string()), t.value("outcome", std::string()), t.value("millis", 0.0), {}};
    for (const auto& s : t.value("solutions", Json::array())) e.solutions.push_back(assignment_from_json(s));
    v.trace.push_back(e);
  }
  if (j.contains("stats")) {
    v.stats.evaluations = j["stats"].value("evaluations", std::uint64_t{0});
    v.stats.moduli_scanned = j["stats"].value("moduli_scanned", std::uint64_t{0});
  }
  return v;
}

}  // namespace dioph
