#include "dioph/pell.hpp"

#include <algorithm>

namespace dioph {

PellUnit fundamental_solution(const Integer& d, unsigned long prepass) {
  if (d < 2) throw PerfectSquare("d must be at least 2");
  if (is_square(d)) throw PerfectSquare("d = " + d.get_str() + " is a perfect square");
  for (unsigned long v = 1; v <= prepass; ++v) {
    Integer t = 1 + d * v * v, r;
    if (is_square(t, &r)) return {r, v};
  }
  // continued fraction of sqrt(d)
  Integer a0 = isqrt(d);
  Integer m = 0, q = 1, a = a0;
  Integer p_prev = 1, p = a0, q_prev = 0, qq = 1;
  while (true) {
    if (p * p - d * qq * qq == 1) return {p, qq};
    m = q * a - m;
    q = (d - m * m) / q;
    a = (a0 + m) / q;
    Integer p_next = a * p + p_prev;
    Integer q_next = a * qq + q_prev;
    p_prev = p;
    p = p_next;
    q_prev = qq;
    qq = q_next;
  }
}

Integer class_bound(const PellForm& form, const PellUnit& unit) {
  Integer num = abs(form.c) * 2 * unit.u;
  Integer b = ceil_div(num, form.d);
  Integer r = isqrt(b);
  if (r * r < b) r += 1;
  return r;
}

namespace {

using Pair = std::pair<Integer, Integer>;

Pair mul_unit(const Pair& a, const PellUnit& e, const Integer& d, long n) {
  Pair r = a;
  for (long i = 0; i < std::labs(n); ++i) {
    Integer v = n < 0 ? Integer(-e.v) : e.v;
    r = {r.first * e.u + d * r.second * v, r.first * v + r.second * e.u};
  }
  return r;
}

}  // namespace

PellClasses pell_classes(const PellForm& form, std::uint64_t budget, unsigned long prepass) {
  PellClasses out;
  out.unit = fundamental_solution(form.d, prepass);
  out.bound = class_bound(form, out.unit);
  if (out.bound > Integer(std::to_string(budget))) {
    out.searched = false;
    return out;
  }
  std::vector<Pair> cands;
  for (Integer y = 0; y <= out.bound; ++y) {
    Integer t = form.c + form.d * y * y, r;
    if (t < 0 || !is_square(t, &r)) continue;
    cands.push_back({r, y});
    if (r != 0) cands.push_back({-r, y});
  }
  for (const auto& b : cands) {
    bool known = false;
    for (const auto& a : out.bases) {
      for (long n = -3; n <= 3 && !known; ++n) {
        Pair m = mul_unit(a, out.unit, form.d, n);
        if (m == b || (m.first == -b.first && m.second == -b.second)) known = true;
      }
      if (known) break;
    }
    if (!known) out.bases.push_back(b);
  }
  return out;
}

namespace {

Family orbit_family(const PellForm& form, const PellUnit& unit, const Pair& base, const std::string& xvar,
                    const std::string& yvar, const Integer& ax, const Integer& bx, const Integer& ay, const Integer& by,
                    const Integer& offset, const Integer& step) {
  Family f;
  f.kind = "pell_orbit";
  f.parameters.push_back({"k", Domain::integers()});
  PellOrbit o;
  o.d = form.d;
  o.c = form.c;
  o.u = unit.u;
  o.v = unit.v;
  o.x0 = base.first;
  o.y0 = base.second;
  o.offset = offset;
  o.step = step;
  o.xvar = xvar;
  o.yvar = yvar;
  o.ax = ax;
  o.bx = bx;
  o.ay = ay;
  o.by = by;
  f.pell = o;
  return f;
}

}  // namespace

Verdict solve_pell(const PellForm& form, const std::string& xvar, const std::string& yvar) {
  PellClasses cl = pell_classes(form);
  if (!cl.searched) {
    Verdict v = Verdict::inconclusive();
    v.trace.push_back({"pell", "class search bound " + cl.bound.get_str() + " exceeds budget", 0, {}});
    return v;
  }
  if (cl.bases.empty()) {
    Certificate c;
    c.kind = "pell_empty_class";
    c.data = {{"d", integer_json(form.d)}, {"c", integer_json(form.c)}, {"bound", integer_json(cl.bound)}};
    return Verdict::no_solution(c);
  }
  std::vector<Family> fams;
  for (const auto& b : cl.bases)
    for (int s : {1, -1})
      fams.push_back(orbit_family(form, cl.unit, {b.first * s, b.second * s}, xvar, yvar, 1, 0, 1, 0, 0, 1));
  return Verdict::family(fams);
}

std::optional<PellReduction> reduce_to_pell(const NormalizedEquation& eq) {
  if (eq.variables().size() != 2) return std::nullopt;
  auto f = complete_square_reduce(eq);
  if (!f || f->terms.size() != 2) return std::nullopt;
  CenteredTerm p = f->terms[0], n = f->terms[1];
  if (p.c < 0) std::swap(p, n);
  if (p.c <= 0 || n.c >= 0) return std::nullopt;
  PellReduction r;
  r.form.d = p.c * -n.c;
  r.form.c = p.c * f->N;
  if (r.form.c == 0 || is_square(r.form.d)) return std::nullopt;
  r.xvar = p.var;
  r.yvar = n.var;
  r.ax = p.c * p.alpha;
  r.bx = p.c * p.beta;
  r.ay = n.alpha;
  r.by = n.beta;
  r.scale = f->scale * p.c;
  return r;
}

std::vector<Family> pell_families(const PellClasses& classes, const PellReduction& red, std::string* classification) {
  std::vector<Family> out;
  bool any_all = false, any_none = false, any_some = false;
  Integer L = lcm(red.ax, red.ay);
  for (const auto& b : classes.bases) {
    for (int s : {1, -1}) {
      Pair base{b.first * s, b.second * s};
      // orbit residues mod L are purely periodic since the unit is invertible
      std::vector<Pair> states;
      Pair cur{mod_floor(base.first, L), mod_floor(base.second, L)};
      Pair start = cur;
      do {
        states.push_back(cur);
        cur = {mod_floor(cur.first * classes.unit.u + red.form.d * cur.second * classes.unit.v, L),
               mod_floor(cur.first * classes.unit.v + cur.second * classes.unit.u, L)};
      } while (cur != start);
      std::vector<std::size_t> ok;
      for (std::size_t r = 0; r < states.size(); ++r)
        if (mod_floor(states[r].first - red.bx, red.ax) == 0 && mod_floor(states[r].second - red.by, red.ay) == 0)
          ok.push_back(r);
      if (ok.size() == states.size()) {
        any_all = true;
        out.push_back(orbit_family(red.form, classes.unit, base, red.xvar, red.yvar, red.ax, red.bx, red.ay, red.by, 0, 1));
      } else if (ok.empty()) {
        any_none = true;
      } else {
        any_some = true;
        for (std::size_t r : ok)
          out.push_back(orbit_family(red.form, classes.unit, base, red.xvar, red.yvar, red.ax, red.bx, red.ay, red.by,
                                     Integer(static_cast<unsigned long>(r)),
                                     Integer(static_cast<unsigned long>(states.size()))));
      }
    }
  }
  if (classification) {
    if (out.empty())
      *classification = "none";
    else if (any_all && !any_none && !any_some)
      *classification = "all";
    else
      *classification = "some";
  }
  return out;
}

BackTransform back_transform(const PellClasses& classes, const PellReduction& red, std::size_t count) {
  BackTransform bt;
  auto fams = pell_families(classes, red, &bt.classification);
  if (fams.empty()) {
    Certificate c;
    c.kind = "pell_orbit";
    c.data = {{"d", integer_json(red.form.d)},
              {"c", integer_json(red.form.c)},
              {"modulus", integer_json(lcm(red.ax, red.ay))},
              {"map",
               {{red.xvar, {integer_json(red.ax), integer_json(red.bx)}},
                {red.yvar, {integer_json(red.ay), integer_json(red.by)}}}}};
    bt.verdict = Verdict::no_solution(c);
    return bt;
  }
  std::vector<std::pair<Integer, Assignment>> members;
  for (const auto& f : fams)
    for (long k = -12; k <= 12; ++k) {
      auto a = f.materialize({{"k", k}});
      if (!a) continue;
      members.push_back({abs(red.ay * (*a)[red.yvar] + red.by), *a});
    }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  for (std::size_t i = 0; i < members.size() && bt.first.size() < count; ++i) bt.first.push_back(members[i].second);
  bt.verdict = Verdict::family(std::move(fams));
  return bt;
}

}  // namespace dioph
