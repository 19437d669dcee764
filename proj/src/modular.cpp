#include "dioph/modular.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace dioph {

Periodicity power_periodicity(const Integer& base, unsigned long m) {
  std::map<unsigned long, unsigned long> seen;
  unsigned long b = mod_floor(base, m).get_ui();
  unsigned long x = 1 % m;
  for (unsigned long v = 0;; ++v) {
    auto [it, fresh] = seen.emplace(x, v);
    if (!fresh) return {it->second, v - it->second};
    x = static_cast<unsigned long>((static_cast<unsigned __int128>(x) * b) % m);
  }
}

namespace {

unsigned long ulcm(unsigned long a, unsigned long b) { return a / std::gcd(a, b) * b; }

bool special_occurrence(const NormalizedEquation& eq, const std::string& v) {
  return eq.lhs.occurs_exponentially(v) || eq.lhs.occurs_factorially(v);
}

Domain lookup_domain(const DomainMap& domains, const NormalizedEquation& eq, const std::string& v) {
  auto it = domains.find(v);
  if (it != domains.end()) return it->second;
  return special_occurrence(eq, v) ? Domain::naturals0() : Domain::integers();
}

}  // namespace

DomainMap effective_domains(const NormalizedEquation& eq, const DomainMap& domains) {
  DomainMap out = domains;
  for (const auto& v : eq.variables()) {
    Domain d = lookup_domain(domains, eq, v);
    if (special_occurrence(eq, v)) {
      auto lo = d.lower();
      if (!lo || *lo < 0) {
        auto hi = d.upper();
        d = hi ? Domain::interval(0, *hi) : Domain::naturals0();
      }
    }
    out[v] = d;
  }
  return out;
}

ResidueProfile residue_profile(const NormalizedEquation& eq, const std::string& var, unsigned long m,
                               const DomainMap& domains) {
  ResidueProfile p;
  p.variable = var;
  p.modulus = m;
  Domain d = lookup_domain(domains, eq, var);
  bool exp = eq.lhs.occurs_exponentially(var);
  bool fact = eq.lhs.occurs_factorially(var);
  bool poly = eq.lhs.occurs_polynomially(var);
  auto lo = d.lower();
  auto hi = d.upper();
  if (!exp && !fact) {
    p.preperiod = 0;
    p.period = m;
    p.horizon = m;
    Integer start = lo ? *lo : Integer(0);
    for (unsigned long i = 0; i < m; ++i) {
      Integer v = start + i;
      if (hi && v > *hi) break;
      p.representatives.push_back(v);
    }
    p.periodic_tail = false;
    return p;
  }
  if (!lo || *lo < 0) throw DomainUnbounded("variable " + var + " occurs as an exponent or factorial argument but may be negative");
  unsigned long P = 0, L = 1;
  for (const auto& [sig, c] : eq.lhs.terms()) {
    auto it = sig.exponentials.find(var);
    if (it == sig.exponentials.end()) continue;
    Periodicity per = power_periodicity(it->second, m);
    P = std::max(P, per.preperiod);
    L = ulcm(L, per.period);
  }
  if (fact) P = std::max(P, m);
  if (poly) L = ulcm(L, m);
  p.preperiod = P;
  p.period = L;
  p.horizon = P + L;
  Integer start = *lo;
  Integer end = std::max(start, Integer(P)) + L;  // exclusive
  p.periodic_tail = !hi || *hi >= end;
  for (Integer v = start; v < end; ++v) {
    if (hi && v > *hi) break;
    p.representatives.push_back(v);
  }
  return p;
}

namespace {

struct Bits {
  unsigned long n = 0;
  std::vector<std::uint64_t> w;
  explicit Bits(unsigned long size = 0) : n(size), w((size + 63) / 64, 0) {}
  bool get(unsigned long i) const { return (w[i / 64] >> (i % 64)) & 1u; }
  void set(unsigned long i) { w[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool any() const {
    for (auto x : w)
      if (x) return true;
    return false;
  }
};

/// dst |= src rotated up by g (mod n).
void rotate_or(Bits& dst, const Bits& src, unsigned long g) {
  const unsigned long n = src.n;
  if (g == 0) {
    for (std::size_t i = 0; i < dst.w.size(); ++i) dst.w[i] |= src.w[i];
    return;
  }
  if (n <= 256) {
    for (unsigned long i = 0; i < n; ++i)
      if (src.get(i)) dst.set((i + g) % n);
    return;
  }
  // bits i < n-g move to i+g; bits i >= n-g move to i+g-n
  auto shift_into = [&](unsigned long from_lo, unsigned long from_hi, long delta) {
    for (unsigned long i = from_lo; i < from_hi;) {
      if (i % 64 == 0 && i + 64 <= from_hi && src.w[i / 64] == 0) {
        i += 64;
        continue;
      }
      if (src.get(i)) dst.set(static_cast<unsigned long>(static_cast<long>(i) + delta));
      ++i;
    }
  };
  shift_into(0, n - g, static_cast<long>(g));
  shift_into(n - g, n, static_cast<long>(g) - static_cast<long>(n));
}

struct Factor {
  std::size_t var;
  std::vector<unsigned long> residues;  // per representative
};

struct Mono {
  unsigned long coef;
  std::vector<Factor> factors;
};

struct Context {
  unsigned long m = 2;
  std::vector<std::string> vars;
  std::vector<ResidueProfile> profiles;
  unsigned long constant = 0;
  std::vector<Mono> monos;
  bool separable = true;
  std::vector<std::vector<unsigned long>> contribution;  // separable: per var, per rep

  Context(const NormalizedEquation& eq, unsigned long m_, const DomainMap& domains) : m(m_) {
    for (const auto& v : eq.variables()) {
      vars.push_back(v);
      profiles.push_back(residue_profile(eq, v, m, domains));
    }
    auto index = [&](const std::string& v) {
      return static_cast<std::size_t>(std::find(vars.begin(), vars.end(), v) - vars.begin());
    };
    Integer mm(m);
    for (const auto& [sig, c] : eq.lhs.terms()) {
      unsigned long cm = mod_floor(c, mm).get_ui();
      if (sig.is_constant()) {
        constant = cm;
        continue;
      }
      Mono mono{cm, {}};
      for (const auto& v : sig.variables()) {
        std::size_t j = index(v);
        Factor f{j, {}};
        auto pw = sig.powers.find(v);
        auto ex = sig.exponentials.find(v);
        bool fa = sig.factorials.count(v) > 0;
        for (const auto& rep : profiles[j].representatives) {
          Integer r = 1;
          if (pw != sig.powers.end()) {
            Integer t;
            Integer rr = mod_floor(rep, mm);
            mpz_powm_ui(t.get_mpz_t(), rr.get_mpz_t(), pw->second, mm.get_mpz_t());
            r = r * t % mm;
          }
          if (ex != sig.exponentials.end()) {
            Integer t, b = mod_floor(ex->second, mm);
            mpz_powm(t.get_mpz_t(), b.get_mpz_t(), rep.get_mpz_t(), mm.get_mpz_t());
            r = r * t % mm;
          }
          if (fa) {
            Integer t = 1 % mm;
            if (rep >= mm) {
              t = 0;
            } else {
              for (unsigned long i = 2; i <= rep.get_ui(); ++i) t = t * i % mm;
            }
            r = r * t % mm;
          }
          f.residues.push_back(mod_floor(r, mm).get_ui());
        }
        mono.factors.push_back(std::move(f));
      }
      if (mono.factors.size() > 1) separable = false;
      monos.push_back(std::move(mono));
    }
    if (separable) {
      contribution.resize(vars.size());
      for (std::size_t j = 0; j < vars.size(); ++j) contribution[j].assign(profiles[j].representatives.size(), 0);
      for (const auto& mono : monos) {
        const Factor& f = mono.factors[0];
        for (std::size_t r = 0; r < f.residues.size(); ++r)
          contribution[f.var][r] = (contribution[f.var][r] + mono.coef * f.residues[r]) % m;
      }
    }
  }

  using Allowed = std::vector<std::vector<char>>;  // per var, per rep; empty = all

  bool allowed(const Allowed& a, std::size_t j, std::size_t r) const {
    return a.empty() || a[j].empty() || a[j][r];
  }

  std::uint64_t product(const Allowed& a, std::size_t upto) const {
    std::uint64_t p = 1;
    for (std::size_t j = 0; j < upto; ++j) {
      std::uint64_t k = 0;
      for (std::size_t r = 0; r < profiles[j].representatives.size(); ++r) k += allowed(a, j, r);
      if (k == 0) return 0;
      if (p > (std::uint64_t{1} << 62) / k) return std::uint64_t{1} << 62;
      p *= k;
    }
    return p;
  }

  bool exists(const Allowed& a, std::uint64_t budget, std::uint64_t* checked) {
    if (vars.empty()) {
      if (checked) *checked += 1;
      return constant % m == 0;
    }
    if (separable) {
      Bits reach(m);
      reach.set(constant % m);
      std::uint64_t work = 0;
      for (std::size_t j = 0; j < vars.size(); ++j) {
        std::vector<char> seen(m, 0);
        Bits next(m);
        for (std::size_t r = 0; r < contribution[j].size(); ++r) {
          if (!allowed(a, j, r)) continue;
          unsigned long g = contribution[j][r];
          if (seen[g]) continue;
          seen[g] = 1;
          rotate_or(next, reach, g);
          ++work;
        }
        reach = std::move(next);
        if (!reach.any()) break;
      }
      if (checked) *checked += product(a, vars.size());
      return reach.any() && reach.get(0);
    }
    std::uint64_t total = product(a, vars.size());
    if (total > budget) throw StateBudgetExceeded("state space exceeds budget");
    bool found = false;
    enumerate(a, [&](const std::vector<std::size_t>&) {
      found = true;
      return false;
    }, checked);
    return found;
  }

  /// Calls visit(rep indices) for each satisfying state; visit returns false to stop.
  void enumerate(const Allowed& a, const std::function<bool(const std::vector<std::size_t>&)>& visit,
                 std::uint64_t* checked) {
    const std::size_t n = vars.size();
    std::vector<std::size_t> idx(n, 0);
    if (n == 0) {
      if (checked) *checked += 1;
      if (constant % m == 0) visit(idx);
      return;
    }
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> by_var(n);  // (mono, factor)
    for (std::size_t i = 0; i < monos.size(); ++i)
      for (std::size_t k = 0; k < monos[i].factors.size(); ++k) by_var[monos[i].factors[k].var].push_back({i, k});
    std::vector<unsigned long> partial(monos.size());
    for (std::size_t i = 0; i < monos.size(); ++i) partial[i] = monos[i].coef;
    bool stop = false;

    if (separable) {
      // last variable by lookup
      const std::size_t last = n - 1;
      std::vector<std::vector<std::size_t>> lookup(m);
      for (std::size_t r = 0; r < contribution[last].size(); ++r)
        if (allowed(a, last, r)) lookup[contribution[last][r]].push_back(r);
      std::function<void(std::size_t, unsigned long)> rec = [&](std::size_t j, unsigned long acc) {
        if (stop) return;
        if (j == last) {
          if (checked) *checked += 1;
          unsigned long need = (m - acc % m) % m;
          for (std::size_t r : lookup[need]) {
            idx[last] = r;
            if (!visit(idx)) {
              stop = true;
              return;
            }
          }
          return;
        }
        for (std::size_t r = 0; r < contribution[j].size() && !stop; ++r) {
          if (!allowed(a, j, r)) continue;
          idx[j] = r;
          rec(j + 1, (acc + contribution[j][r]) % m);
        }
      };
      rec(0, constant % m);
      return;
    }

    std::function<void(std::size_t)> rec = [&](std::size_t j) {
      if (stop) return;
      if (j == n) {
        if (checked) *checked += 1;
        unsigned long s = constant;
        for (auto x : partial) s = (s + x) % m;
        if (s == 0 && !visit(idx)) stop = true;
        return;
      }
      std::vector<unsigned long> saved;
      saved.reserve(by_var[j].size());
      for (auto [i, k] : by_var[j]) saved.push_back(partial[i]);
      for (std::size_t r = 0; r < profiles[j].representatives.size() && !stop; ++r) {
        if (!allowed(a, j, r)) continue;
        idx[j] = r;
        for (std::size_t q = 0; q < by_var[j].size(); ++q) {
          auto [i, k] = by_var[j][q];
          partial[i] = static_cast<unsigned long>(
              static_cast<unsigned __int128>(saved[q]) * monos[i].factors[k].residues[r] % m);
        }
        rec(j + 1);
      }
      for (std::size_t q = 0; q < by_var[j].size(); ++q) partial[by_var[j][q].first] = saved[q];
    };
    rec(0);
  }

  std::uint64_t listing_cost(const Allowed& a) const {
    if (separable && !vars.empty()) return product(a, vars.size() - 1);
    return product(a, vars.size());
  }
};

}  // namespace

StateSpace satisfying_states(const NormalizedEquation& eq, unsigned long m, const DomainMap& domains,
                             std::uint64_t budget) {
  Context ctx(eq, m, domains);
  StateSpace out;
  out.variables = ctx.vars;
  out.profiles = ctx.profiles;
  if (ctx.listing_cost({}) > budget) throw StateBudgetExceeded("state space exceeds budget");
  ctx.enumerate({}, [&](const std::vector<std::size_t>& idx) {
    State s;
    for (std::size_t j = 0; j < idx.size(); ++j) s.push_back(ctx.profiles[j].representatives[idx[j]]);
    out.states.push_back(std::move(s));
    return true;
  }, &out.checked);
  std::sort(out.states.begin(), out.states.end());
  return out;
}

bool has_satisfying_state(const NormalizedEquation& eq, unsigned long m, const DomainMap& domains,
                          std::uint64_t budget, std::uint64_t* checked) {
  Context ctx(eq, m, domains);
  return ctx.exists({}, budget, checked);
}

std::vector<unsigned long> default_moduli(unsigned long max_modulus) {
  std::vector<unsigned long> out;
  for (unsigned long m = 2; m <= max_modulus; ++m) out.push_back(m);
  return out;
}

ObstructionScan find_obstruction(const NormalizedEquation& eq, const std::vector<unsigned long>& moduli,
                                 const DomainMap& domains, std::uint64_t budget) {
  ObstructionScan scan;
  for (unsigned long m : moduli) {
    ++scan.scanned;
    std::uint64_t checked = 0;
    try {
      if (!has_satisfying_state(eq, m, domains, budget, &checked)) {
        std::string note;
        for (const auto& v : eq.variables()) {
          Domain d = lookup_domain(domains, eq, v);
          if (d.kind != Domain::Kind::Z) note += (note.empty() ? "" : ", ") + v + " in " + d.name();
        }
        scan.certificate = ModularCertificate{m, checked, note};
        return scan;
      }
    } catch (const StateBudgetExceeded&) {
      scan.skipped.push_back(m);
    }
  }
  return scan;
}

bool ResidueClasses::admits(const Integer& v) const {
  if (has_tail && (!threshold || v >= *threshold)) return residues.count(mod_floor(v, Integer(period)).get_ui()) > 0;
  return exact.count(v) > 0;
}

bool ResidueClasses::unrestricted() const {
  if (!has_tail || threshold) return false;
  return residues.size() == period;
}

std::string ResidueClasses::describe(const std::string& var) const {
  std::ostringstream os;
  bool first = true;
  if (!exact.empty()) {
    os << var << " in {";
    for (const auto& v : exact) {
      os << (first ? "" : ",") << v.get_str();
      first = false;
    }
    os << "}";
  }
  if (has_tail) {
    if (!exact.empty()) os << " or ";
    if (threshold) os << var << " >= " << threshold->get_str() << " with ";
    os << var << " mod " << period << " in {";
    bool f = true;
    for (auto r : residues) {
      os << (f ? "" : ",") << r;
      f = false;
    }
    os << "}";
  }
  return os.str();
}

CongruenceReport congruence_constraints(const NormalizedEquation& eq, unsigned long m, const DomainMap& domains,
                                        std::uint64_t budget) {
  CongruenceReport rep;
  rep.modulus = m;
  rep.space = satisfying_states(eq, m, domains, budget);
  for (std::size_t j = 0; j < rep.space.variables.size(); ++j) {
    const auto& prof = rep.space.profiles[j];
    ResidueClasses rc;
    bool special = prof.preperiod > 0 || special_occurrence(eq, prof.variable);
    if (!special) {
      // purely polynomial: classes mod m over all values, or explicit values for a short interval
      if (prof.representatives.size() == m) {
        rc.has_tail = true;
        rc.period = m;
        for (const auto& s : rep.space.states) rc.residues.insert(mod_floor(s[j], Integer(m)).get_ui());
      } else {
        for (const auto& s : rep.space.states) rc.exact.insert(s[j]);
      }
    } else {
      rc.has_tail = prof.periodic_tail;
      rc.period = prof.period;
      Integer start = prof.representatives.empty() ? Integer(0) : prof.representatives.front();
      Integer thr = std::max(start, Integer(prof.preperiod));
      if (rc.has_tail) rc.threshold = thr;
      for (const auto& s : rep.space.states) {
        if (rc.has_tail && s[j] >= thr)
          rc.residues.insert(mod_floor(s[j], Integer(prof.period)).get_ui());
        else
          rc.exact.insert(s[j]);
      }
      if (rc.has_tail && rc.threshold && *rc.threshold == 0) rc.threshold.reset();
    }
    rep.classes[prof.variable] = rc;
  }
  return rep;
}

namespace {

struct BoundSearch {
  const NormalizedEquation& eq;
  const DomainMap& domains;
  std::uint64_t budget;

  /// Smallest candidate subset with no satisfying state that has all of its variables in the periodic tail.
  std::optional<std::vector<std::size_t>> forced_set(Context& ctx, const std::vector<std::size_t>& cands) {
    const std::size_t k = cands.size();
    std::vector<std::vector<char>> tail(ctx.vars.size());
    for (std::size_t c : cands) {
      const auto& prof = ctx.profiles[c];
      tail[c].resize(prof.representatives.size());
      for (std::size_t r = 0; r < prof.representatives.size(); ++r)
        tail[c][r] = prof.representatives[r] >= Integer(prof.preperiod);
    }
    for (std::size_t size = 1; size <= k; ++size) {
      std::vector<char> pick(k, 0);
      std::fill(pick.begin(), pick.begin() + static_cast<long>(size), 1);
      do {
        Context::Allowed a(ctx.vars.size());
        std::vector<std::size_t> subset;
        for (std::size_t i = 0; i < k; ++i)
          if (pick[i]) {
            a[cands[i]] = tail[cands[i]];
            subset.push_back(cands[i]);
          }
        if (!ctx.exists(a, budget, nullptr)) return subset;
      } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    return std::nullopt;
  }
};

}  // namespace

std::optional<ModularBound> find_modular_bound(const NormalizedEquation& eq, const DomainMap& domains,
                                               unsigned long max_modulus, std::uint64_t budget,
                                               std::uint64_t* scanned) {
  DomainMap doms = effective_domains(eq, domains);
  std::vector<std::string> special;
  for (const auto& v : eq.variables())
    if (special_occurrence(eq, v) && !doms[v].upper()) special.push_back(v);
  if (special.empty()) return std::nullopt;
  BoundSearch bs{eq, doms, budget};
  for (unsigned long m = 2; m <= max_modulus; ++m) {
    if (scanned) ++*scanned;
    try {
      // skip moduli where no candidate has a nontrivial preperiod
      bool useful = false;
      for (const auto& v : special) {
        for (const auto& [sig, c] : eq.lhs.terms()) {
          auto it = sig.exponentials.find(v);
          if (it != sig.exponentials.end() && gcd(it->second, Integer(m)) > 1) useful = true;
          if (sig.factorials.count(v)) useful = true;
        }
      }
      if (!useful) continue;
      Context ctx(eq, m, doms);
      std::vector<std::size_t> cands;
      for (std::size_t j = 0; j < ctx.vars.size(); ++j) {
        const auto& prof = ctx.profiles[j];
        if (prof.periodic_tail && prof.preperiod > 0 &&
            std::find(special.begin(), special.end(), ctx.vars[j]) != special.end() &&
            !prof.representatives.empty() && prof.representatives.front() < Integer(prof.preperiod))
          cands.push_back(j);
      }
      if (cands.empty()) continue;
      if (!ctx.separable && ctx.product({}, ctx.vars.size()) > budget) continue;
      auto set = bs.forced_set(ctx, cands);
      if (!set) continue;
      ModularBound b;
      b.modulus = m;
      for (std::size_t j : *set) b.forced[ctx.vars[j]] = ctx.profiles[j].preperiod;
      return b;
    } catch (const StateBudgetExceeded&) {
      continue;
    }
  }
  return std::nullopt;
}

bool check_modular_bound(const NormalizedEquation& eq, const DomainMap& domains, const ModularBound& b,
                         std::uint64_t budget) {
  if (b.modulus < 2) return false;
  DomainMap doms = effective_domains(eq, domains);
  try {
    Context ctx(eq, b.modulus, doms);
    Context::Allowed a(ctx.vars.size());
    for (const auto& [v, P] : b.forced) {
      auto it = std::find(ctx.vars.begin(), ctx.vars.end(), v);
      if (it == ctx.vars.end()) return false;
      std::size_t j = static_cast<std::size_t>(it - ctx.vars.begin());
      const auto& prof = ctx.profiles[j];
      if (!prof.periodic_tail || prof.preperiod != P) return false;
      a[j].resize(prof.representatives.size());
      for (std::size_t r = 0; r < prof.representatives.size(); ++r)
        a[j][r] = prof.representatives[r] >= Integer(P);
    }
    return !ctx.exists(a, budget, nullptr);
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace dioph
