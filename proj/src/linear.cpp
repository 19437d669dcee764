#include "dioph/linear.hpp"

#include <algorithm>

namespace dioph {

ExtendedGcd extended_gcd(const Integer& a, const Integer& b) {
  if (a == 0 && b == 0) throw BothZero("extended_gcd(0, 0)");
  Integer r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    Integer q = floor_div(r0, r1);
    Integer r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    Integer s2 = s0 - q * s1;
    s0 = s1;
    s1 = s2;
    Integer t2 = t0 - q * t1;
    t0 = t1;
    t1 = t2;
  }
  if (r0 < 0) {
    r0 = -r0;
    s0 = -s0;
    t0 = -t0;
  }
  return {r0, s0, t0};
}

Vector AffineLattice::member(const std::vector<Integer>& t) const {
  Vector x = particular;
  for (std::size_t j = 0; j < basis.size() && j < t.size(); ++j)
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += t[j] * basis[j][i];
  return x;
}

namespace {

Matrix identity(std::size_t n) {
  Matrix I(n, Vector(n, 0));
  for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

/// Row echelon form of the rows with positive pivots, entries above pivots reduced.
void hermite_rows(std::vector<Vector>& rows) {
  if (rows.empty()) return;
  const std::size_t n = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i)
        if (rows[i][c] != 0 && (best == rows.size() || abs(rows[i][c]) < abs(rows[best][c]))) best = i;
      if (best == rows.size()) break;
      std::swap(rows[r], rows[best]);
      bool clean = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][c] == 0) continue;
        Integer q = floor_div(rows[i][c], rows[r][c]);
        for (std::size_t k = 0; k < n; ++k) rows[i][k] -= q * rows[r][k];
        if (rows[i][c] != 0) clean = false;
      }
      if (clean) break;
    }
    if (rows[r][c] == 0) continue;
    if (rows[r][c] < 0)
      for (auto& x : rows[r]) x = -x;
    for (std::size_t i = 0; i < r; ++i) {
      Integer q = floor_div(rows[i][c], rows[r][c]);
      if (q != 0)
        for (std::size_t k = 0; k < n; ++k) rows[i][k] -= q * rows[r][k];
    }
    ++r;
  }
  rows.resize(r);
}

}  // namespace

LinearSolution solve_linear_lattice(const Matrix& A, const Vector& b) {
  const std::size_t m = A.size();
  const std::size_t n = m ? A[0].size() : 0;
  Matrix D = A, P = identity(m), Q = identity(n);
  std::size_t t = 0;
  auto swap_rows = [&](std::size_t i, std::size_t j) {
    std::swap(D[i], D[j]);
    std::swap(P[i], P[j]);
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    for (auto& row : D) std::swap(row[i], row[j]);
    for (auto& row : Q) std::swap(row[i], row[j]);
  };
  while (t < std::min(m, n)) {
    std::size_t bi = m, bj = n;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (D[i][j] != 0 && (bi == m || abs(D[i][j]) < abs(D[bi][bj]))) {
          bi = i;
          bj = j;
        }
    if (bi == m) break;
    swap_rows(t, bi);
    swap_cols(t, bj);
    while (true) {
      bool done = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (D[i][t] == 0) continue;
        Integer q = floor_div(D[i][t], D[t][t]);
        for (std::size_t k = 0; k < n; ++k) D[i][k] -= q * D[t][k];
        for (std::size_t k = 0; k < m; ++k) P[i][k] -= q * P[t][k];
        if (D[i][t] != 0) done = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (D[t][j] == 0) continue;
        Integer q = floor_div(D[t][j], D[t][t]);
        for (std::size_t k = 0; k < m; ++k) D[k][j] -= q * D[k][t];
        for (std::size_t k = 0; k < n; ++k) Q[k][j] -= q * Q[k][t];
        if (D[t][j] != 0) done = false;
      }
      if (done) break;
      std::size_t si = t, sj = t;
      for (std::size_t i = t + 1; i < m; ++i)
        if (D[i][t] != 0 && abs(D[i][t]) < abs(D[si][sj])) {
          si = i;
          sj = t;
        }
      for (std::size_t j = t + 1; j < n; ++j)
        if (D[t][j] != 0 && abs(D[t][j]) < abs(D[si][sj])) {
          si = t;
          sj = j;
        }
      if (si != t) swap_rows(t, si);
      if (sj != t) swap_cols(t, sj);
    }
    if (D[t][t] < 0) {
      for (auto& x : D[t]) x = -x;
      for (auto& x : P[t]) x = -x;
    }
    ++t;
  }
  const std::size_t rank = t;
  Vector Pb(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k) Pb[i] += P[i][k] * b[k];
  LinearSolution sol;
  for (std::size_t i = 0; i < m; ++i) {
    Integer d = i < rank ? D[i][i] : Integer(0);
    bool bad = d == 0 ? Pb[i] != 0 : Pb[i] % d != 0;
    if (bad) {
      sol.lambda = P[i];
      sol.g = d == 0 ? Integer(abs(Pb[i]) + 1) : d;
      return sol;
    }
  }
  Vector y(n, 0);
  for (std::size_t i = 0; i < rank; ++i) y[i] = Pb[i] / D[i][i];
  AffineLattice lat;
  lat.particular.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) lat.particular[i] += Q[i][k] * y[k];
  for (std::size_t j = rank; j < n; ++j) {
    Vector g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = Q[i][j];
    lat.basis.push_back(g);
  }
  hermite_rows(lat.basis);
  // reduce the particular solution against the echelon basis
  for (const auto& g : lat.basis) {
    std::size_t c = 0;
    while (g[c] == 0) ++c;
    Integer q = floor_div(lat.particular[c], g[c]);
    for (std::size_t i = 0; i < n; ++i) lat.particular[i] -= q * g[i];
  }
  sol.lattice = lat;
  return sol;
}

bool check_linear_certificate(const Matrix& A, const Vector& b, const Vector& lambda, const Integer& g) {
  if (g <= 1 || lambda.size() != A.size() || b.size() != A.size()) return false;
  const std::size_t n = A.empty() ? 0 : A[0].size();
  for (std::size_t j = 0; j < n; ++j) {
    Integer s = 0;
    for (std::size_t i = 0; i < A.size(); ++i) s += lambda[i] * A[i][j];
    if (s % g != 0) return false;
  }
  Integer s = 0;
  for (std::size_t i = 0; i < A.size(); ++i) s += lambda[i] * b[i];
  return s % g != 0;
}

Family lattice_family(const AffineLattice& lat, const std::vector<std::string>& names, const std::string& prefix) {
  Family f;
  f.kind = "affine_lattice";
  std::vector<std::string> params;
  for (std::size_t j = 0; j < lat.basis.size(); ++j) {
    std::string p = lat.basis.size() == 1 ? prefix : prefix + std::to_string(j + 1);
    params.push_back(p);
    f.parameters.push_back({p, Domain::integers()});
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    Polynomial e = Polynomial::constant(lat.particular[i]);
    for (std::size_t j = 0; j < lat.basis.size(); ++j) e = e + Polynomial::variable(params[j]) * lat.basis[j][i];
    f.expressions[names[i]] = {e, 1};
  }
  return f;
}

namespace {

std::vector<std::string> default_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("x" + std::to_string(i + 1));
  return out;
}

Json vector_json(const Vector& v) {
  Json j = Json::array();
  for (const auto& x : v) j.push_back(integer_json(x));
  return j;
}

}  // namespace

Verdict solve_linear_system(const Matrix& A, const Vector& b, const std::vector<std::string>& names_in) {
  const std::size_t n = A.empty() ? 0 : A[0].size();
  auto names = names_in.empty() ? default_names(n) : names_in;
  LinearSolution s = solve_linear_lattice(A, b);
  if (!s.lattice) {
    Certificate c;
    c.kind = "gcd_linear";
    c.modulus = s.g;
    c.data = {{"g", integer_json(s.g)}, {"lambda", vector_json(s.lambda)}};
    return Verdict::no_solution(c);
  }
  if (s.lattice->basis.empty()) {
    Assignment a;
    for (std::size_t i = 0; i < n; ++i) a[names[i]] = s.lattice->particular[i];
    return Verdict::finite({a}, "linear-algebra");
  }
  return Verdict::family({lattice_family(*s.lattice, names)});
}

Verdict solve_linear(const Vector& a, const Integer& b, const std::vector<std::string>& names) {
  return solve_linear_system({a}, {b}, names);
}

std::optional<LinearSystem> as_linear_system(const std::vector<NormalizedEquation>& eqs) {
  LinearSystem sys;
  std::set<std::string> vars;
  for (const auto& e : eqs) {
    if (!e.lhs.is_polynomial_only() || e.lhs.degree() > 1) return std::nullopt;
    for (const auto& v : e.variables()) vars.insert(v);
  }
  sys.variables.assign(vars.begin(), vars.end());
  for (const auto& e : eqs) {
    Vector row(sys.variables.size(), 0);
    for (std::size_t i = 0; i < sys.variables.size(); ++i) {
      Signature s;
      s.powers[sys.variables[i]] = 1;
      row[i] = e.lhs.coefficient(s);
    }
    sys.A.push_back(row);
    sys.b.push_back(-e.constant());
  }
  return sys;
}

}  // namespace dioph
