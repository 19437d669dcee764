#include "dioph/parse.hpp"

#include <cctype>
#include <sstream>

namespace dioph {

namespace {

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

}  // namespace

SyntaxError::SyntaxError(std::size_t line_, std::size_t column_, std::vector<std::string> expected_,
                         const std::string& found_)
    : std::runtime_error("syntax error at line " + std::to_string(line_) + ", column " + std::to_string(column_) +
                         ": expected " + join(expected_, " or ") + ", found " + found_),
      line(line_),
      column(column_),
      expected(std::move(expected_)),
      found(found_) {}

UnknownDomainName::UnknownDomainName(std::size_t column_, const std::string& name)
    : std::runtime_error("unknown domain '" + name + "' at column " + std::to_string(column_)), column(column_) {}

namespace {

enum class Tok { Int, Ident, Word, Sym, Newline, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line, column;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto push = [&](Tok k, std::string t, std::size_t c) { out.push_back({k, std::move(t), line, c}); };
  while (i < s.size()) {
    char ch = s[i];
    if (ch == '\n') {
      push(Tok::Newline, "newline", col);
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      ++i;
      ++col;
      continue;
    }
    std::size_t start = i, scol = col;
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      push(Tok::Int, s.substr(start, i - start), scol);
    } else if (ch >= 'a' && ch <= 'z') {
      while (i < s.size() && ((s[i] >= 'a' && s[i] <= 'z') || std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '_'))
        ++i;
      push(Tok::Ident, s.substr(start, i - start), scol);
    } else if (ch >= 'A' && ch <= 'Z') {
      while (i < s.size() && std::isalnum(static_cast<unsigned char>(s[i]))) ++i;
      push(Tok::Word, s.substr(start, i - start), scol);
    } else if (std::string("+-*/^()=!;,[]").find(ch) != std::string::npos) {
      ++i;
      push(Tok::Sym, std::string(1, ch), scol);
    } else {
      throw SyntaxError(line, scol, {"token"}, std::string("'") + ch + "'");
    }
    col += i - start;
  }
  out.push_back({Tok::End, "end of input", line, col});
  return out;
}

struct Parser {
  std::vector<Token> toks;
  std::size_t pos = 0;

  const Token& peek(std::size_t ahead = 0) const { return toks[std::min(pos + ahead, toks.size() - 1)]; }
  bool is_sym(const std::string& s, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Sym && peek(ahead).text == s;
  }
  bool is_keyword(const std::string& s) const { return peek().kind == Tok::Ident && peek().text == s; }
  static std::string describe(const Token& t) {
    if (t.kind == Tok::End || t.kind == Tok::Newline) return t.text;
    return "'" + t.text + "'";
  }
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw SyntaxError(peek().line, peek().column, std::move(expected), describe(peek()));
  }
  void expect_sym(const std::string& s) {
    if (!is_sym(s)) fail({"'" + s + "'"});
    ++pos;
  }
  void skip_newlines() {
    while (peek().kind == Tok::Newline) ++pos;
  }

  RawPtr factor() {
    using K = RawExpr::Kind;
    const Token& t = peek();
    if (is_sym("-")) {
      ++pos;
      return RawExpr::node(K::Neg, {factor()});
    }
    if (t.kind == Tok::Int) {
      Integer v(t.text);
      ++pos;
      if (is_sym("^")) {
        ++pos;
        if (peek().kind == Tok::Ident && peek().text != "and" && peek().text != "in") {
          auto e = RawExpr::var(peek().text);
          e->kind = K::Exponential;
          e->value = v;
          ++pos;
          return e;
        }
        if (peek().kind == Tok::Int) {
          Integer k(peek().text);
          ++pos;
          if (!k.fits_ulong_p()) throw UnsupportedTerm("exponent too large");
          return RawExpr::integer(ipow(v, k.get_ui()));
        }
        fail({"identifier", "integer"});
      }
      return RawExpr::integer(v);
    }
    if (t.kind == Tok::Ident && t.text != "and" && t.text != "in") {
      std::string name = t.text;
      ++pos;
      if (is_sym("!")) {
        ++pos;
        auto e = RawExpr::var(name);
        e->kind = K::Factorial;
        return e;
      }
      if (is_sym("^")) {
        ++pos;
        if (peek().kind == Tok::Int) {
          auto e = RawExpr::node(K::Power, {RawExpr::var(name)});
          e->value = Integer(peek().text);
          ++pos;
          return e;
        }
        if (peek().kind == Tok::Ident) throw UnsupportedTerm(name + "^" + peek().text + ": variable exponent on a variable base");
        fail({"integer"});
      }
      return RawExpr::var(name);
    }
    if (is_sym("(")) {
      ++pos;
      RawPtr inner = expr();
      expect_sym(")");
      if (is_sym("^")) {
        ++pos;
        if (peek().kind == Tok::Int) {
          auto e = RawExpr::node(K::Power, {inner});
          e->value = Integer(peek().text);
          ++pos;
          return e;
        }
        if (peek().kind == Tok::Ident) {
          std::optional<Rational> base;
          try {
            base = evaluate_raw(*inner, {});
          } catch (const std::exception&) {
            throw UnsupportedTerm("variable exponent on a non-constant base");
          }
          if (!base || base->get_den() != 1) throw UnsupportedTerm("exponential base must be an integer");
          auto e = RawExpr::var(peek().text);
          e->kind = K::Exponential;
          e->value = base->get_num();
          ++pos;
          return e;
        }
        fail({"integer", "identifier"});
      }
      return inner;
    }
    fail({"integer", "identifier", "'('", "'-'"});
  }

  RawPtr term() {
    RawPtr left = factor();
    while (is_sym("*") || is_sym("/")) {
      auto kind = is_sym("*") ? RawExpr::Kind::Mul : RawExpr::Kind::Div;
      ++pos;
      left = RawExpr::node(kind, {left, factor()});
    }
    return left;
  }

  RawPtr expr() {
    RawPtr left = term();
    while (is_sym("+") || is_sym("-")) {
      auto kind = is_sym("+") ? RawExpr::Kind::Add : RawExpr::Kind::Sub;
      ++pos;
      left = RawExpr::node(kind, {left, term()});
    }
    return left;
  }

  RawEquation equation() {
    RawPtr l = expr();
    if (!is_sym("=")) fail({"'='", "'+'", "'-'", "'*'", "'/'"});
    ++pos;
    RawPtr r = expr();
    return {l, r};
  }

  std::vector<RawEquation> system() {
    std::vector<RawEquation> eqs;
    skip_newlines();
    eqs.push_back(equation());
    while (true) {
      if (is_keyword("and")) {
        ++pos;
        skip_newlines();
        eqs.push_back(equation());
        continue;
      }
      if (peek().kind == Tok::Newline) {
        skip_newlines();
        if (peek().kind == Tok::End || is_sym(";")) break;
        eqs.push_back(equation());
        continue;
      }
      break;
    }
    return eqs;
  }

  Integer signed_int() {
    bool neg = false;
    if (is_sym("-")) {
      neg = true;
      ++pos;
    }
    if (peek().kind != Tok::Int) fail({"integer"});
    Integer v(peek().text);
    ++pos;
    return neg ? Integer(-v) : v;
  }

  void clause(Problem& p) {
    if (peek().kind != Tok::Ident) fail({"identifier"});
    std::vector<std::string> names{peek().text};
    ++pos;
    if (is_sym("*") || is_sym("!")) {
      while (is_sym("*")) {
        ++pos;
        if (peek().kind != Tok::Ident) fail({"identifier"});
        names.push_back(peek().text);
        ++pos;
      }
      expect_sym("!");
      expect_sym("=");
      if (peek().kind != Tok::Int || Integer(peek().text) != 0) fail({"'0'"});
      ++pos;
      p.constraints.emplace_back(names.begin(), names.end());
      return;
    }
    while (is_sym(",") && peek(1).kind == Tok::Ident && peek(1).text != "in") {
      ++pos;
      names.push_back(peek().text);
      ++pos;
    }
    if (!is_keyword("in")) fail({"'in'", "','", "'*'", "'!='"});
    ++pos;
    Domain d;
    if (peek().kind == Tok::Word) {
      const std::string& w = peek().text;
      if (w == "Z")
        d = Domain::integers();
      else if (w == "N")
        d = Domain::naturals();
      else if (w == "N0")
        d = Domain::naturals0();
      else
        throw UnknownDomainName(peek().column, w);
      ++pos;
    } else if (is_sym("[")) {
      ++pos;
      Integer lo = signed_int();
      expect_sym(",");
      Integer hi = signed_int();
      expect_sym("]");
      d = Domain::interval(lo, hi);
    } else if (peek().kind == Tok::Ident) {
      throw UnknownDomainName(peek().column, peek().text);
    } else {
      fail({"domain"});
    }
    for (const auto& n : names) p.domains[n] = d;
  }

  void domainlist(Problem& p) {
    skip_newlines();
    if (peek().kind == Tok::End) return;
    clause(p);
    skip_newlines();
    while (is_sym(",")) {
      ++pos;
      skip_newlines();
      clause(p);
      skip_newlines();
    }
  }
};

void collect_vars(const RawExpr& e, std::set<std::string>& out) {
  if (!e.name.empty()) out.insert(e.name);
  for (const auto& a : e.args) collect_vars(*a, out);
}

}  // namespace

std::vector<RawEquation> parse_raw_system(const std::string& text) {
  Parser p{lex(text)};
  auto eqs = p.system();
  if (!p.is_sym(";") && p.peek().kind != Tok::End) p.fail({"'and'", "newline", "';'", "end of input"});
  return eqs;
}

RawPtr parse_expression(const std::string& text) {
  Parser p{lex(text)};
  RawPtr e = p.expr();
  if (p.peek().kind != Tok::End) p.fail({"operator", "end of input"});
  return e;
}

Problem parse_problem(const std::string& text) {
  Parser p{lex(text)};
  auto raws = p.system();
  Problem prob;
  if (p.is_sym(";")) {
    ++p.pos;
    p.domainlist(prob);
  }
  if (p.peek().kind != Tok::End) p.fail({"'and'", "';'", "','", "end of input"});
  std::set<std::string> vars;
  for (const auto& r : raws) {
    collect_vars(*r.lhs, vars);
    collect_vars(*r.rhs, vars);
    prob.equations.push_back(clear_denominators(r).equation);
  }
  for (const auto& c : prob.constraints) vars.insert(c.begin(), c.end());
  for (const auto& v : vars)
    if (!prob.domains.count(v)) prob.domains[v] = Domain::integers();
  return prob;
}

namespace {

std::string render_rational_term(const RationalTerm& t, bool with_sign_magnitude) {
  Integer num = t.coefficient.get_num(), den = t.coefficient.get_den();
  std::string s = render_monomial(with_sign_magnitude ? Integer(abs(num)) : num, t.numerator);
  if (den != 1) s += "/" + den.get_str();
  for (const auto& [v, k] : t.denominator) s += "/" + (k == 1 ? v : v + "^" + std::to_string(k));
  return s;
}

}  // namespace

std::string render_equation(const NormalizedEquation& eq) {
  if (!eq.source) return render_polynomial(eq.lhs) + " = 0";
  std::string out;
  bool first = true;
  for (const auto& t : eq.source->terms) {
    if (first) {
      out = render_rational_term(t, false);
      first = false;
    } else {
      out += t.coefficient < 0 ? " - " : " + ";
      out += render_rational_term(t, true);
    }
  }
  if (first) out = "0";
  return out + " = 0";
}

std::string render(const Problem& problem) {
  std::vector<std::string> eqs;
  for (const auto& e : problem.equations) eqs.push_back(render_equation(e));
  if (eqs.empty()) eqs.push_back("0 = 0");
  std::vector<std::pair<Domain, std::vector<std::string>>> groups;
  for (const auto& v : problem.variables()) {
    Domain d = problem.domain_of(v);
    bool placed = false;
    for (auto& [gd, names] : groups)
      if (gd == d) {
        names.push_back(v);
        placed = true;
        break;
      }
    if (!placed) groups.push_back({d, {v}});
  }
  std::vector<std::string> clauses;
  for (const auto& [d, names] : groups) clauses.push_back(join(names, ",") + " in " + d.name());
  for (const auto& c : problem.constraints) clauses.push_back(join({c.begin(), c.end()}, "*") + " != 0");
  return join(eqs, " and ") + " ; " + join(clauses, ", ");
}

std::string render_assignment(const Assignment& a) {
  std::vector<std::string> parts;
  for (const auto& [v, x] : a) parts.push_back(v + "=" + x.get_str());
  return "(" + join(parts, ", ") + ")";
}

}  // namespace dioph
