#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "dioph/corpus.hpp"

using namespace dioph;

namespace {

std::string shipped_corpus() {
  std::ifstream in(DIOPH_CORPUS_FILE);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Config fast() {
  Config c;
  c.timeout_ms = 5000;
  return c;
}

}  // namespace

TEST(Toml, ScalarsStringsAndArrays) {
  auto t = parse_toml_tables(R"(# leading comment
[[case]]
a = "x \"q\" \\ y"   # trailing
b = 'raw \n'
c = 1_000
d = -7
e = true
f = 2.5
g = ["p", 'q',
     "r",   # inside
]
h = [1, -2, 3]
i = """
line one
line two"""
"quoted key" = []

[[case]]
a = "second"
)");
  ASSERT_EQ(t.size(), 1u);
  const auto& list = t.at("case");
  ASSERT_EQ(list.size(), 2u);
  const auto& c = list[0];
  EXPECT_EQ(std::get<std::string>(c.at("a")), "x \"q\" \\ y");
  EXPECT_EQ(std::get<std::string>(c.at("b")), "raw \\n");
  EXPECT_EQ(std::get<long>(c.at("c")), 1000);
  EXPECT_EQ(std::get<long>(c.at("d")), -7);
  EXPECT_TRUE(std::get<bool>(c.at("e")));
  EXPECT_DOUBLE_EQ(std::get<double>(c.at("f")), 2.5);
  EXPECT_EQ(std::get<std::vector<std::string>>(c.at("g")), (std::vector<std::string>{"p", "q", "r"}));
  EXPECT_EQ(std::get<std::vector<long>>(c.at("h")), (std::vector<long>{1, -2, 3}));
  EXPECT_EQ(std::get<std::string>(c.at("i")), "line one\nline two");
  EXPECT_TRUE(std::get<std::vector<std::string>>(c.at("quoted key")).empty());
  EXPECT_EQ(std::get<std::string>(list[1].at("a")), "second");
}

TEST(Toml, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_toml_tables(text);
    } catch (const CorpusError& e) {
      return e.line;
    }
    return 0;
  };
  EXPECT_EQ(line_of("[[case]]\nname = \"open\n"), 2u);
  EXPECT_EQ(line_of("[[case]]\n\nx 1\n"), 3u);
  EXPECT_EQ(line_of("k = 1\n"), 1u);
  EXPECT_EQ(line_of("[[case]]\nk = 1\nk = 2\n"), 3u);
  EXPECT_EQ(line_of("[table]\n"), 1u);
  EXPECT_EQ(line_of("[[case]]\nk = [1, \"a\"]\n"), 2u);
  EXPECT_EQ(line_of("[[case]]\nk = \"\"\"\nnever closed\n"), 4u);
  EXPECT_EQ(line_of("[[case]]\nk = 12abc\n"), 2u);
}

TEST(Corpus, RangesAndAssignments) {
  EXPECT_EQ(parse_range("-3..7"), std::make_pair(Integer(-3), Integer(7)));
  EXPECT_EQ(parse_range(" 0 .. 0 "), std::make_pair(Integer(0), Integer(0)));
  EXPECT_FALSE(parse_range("5"));
  EXPECT_FALSE(parse_range("4..1"));
  EXPECT_FALSE(parse_range("a..b"));
  Assignment a = parse_assignment("x=1, y = -20, z=123456789012345678901234567890");
  EXPECT_EQ(a.at("y"), -20);
  EXPECT_EQ(a.at("z"), Integer("123456789012345678901234567890"));
  EXPECT_THROW(parse_assignment("x"), std::invalid_argument);
  EXPECT_THROW(parse_assignment("x=q"), std::invalid_argument);
}

TEST(Corpus, CaseFieldsValidated) {
  auto cases = parse_corpus(R"([[case]]
name = "n"
problem = "x = 1"
expect = "finite"
solutions = ["x=1"]
box = "-2..2"
timeout_ms = 100
max_modulus = 9
note = "free text"
)");
  ASSERT_EQ(cases.size(), 1u);
  EXPECT_EQ(cases[0].box, std::make_pair(Integer(-2), Integer(2)));
  EXPECT_EQ(cases[0].timeout_ms, 100);
  EXPECT_EQ(cases[0].max_modulus, 9u);
  ASSERT_TRUE(cases[0].solutions);
  EXPECT_EQ(cases[0].solutions->size(), 1u);

  EXPECT_THROW(parse_corpus("[[case]]\nname = \"a\"\nproblem = \"x=1\"\nexpect = \"maybe\"\n"), CorpusError);
  EXPECT_THROW(parse_corpus("[[case]]\nname = \"a\"\nproblem = \"x=1\"\n"), CorpusError);
  EXPECT_THROW(parse_corpus("[[case]]\nname = \"a\"\nproblem = \"x=1\"\nexpect = \"finite\"\ncolour = 1\n"), CorpusError);
  EXPECT_THROW(parse_corpus("[[case]]\nname = \"a\"\nproblem = \"x=1\"\nexpect = \"finite\"\ncount = \"2\"\n"),
               CorpusError);
  EXPECT_THROW(parse_corpus("[[case]]\nname = \"a\"\nproblem = \"x=1\"\nexpect = \"finite\"\nbox = \"3\"\n"), CorpusError);
  EXPECT_THROW(parse_corpus("[[other]]\nname = \"a\"\n"), CorpusError);
}

TEST(Corpus, EmptyFileHasNoCases) {
  EXPECT_TRUE(parse_corpus("").empty());
  EXPECT_TRUE(parse_corpus("# only a comment\n\n").empty());
  auto report = corpus_report({});
  EXPECT_EQ(report["total"], 0);
  EXPECT_EQ(report["failed"], 0);
}

TEST(Corpus, WrongExpectationIsOneFailure) {
  auto cases = parse_corpus(R"([[case]]
name = "right"
problem = "4^x - 3^y = 1"
expect = "finite"
solutions = ["x=1, y=1"]

[[case]]
name = "wrong"
problem = "4^x - 3^y = 1"
expect = "finite"
solutions = ["x=0, y=0"]

[[case]]
name = "also-right"
problem = "15*x^2 - 35*y^3 = 10"
expect = "no_solution"
certificate = "modular"
max_modulus_cert = 7
)");
  auto results = run_corpus(cases, fast());
  ASSERT_EQ(results.size(), 3u);
  EXPECT_TRUE(results[0].passed) << results[0].detail;
  EXPECT_FALSE(results[1].passed);
  EXPECT_NE(results[1].detail.find("solutions differ"), std::string::npos);
  EXPECT_TRUE(results[2].passed) << results[2].detail;
  EXPECT_EQ(corpus_report(results)["failed"], 1);
}

TEST(Corpus, ComparisonBranches) {
  auto one = [](const std::string& body) {
    auto cases = parse_corpus("[[case]]\nname = \"c\"\n" + body);
    return run_case(cases.at(0), fast());
  };
  EXPECT_TRUE(one("problem = \"x^2 + y^2 = 25\"\nexpect = \"finite\"\ncount = 12\n").passed);
  EXPECT_FALSE(one("problem = \"x^2 + y^2 = 25\"\nexpect = \"finite\"\ncount = 8\n").passed);
  // within_box restricts the comparison to small values
  EXPECT_TRUE(one("problem = \"x^2 + y^2 = 25\"\nexpect = \"finite\"\nwithin_box = \"0..4\"\n"
                  "solutions = [\"x=3, y=4\", \"x=4, y=3\"]\n")
                  .passed);
  EXPECT_FALSE(one("problem = \"x^2 + y^2 = 25\"\nexpect = \"no_solution\"\n").passed);
  EXPECT_FALSE(one("problem = \"x^2 + y^2 + 1 = 0\"\nexpect = \"no_solution\"\ncertificate = \"modular\"\n").passed);
  EXPECT_TRUE(one("problem = \"x/y + y/x = 1\"\nexpect = \"finite\"\nsolutions = []\n").passed);
  EXPECT_TRUE(one("problem = \"2*x + 3*y = 1\"\nexpect = \"family\"\ncount = 1\n").passed);
  EXPECT_FALSE(one("problem = \"2*x + 3*y = 1\"\nexpect = \"family\"\ncount = 2\n").passed);
  EXPECT_FALSE(one("problem = \"2*x + 3*y = 1\"\nexpect = \"finite\"\n").passed);
  auto bad = one("problem = \"x^^2\"\nexpect = \"finite\"\n");
  EXPECT_FALSE(bad.passed);
  EXPECT_EQ(bad.detail.rfind("error:", 0), 0u);
  // an inconclusive run passes only when the found solutions match the list
  const std::string inc = "problem = \"x^3 + y^3 + z^3 = 3\"\nexpect = \"finite_or_inconclusive\"\nbox = \"-5..5\"\n";
  EXPECT_TRUE(one(inc + "solutions = [\"x=1, y=1, z=1\", \"x=-5, y=4, z=4\", \"x=4, y=-5, z=4\", \"x=4, y=4, z=-5\"]\n")
                  .passed);
  EXPECT_FALSE(one(inc + "solutions = [\"x=1, y=1, z=1\"]\n").passed);
}

TEST(Corpus, ShippedCorpusPasses) {
  auto cases = parse_corpus(shipped_corpus());
  ASSERT_GE(cases.size(), 50u);
  auto results = run_corpus(cases, fast(), 2);
  for (const auto& r : results) EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
}

TEST(Corpus, ReportIndependentOfWorkerCount) {
  auto cases = parse_corpus(shipped_corpus());
  cases.resize(20);
  auto a = corpus_report(run_corpus(cases, fast(), 1)).dump();
  auto b = corpus_report(run_corpus(cases, fast(), 4)).dump();
  EXPECT_EQ(a, b);
}
