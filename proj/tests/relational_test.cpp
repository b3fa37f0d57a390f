#include <gtest/gtest.h>

#include "dibg/error.hpp"
#include "dibg/interpreter.hpp"
#include "dibg/relational.hpp"
#include "support/fixtures.hpp"
#include "support/random.hpp"
#include "support/relational_oracle.hpp"

using namespace dibg;

namespace {

RelationalExpression must_parse(std::string_view text) {
  auto r = parse_relational(text);
  if (auto* d = std::get_if<Diagnostic>(&r)) {
    ADD_FAILURE() << text << ": " << format(*d);
    return {};
  }
  return std::get<RelationalExpression>(std::move(r));
}

ExecutionPoint point(int line, std::vector<Binding> bindings, Status st = status::Running{}) {
  ExecutionPoint p;
  p.line = line;
  p.status = std::move(st);
  p.stack = CallStack{}.push(std::make_shared<const Frame>(Frame{"main", 0, std::move(bindings)}));
  return p;
}

Binding var(std::string name, std::int64_t v) { return {std::move(name), v}; }

}  // namespace

TEST(Relational, ParsesTheEquivalenceInvariant) {
  auto e = must_parse("A.a == B.b");
  EXPECT_TRUE(e.is_boolean());
  EXPECT_EQ(e.programs, (std::set<ProgramId>{ProgramId('A'), ProgramId('B')}));
  EXPECT_EQ(e.text, "A.a == B.b");
}

TEST(Relational, IntegerExpression) {
  auto e = must_parse("A.a - B.b");
  EXPECT_FALSE(e.is_boolean());
  EXPECT_EQ(e.programs.size(), 2u);
}

TEST(Relational, RejectsUnqualifiedAndIllTyped) {
  for (const char* bad : {"a == B.b", "A.a +", "A.a + (B.b == 1)", "!A.a", "f(A.a) > 0", "AB.x == 1", "A.a = 1",
                          "A.", "A.a == B.b extra", "a.x == 1"}) {
    EXPECT_TRUE(std::holds_alternative<Diagnostic>(parse_relational(bad))) << bad;
  }
  auto d = std::get<Diagnostic>(parse_relational("a == B.b"));
  EXPECT_NE(d.message.find("unqualified variable 'a'"), std::string::npos);
}

TEST(Relational, EvaluatesHaltValues) {
  auto a = point(8, {var("a", 2), var("b", 2), var("i", 1)});
  auto b = point(8, {var("b", -2), var("a", 4), var("i", 1)});
  PointTuple pts{{ProgramId('A'), &a}, {ProgramId('B'), &b}};
  EXPECT_EQ(evaluate(must_parse("A.a != B.b"), pts), EvalResult{true});
  EXPECT_EQ(evaluate(must_parse("A.a == B.b"), pts), EvalResult{false});
  EXPECT_EQ(evaluate(must_parse("A.a - B.b"), pts), EvalResult{std::int64_t{4}});
}

TEST(Relational, EqualValuesCompareEqual) {
  auto a = point(1, {var("a", 2), var("b", 4)});
  auto b = point(1, {var("b", 2), var("a", 4)});
  PointTuple pts{{ProgramId('A'), &a}, {ProgramId('B'), &b}};
  EXPECT_EQ(evaluate(must_parse("A.a == B.b"), pts), EvalResult{true});
}

TEST(Relational, VariableNotYetDeclaredIsUnknown) {
  auto prog = dibg::testing::must_compile(dibg::testing::kGcdCorrect);
  std::vector<std::int64_t> in{2, 4};
  auto t = execute(prog, in);
  PointTuple pts{{ProgramId('A'), &t[0]}, {ProgramId('B'), &t[0]}};
  EXPECT_TRUE(is_unknown(evaluate(must_parse("A.i + B.i"), pts)));
  PointTuple later{{ProgramId('A'), &t[2]}, {ProgramId('B'), &t[2]}};
  EXPECT_EQ(evaluate(must_parse("A.i + B.i"), later), EvalResult{std::int64_t{0}});
}

TEST(Relational, OutOfScopeIsUnknown) {
  auto a = point(10, {var("a", 5)});
  PointTuple pts{{ProgramId('A'), &a}};
  auto e = must_parse("A.a > 0");
  EXPECT_TRUE(is_unknown(evaluate(e, pts, {{ProgramId('A'), {3, 9}}})));
  EXPECT_EQ(evaluate(e, pts, {{ProgramId('A'), {3, 10}}}), EvalResult{true});
  EXPECT_EQ(evaluate(e, pts), EvalResult{true});
}

TEST(Relational, TerminatedProgramIsUnknown) {
  auto a = point(10, {var("a", 5)}, status::Returned{5});
  auto b = point(3, {var("b", 5)});
  PointTuple pts{{ProgramId('A'), &a}, {ProgramId('B'), &b}};
  EXPECT_TRUE(is_unknown(evaluate(must_parse("A.a == B.b"), pts)));
  // Strict: no short-circuit rescue either.
  EXPECT_TRUE(is_unknown(evaluate(must_parse("B.b < 0 && A.a == 5"), pts)));
  EXPECT_TRUE(is_unknown(evaluate(must_parse("B.b > 0 || A.a == 5"), pts)));
}

TEST(Relational, MissingLeafIsUnknownEvenWhenSkipped) {
  auto a = point(3, {var("x", 0)});
  PointTuple pts{{ProgramId('A'), &a}};
  EXPECT_TRUE(is_unknown(evaluate(must_parse("A.x == 1 && A.nope == 2"), pts)));
}

TEST(Relational, FaultsYieldUnknownOnlyOnTheEvaluatedPath) {
  auto a = point(3, {var("x", 0), {"arr", IntArray{{7, 8}}}});
  PointTuple pts{{ProgramId('A'), &a}};
  EXPECT_TRUE(is_unknown(evaluate(must_parse("10 / A.x"), pts)));
  EXPECT_TRUE(is_unknown(evaluate(must_parse("10 % A.x == 0"), pts)));
  EXPECT_TRUE(is_unknown(evaluate(must_parse("A.arr[2]"), pts)));
  EXPECT_TRUE(is_unknown(evaluate(must_parse("A.arr[A.x - 1]"), pts)));
  EXPECT_EQ(evaluate(must_parse("A.arr[1] + A.arr[A.x]"), pts), EvalResult{std::int64_t{15}});
  EXPECT_EQ(evaluate(must_parse("A.x != 0 && 10 / A.x > 1"), pts), EvalResult{false});
  // Shape mismatches.
  EXPECT_TRUE(is_unknown(evaluate(must_parse("A.arr + 1"), pts)));
  EXPECT_TRUE(is_unknown(evaluate(must_parse("A.x[0]"), pts)));
}

TEST(Relational, OnlyInnermostFrameIsVisible) {
  ExecutionPoint p;
  p.line = 2;
  p.status = status::Running{};
  p.stack = CallStack{}
                .push(std::make_shared<const Frame>(Frame{"main", 0, {var("outer", 1)}}))
                .push(std::make_shared<const Frame>(Frame{"f", 5, {var("inner", 2)}}));
  PointTuple pts{{ProgramId('A'), &p}};
  EXPECT_TRUE(is_unknown(evaluate(must_parse("A.outer"), pts)));
  EXPECT_EQ(evaluate(must_parse("A.inner"), pts), EvalResult{std::int64_t{2}});
}

TEST(Relational, MissingProgramIsACallerError) {
  auto a = point(1, {var("a", 1)});
  PointTuple pts{{ProgramId('A'), &a}};
  try {
    evaluate(must_parse("A.a == B.b"), pts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownProgram);
  }
  EXPECT_THROW(evaluate(must_parse("A.a == 1"), pts, {{ProgramId('C'), {1, 2}}}), Error);
}

TEST(Relational, ScopeValidation) {
  EXPECT_NO_THROW(validate_scope({{ProgramId('A'), {1, 1}}, {ProgramId('B'), {3, 9}}}));
  EXPECT_THROW(validate_scope({{ProgramId('A'), {0, 3}}}), Error);
  EXPECT_THROW(validate_scope({{ProgramId('A'), {5, 4}}}), Error);
}

TEST(RelationalProperty, AgreesWithSubstitutionOracle) {
  dibg::testing::Rng rng(20240611);
  int unknowns = 0;
  for (int iter = 0; iter < 1200; ++iter) {
    auto c = dibg::testing::random_relational_case(rng);
    const auto& qualified = c.qualified;
    const auto& substituted = c.substituted;
    bool boolean = c.boolean;

    auto expr = must_parse(qualified);
    ASSERT_EQ(expr.is_boolean(), boolean) << qualified;
    EvalResult got = evaluate(expr, c.tuple());
    auto want = dibg::testing::substitution_oracle(substituted, boolean);
    ASSERT_TRUE(want.has_value()) << substituted;
    ASSERT_EQ(got, *want) << qualified << "\n  substituted: " << substituted;
    unknowns += is_unknown(got);
  }
  // The corpus must exercise both the value and the fault path.
  EXPECT_GT(unknowns, 10);
  EXPECT_LT(unknowns, 600);
}

TEST(RelationalProperty, WideningScopeNeverIntroducesUnknown) {
  dibg::testing::Rng rng(7);
  auto e = must_parse("A.a + B.b > 0 || A.a == 3");
  for (int iter = 0; iter < 500; ++iter) {
    auto a = point(rng.range(1, 30), {var("a", rng.small())});
    auto b = point(rng.range(1, 30), {var("b", rng.small())});
    PointTuple pts{{ProgramId('A'), &a}, {ProgramId('B'), &b}};
    ScopeSpec narrow;
    for (char p : {'A', 'B'}) {
      if (rng.chance(0.6)) {
        int s = rng.range(1, 30);
        narrow[ProgramId(p)] = {s, s + rng.range(0, 10)};
      }
    }
    ScopeSpec wide = narrow;
    for (auto& [pid, r] : wide) {
      r.start_line = std::max(1, r.start_line - rng.range(0, 10));
      r.end_line += rng.range(0, 10);
    }
    auto before = evaluate(e, pts, narrow);
    auto after = evaluate(e, pts, wide);
    if (!is_unknown(before)) EXPECT_EQ(before, after);
    EXPECT_EQ(evaluate(e, pts, narrow), before);  // deterministic
  }
}
