#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "dibg/ast.hpp"
#include "dibg/diagnostic.hpp"
#include "dibg/program_id.hpp"
#include "dibg/syntax.hpp"
#include "dibg/trace.hpp"

namespace dibg {

// A WLANG expression over program-qualified variables such as `A.a == B.b`.
struct RelationalExpression {
  std::string text;
  ExprPtr tree;
  Sort kind = Sort::Int;
  std::set<ProgramId> programs;  // every qualifier that occurs in the tree

  bool is_boolean() const { return kind == Sort::Bool; }
};

std::variant<RelationalExpression, Diagnostic> parse_relational(std::string_view text);

struct LineRange {
  int start_line = 1;
  int end_line = 1;

  bool contains(int line) const { return line >= start_line && line <= end_line; }
  friend bool operator==(const LineRange&, const LineRange&) = default;
};

// Per-program line windows outside of which an expression is Unknown.
using ScopeSpec = std::map<ProgramId, LineRange>;

// Throws Error(InvalidArgument) unless 1 <= start_line <= end_line everywhere.
void validate_scope(const ScopeSpec& scope);

struct Unknown {
  friend bool operator==(Unknown, Unknown) = default;
};

using EvalResult = std::variant<Unknown, std::int64_t, bool>;

inline bool is_unknown(const EvalResult& r) { return std::holds_alternative<Unknown>(r); }

// "2", "true", "false", "unknown".
std::string to_string(const EvalResult& r);

using PointTuple = std::map<ProgramId, const ExecutionPoint*>;

// Evaluates against the innermost frame of each program's current point.
//
// Unknown when a scoped program is outside its window, when a referenced
// program is no longer running, when any variable occurrence (evaluated or
// not) is missing from its frame or has the wrong shape, or when a fault
// such as division by zero happens on the evaluated path. Otherwise `&&`
// and `||` short-circuit as in WLANG.
//
// Throws Error(UnknownProgram) if `points` lacks a program named by the
// expression or the scope.
EvalResult evaluate(const RelationalExpression& expr, const PointTuple& points, const ScopeSpec& scope = {});

}  // namespace dibg
