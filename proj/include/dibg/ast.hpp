#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dibg/program_id.hpp"

namespace dibg {

struct SourcePos {
  int line = 1;
  int column = 1;

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

enum class UnaryOp { Neg, Not };

enum class BinaryOp {
  Add, Sub, Mul, Div, Mod,
  Eq, Ne, Lt, Le, Gt, Ge,
  And, Or,
};

bool is_comparison(BinaryOp op);
bool is_logical(BinaryOp op);
const char* spelling(BinaryOp op);
const char* spelling(UnaryOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct IntLiteral {
  std::int64_t value = 0;
};

// `x`, or `A.x` inside relational expressions.
struct VarRef {
  std::optional<ProgramId> program;
  std::string name;
};

// `a[e]`, or `A.a[e]`.
struct IndexRef {
  std::optional<ProgramId> program;
  std::string name;
  ExprPtr index;
};

struct CallExpr {
  std::string callee;
  std::vector<ExprPtr> args;
};

struct UnaryExpr {
  UnaryOp op;
  ExprPtr operand;
};

struct BinaryExpr {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct Expr {
  using Node = std::variant<IntLiteral, VarRef, IndexRef, CallExpr, UnaryExpr, BinaryExpr>;

  SourcePos pos;
  Node node;
};

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct VarDecl {
  std::string name;
  ExprPtr init;
};

// The checker guarantees `size` is a positive IntLiteral.
struct ArrayDecl {
  std::string name;
  ExprPtr size;
};

// `x = e;` when index is null, `a[i] = e;` otherwise.
struct Assign {
  std::string name;
  ExprPtr index;
  ExprPtr value;
};

struct IfStmt {
  ExprPtr cond;
  StmtPtr then_branch;
  StmtPtr else_branch;  // may be null
};

struct WhileStmt {
  ExprPtr cond;
  StmtPtr body;
};

struct ReturnStmt {
  ExprPtr value;
};

struct CallStmt {
  ExprPtr call;  // always a CallExpr
};

struct Block {
  std::vector<StmtPtr> stmts;
};

struct Stmt {
  using Node = std::variant<VarDecl, ArrayDecl, Assign, IfStmt, WhileStmt, ReturnStmt, CallStmt, Block>;

  SourcePos pos;  // position of the statement's first token
  Node node;
};

struct FunctionDef {
  std::string name;
  std::vector<std::string> params;
  Block body;
  SourcePos pos;     // the leading `int`
  int end_line = 1;  // line of the closing brace
};

}  // namespace dibg
