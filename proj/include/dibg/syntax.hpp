#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dibg/ast.hpp"
#include "dibg/diagnostic.hpp"

namespace dibg {

enum class TokenKind {
  Int, Ident,
  KwInt, KwIf, KwElse, KwWhile, KwReturn,
  LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Semicolon, Comma, Dot,
  Plus, Minus, Star, Slash, Percent,
  Assign, Eq, Ne, Lt, Le, Gt, Ge,
  AndAnd, OrOr, Bang,
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  std::int64_t value = 0;  // for Int
  SourcePos pos;
};

std::string_view describe(TokenKind kind);

// Splits source into tokens; the last token is always End.
std::variant<std::vector<Token>, Diagnostic> tokenize(std::string_view source);

// Unchecked syntax tree of a whole program.
struct ProgramSyntax {
  std::vector<FunctionDef> functions;
};

std::variant<ProgramSyntax, Diagnostic> parse_program(std::string_view source);

enum class ExprDialect {
  Program,     // plain identifiers, calls allowed
  Relational,  // every variable written P.name, no calls
};

// Parses a single expression that must span the whole text.
std::variant<ExprPtr, Diagnostic> parse_expression(std::string_view text, ExprDialect dialect);

enum class Sort { Int, Bool };

// Structural two-sorted typing: arithmetic, indices and call arguments are
// Int; `!`, `&&`, `||` take Bool; comparisons turn Int into Bool.
std::variant<Sort, Diagnostic> expression_sort(const Expr& e);

}  // namespace dibg
