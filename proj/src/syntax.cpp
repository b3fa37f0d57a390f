#include "dibg/syntax.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <limits>
#include <utility>

namespace dibg {

bool is_comparison(BinaryOp op) {
  switch (op) {
    case BinaryOp::Eq: case BinaryOp::Ne: case BinaryOp::Lt:
    case BinaryOp::Le: case BinaryOp::Gt: case BinaryOp::Ge:
      return true;
    default:
      return false;
  }
}

bool is_logical(BinaryOp op) { return op == BinaryOp::And || op == BinaryOp::Or; }

const char* spelling(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

const char* spelling(UnaryOp op) { return op == UnaryOp::Neg ? "-" : "!"; }

std::string_view describe(TokenKind kind) {
  switch (kind) {
    case TokenKind::Int: return "integer literal";
    case TokenKind::Ident: return "identifier";
    case TokenKind::KwInt: return "'int'";
    case TokenKind::KwIf: return "'if'";
    case TokenKind::KwElse: return "'else'";
    case TokenKind::KwWhile: return "'while'";
    case TokenKind::KwReturn: return "'return'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::LBracket: return "'['";
    case TokenKind::RBracket: return "']'";
    case TokenKind::Semicolon: return "';'";
    case TokenKind::Comma: return "','";
    case TokenKind::Dot: return "'.'";
    case TokenKind::Plus: return "'+'";
    case TokenKind::Minus: return "'-'";
    case TokenKind::Star: return "'*'";
    case TokenKind::Slash: return "'/'";
    case TokenKind::Percent: return "'%'";
    case TokenKind::Assign: return "'='";
    case TokenKind::Eq: return "'=='";
    case TokenKind::Ne: return "'!='";
    case TokenKind::Lt: return "'<'";
    case TokenKind::Le: return "'<='";
    case TokenKind::Gt: return "'>'";
    case TokenKind::Ge: return "'>='";
    case TokenKind::AndAnd: return "'&&'";
    case TokenKind::OrOr: return "'||'";
    case TokenKind::Bang: return "'!'";
    case TokenKind::End: return "end of input";
  }
  return "token";
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

TokenKind keyword_or_ident(std::string_view word) {
  if (word == "int") return TokenKind::KwInt;
  if (word == "if") return TokenKind::KwIf;
  if (word == "else") return TokenKind::KwElse;
  if (word == "while") return TokenKind::KwWhile;
  if (word == "return") return TokenKind::KwReturn;
  return TokenKind::Ident;
}

}  // namespace

std::variant<std::vector<Token>, Diagnostic> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;

  auto advance = [&](std::size_t n) {
    i += n;
    col += static_cast<int>(n);
  };
  auto lex_error = [&](std::string msg) {
    return Diagnostic{line, col, DiagnosticKind::Lex, std::move(msg)};
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }

    Token tok;
    tok.pos = {line, col};

    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && ident_char(src[j])) {
        return lex_error("malformed integer literal '" + std::string(src.substr(i, j - i + 1)) + "'");
      }
      std::string_view digits = src.substr(i, j - i);
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
      if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
        return lex_error("integer literal '" + std::string(digits) + "' out of range");
      }
      tok.kind = TokenKind::Int;
      tok.text = std::string(digits);
      tok.value = v;
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }

    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      tok.text = std::string(src.substr(i, j - i));
      tok.kind = keyword_or_ident(tok.text);
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }

    auto two = [&](char next) { return i + 1 < src.size() && src[i + 1] == next; };
    std::size_t len = 1;
    switch (c) {
      case '(': tok.kind = TokenKind::LParen; break;
      case ')': tok.kind = TokenKind::RParen; break;
      case '{': tok.kind = TokenKind::LBrace; break;
      case '}': tok.kind = TokenKind::RBrace; break;
      case '[': tok.kind = TokenKind::LBracket; break;
      case ']': tok.kind = TokenKind::RBracket; break;
      case ';': tok.kind = TokenKind::Semicolon; break;
      case ',': tok.kind = TokenKind::Comma; break;
      case '.': tok.kind = TokenKind::Dot; break;
      case '+': tok.kind = TokenKind::Plus; break;
      case '-': tok.kind = TokenKind::Minus; break;
      case '*': tok.kind = TokenKind::Star; break;
      case '/': tok.kind = TokenKind::Slash; break;
      case '%': tok.kind = TokenKind::Percent; break;
      case '=':
        if (two('=')) { tok.kind = TokenKind::Eq; len = 2; } else { tok.kind = TokenKind::Assign; }
        break;
      case '!':
        if (two('=')) { tok.kind = TokenKind::Ne; len = 2; } else { tok.kind = TokenKind::Bang; }
        break;
      case '<':
        if (two('=')) { tok.kind = TokenKind::Le; len = 2; } else { tok.kind = TokenKind::Lt; }
        break;
      case '>':
        if (two('=')) { tok.kind = TokenKind::Ge; len = 2; } else { tok.kind = TokenKind::Gt; }
        break;
      case '&':
        if (!two('&')) return lex_error("illegal character '&' (did you mean '&&'?)");
        tok.kind = TokenKind::AndAnd;
        len = 2;
        break;
      case '|':
        if (!two('|')) return lex_error("illegal character '|' (did you mean '||'?)");
        tok.kind = TokenKind::OrOr;
        len = 2;
        break;
      default: {
        auto u = static_cast<unsigned char>(c);
        if (u >= 0x20 && u < 0x7f) return lex_error(std::string("illegal character '") + c + "'");
        char buf[8];
        std::snprintf(buf, sizeof buf, "0x%02X", u);
        return lex_error(std::string("illegal character byte ") + buf);
      }
    }
    tok.text = std::string(src.substr(i, len));
    advance(len);
    out.push_back(std::move(tok));
  }

  Token end;
  end.kind = TokenKind::End;
  end.pos = {line, col};
  out.push_back(std::move(end));
  return out;
}

namespace {

struct ParseFailure {
  Diagnostic diag;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, ExprDialect dialect) : toks_(std::move(toks)), dialect_(dialect) {}

  ProgramSyntax program() {
    ProgramSyntax prog;
    while (!at(TokenKind::End)) prog.functions.push_back(function());
    return prog;
  }

  ExprPtr whole_expression() {
    ExprPtr e = expression();
    if (!at(TokenKind::End)) fail(peek(), "unexpected " + std::string(describe(peek().kind)) + " after expression");
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[k];
  }
  bool at(TokenKind k) const { return peek().kind == k; }

  const Token& take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  bool accept(TokenKind k) {
    if (!at(k)) return false;
    take();
    return true;
  }

  [[noreturn]] void fail(const Token& at_tok, std::string msg) {
    throw ParseFailure{Diagnostic{at_tok.pos.line, at_tok.pos.column, DiagnosticKind::Parse, std::move(msg)}};
  }

  const Token& expect(TokenKind k, std::string_view context) {
    if (!at(k)) {
      fail(peek(), "expected " + std::string(describe(k)) + " " + std::string(context) + ", found " +
                       std::string(describe(peek().kind)));
    }
    return take();
  }

  FunctionDef function() {
    FunctionDef fn;
    const Token& kw = expect(TokenKind::KwInt, "at start of function definition");
    fn.pos = kw.pos;
    fn.name = expect(TokenKind::Ident, "for function name").text;
    expect(TokenKind::LParen, "after function name");
    if (!at(TokenKind::RParen)) {
      do {
        expect(TokenKind::KwInt, "before parameter name");
        fn.params.push_back(expect(TokenKind::Ident, "for parameter name").text);
      } while (accept(TokenKind::Comma));
    }
    expect(TokenKind::RParen, "after parameter list");
    expect(TokenKind::LBrace, "to open function body");
    fn.body = block_contents();
    fn.end_line = expect(TokenKind::RBrace, "to close function body").pos.line;
    return fn;
  }

  // Statements up to (not including) the closing brace.
  Block block_contents() {
    Block b;
    while (!at(TokenKind::RBrace) && !at(TokenKind::End)) b.stmts.push_back(statement(true));
    return b;
  }

  StmtPtr make_stmt(SourcePos pos, Stmt::Node node) {
    return std::make_shared<const Stmt>(Stmt{pos, std::move(node)});
  }

  StmtPtr statement(bool declaration_allowed) {
    const Token& first = peek();
    SourcePos pos = first.pos;
    switch (first.kind) {
      case TokenKind::KwInt: {
        if (!declaration_allowed) fail(first, "a declaration is not allowed here; wrap it in a block");
        take();
        std::string name = expect(TokenKind::Ident, "for variable name").text;
        if (accept(TokenKind::LBracket)) {
          ExprPtr size = expression();
          expect(TokenKind::RBracket, "after array size");
          expect(TokenKind::Semicolon, "after array declaration");
          return make_stmt(pos, ArrayDecl{std::move(name), std::move(size)});
        }
        expect(TokenKind::Assign, "in variable declaration (an initializer is required)");
        ExprPtr init = expression();
        expect(TokenKind::Semicolon, "after declaration");
        return make_stmt(pos, VarDecl{std::move(name), std::move(init)});
      }
      case TokenKind::KwIf: {
        take();
        expect(TokenKind::LParen, "after 'if'");
        ExprPtr cond = expression();
        expect(TokenKind::RParen, "after condition");
        StmtPtr then_branch = statement(false);
        StmtPtr else_branch;
        if (accept(TokenKind::KwElse)) else_branch = statement(false);
        return make_stmt(pos, IfStmt{std::move(cond), std::move(then_branch), std::move(else_branch)});
      }
      case TokenKind::KwWhile: {
        take();
        expect(TokenKind::LParen, "after 'while'");
        ExprPtr cond = expression();
        expect(TokenKind::RParen, "after condition");
        StmtPtr body = statement(false);
        return make_stmt(pos, WhileStmt{std::move(cond), std::move(body)});
      }
      case TokenKind::KwReturn: {
        take();
        ExprPtr value = expression();
        expect(TokenKind::Semicolon, "after return value");
        return make_stmt(pos, ReturnStmt{std::move(value)});
      }
      case TokenKind::LBrace: {
        take();
        Block b = block_contents();
        expect(TokenKind::RBrace, "to close block");
        return make_stmt(pos, std::move(b));
      }
      case TokenKind::Ident: {
        if (peek(1).kind == TokenKind::LParen) {
          ExprPtr call = primary();
          expect(TokenKind::Semicolon, "after call statement");
          return make_stmt(pos, CallStmt{std::move(call)});
        }
        std::string name = take().text;
        ExprPtr index;
        if (accept(TokenKind::LBracket)) {
          index = expression();
          expect(TokenKind::RBracket, "after array index");
        }
        expect(TokenKind::Assign, "in assignment");
        ExprPtr value = expression();
        expect(TokenKind::Semicolon, "after assignment");
        return make_stmt(pos, Assign{std::move(name), std::move(index), std::move(value)});
      }
      default:
        fail(first, "expected statement, found " + std::string(describe(first.kind)));
    }
  }

  ExprPtr make_expr(SourcePos pos, Expr::Node node) {
    return std::make_shared<const Expr>(Expr{pos, std::move(node)});
  }

  ExprPtr expression() { return logical_or(); }

  template <typename Next>
  ExprPtr binary_level(Next next, std::initializer_list<std::pair<TokenKind, BinaryOp>> ops) {
    ExprPtr lhs = (this->*next)();
    for (;;) {
      bool matched = false;
      for (auto [tk, op] : ops) {
        if (at(tk)) {
          SourcePos pos = take().pos;
          ExprPtr rhs = (this->*next)();
          lhs = make_expr(pos, BinaryExpr{op, std::move(lhs), std::move(rhs)});
          matched = true;
          break;
        }
      }
      if (!matched) return lhs;
    }
  }

  ExprPtr logical_or() { return binary_level(&Parser::logical_and, {{TokenKind::OrOr, BinaryOp::Or}}); }
  ExprPtr logical_and() { return binary_level(&Parser::equality, {{TokenKind::AndAnd, BinaryOp::And}}); }
  ExprPtr equality() {
    return binary_level(&Parser::relational, {{TokenKind::Eq, BinaryOp::Eq}, {TokenKind::Ne, BinaryOp::Ne}});
  }
  ExprPtr relational() {
    return binary_level(&Parser::additive, {{TokenKind::Lt, BinaryOp::Lt},
                                            {TokenKind::Le, BinaryOp::Le},
                                            {TokenKind::Gt, BinaryOp::Gt},
                                            {TokenKind::Ge, BinaryOp::Ge}});
  }
  ExprPtr additive() {
    return binary_level(&Parser::multiplicative, {{TokenKind::Plus, BinaryOp::Add}, {TokenKind::Minus, BinaryOp::Sub}});
  }
  ExprPtr multiplicative() {
    return binary_level(&Parser::unary, {{TokenKind::Star, BinaryOp::Mul},
                                         {TokenKind::Slash, BinaryOp::Div},
                                         {TokenKind::Percent, BinaryOp::Mod}});
  }

  ExprPtr unary() {
    if (at(TokenKind::Minus) || at(TokenKind::Bang)) {
      const Token& t = take();
      UnaryOp op = t.kind == TokenKind::Minus ? UnaryOp::Neg : UnaryOp::Not;
      SourcePos pos = t.pos;
      return make_expr(pos, UnaryExpr{op, unary()});
    }
    return primary();
  }

  ExprPtr index_suffix() {
    expect(TokenKind::LBracket, "before index");
    ExprPtr idx = expression();
    expect(TokenKind::RBracket, "after array index");
    return idx;
  }

  ExprPtr primary() {
    const Token& t = peek();
    SourcePos pos = t.pos;
    switch (t.kind) {
      case TokenKind::Int:
        take();
        return make_expr(pos, IntLiteral{t.value});
      case TokenKind::LParen: {
        take();
        ExprPtr inner = expression();
        expect(TokenKind::RParen, "to close parenthesis");
        return inner;
      }
      case TokenKind::Ident:
        return dialect_ == ExprDialect::Program ? program_name() : qualified_name();
      default:
        fail(t, "expected expression, found " + std::string(describe(t.kind)));
    }
  }

  ExprPtr program_name() {
    const Token& id = take();
    SourcePos pos = id.pos;
    std::string name = id.text;
    if (accept(TokenKind::LParen)) {
      CallExpr call{name, {}};
      if (!at(TokenKind::RParen)) {
        do {
          call.args.push_back(expression());
        } while (accept(TokenKind::Comma));
      }
      expect(TokenKind::RParen, "after call arguments");
      return make_expr(pos, std::move(call));
    }
    if (at(TokenKind::LBracket)) return make_expr(pos, IndexRef{std::nullopt, name, index_suffix()});
    return make_expr(pos, VarRef{std::nullopt, name});
  }

  ExprPtr qualified_name() {
    const Token& id = take();
    SourcePos pos = id.pos;
    if (at(TokenKind::LParen)) fail(id, "function calls are not allowed in relational expressions");
    if (!at(TokenKind::Dot)) {
      fail(id, "unqualified variable '" + id.text + "'; write it as <program>." + id.text + " (e.g. A." + id.text + ")");
    }
    auto pid = ProgramId::parse(id.text);
    if (!pid) fail(id, "program identifier '" + id.text + "' must be a single uppercase letter A-Z");
    take();
    std::string name = expect(TokenKind::Ident, "after '.'").text;
    if (at(TokenKind::LBracket)) return make_expr(pos, IndexRef{pid, name, index_suffix()});
    return make_expr(pos, VarRef{pid, name});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ExprDialect dialect_;
};

}  // namespace

std::variant<ProgramSyntax, Diagnostic> parse_program(std::string_view source) {
  auto toks = tokenize(source);
  if (auto* d = std::get_if<Diagnostic>(&toks)) return *d;
  try {
    Parser p(std::move(std::get<std::vector<Token>>(toks)), ExprDialect::Program);
    return p.program();
  } catch (const ParseFailure& f) {
    return f.diag;
  }
}

std::variant<ExprPtr, Diagnostic> parse_expression(std::string_view text, ExprDialect dialect) {
  auto toks = tokenize(text);
  if (auto* d = std::get_if<Diagnostic>(&toks)) return *d;
  try {
    Parser p(std::move(std::get<std::vector<Token>>(toks)), dialect);
    return p.whole_expression();
  } catch (const ParseFailure& f) {
    return f.diag;
  }
}

namespace {

struct SortFailure {
  Diagnostic diag;
};

Sort sort_of(const Expr& e);

void require(const Expr& e, Sort want, std::string_view where) {
  Sort got = sort_of(e);
  if (got == want) return;
  std::string msg = want == Sort::Int ? "expected an integer expression " : "expected a condition ";
  msg += where;
  msg += want == Sort::Int ? ", found a condition" : ", found an integer expression";
  throw SortFailure{Diagnostic{e.pos.line, e.pos.column, DiagnosticKind::Check, std::move(msg)}};
}

Sort sort_of(const Expr& e) {
  return std::visit(
      [&](const auto& n) -> Sort {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntLiteral> || std::is_same_v<T, VarRef>) {
          return Sort::Int;
        } else if constexpr (std::is_same_v<T, IndexRef>) {
          require(*n.index, Sort::Int, "as array index");
          return Sort::Int;
        } else if constexpr (std::is_same_v<T, CallExpr>) {
          for (const auto& a : n.args) require(*a, Sort::Int, "as call argument");
          return Sort::Int;
        } else if constexpr (std::is_same_v<T, UnaryExpr>) {
          if (n.op == UnaryOp::Neg) {
            require(*n.operand, Sort::Int, "as operand of unary '-'");
            return Sort::Int;
          }
          require(*n.operand, Sort::Bool, "as operand of '!'");
          return Sort::Bool;
        } else {
          std::string where = std::string("as operand of '") + spelling(n.op) + "'";
          Sort operand = is_logical(n.op) ? Sort::Bool : Sort::Int;
          require(*n.lhs, operand, where);
          require(*n.rhs, operand, where);
          return (is_logical(n.op) || is_comparison(n.op)) ? Sort::Bool : Sort::Int;
        }
      },
      e.node);
}

}  // namespace

std::variant<Sort, Diagnostic> expression_sort(const Expr& e) {
  try {
    return sort_of(e);
  } catch (const SortFailure& f) {
    return f.diag;
  }
}

}  // namespace dibg
