#include "dibg/frontend.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "dibg/syntax.hpp"

namespace dibg {

const FunctionDef* CheckedProgram::find(std::string_view name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &functions_[it->second];
}

int count_lines(std::string_view source) {
  int n = static_cast<int>(std::count(source.begin(), source.end(), '\n'));
  if (!source.empty() && source.back() != '\n') ++n;
  return n;
}

namespace {

enum class VarKind { Scalar, Array };

}  // namespace

class Checker {
 public:
  explicit Checker(ProgramSyntax syntax) : syntax_(std::move(syntax)) {}

  CompileResult run(std::string_view source) {
    auto prog = std::make_shared<CheckedProgram>();
    prog->line_count_ = count_lines(source);

    for (std::size_t i = 0; i < syntax_.functions.size(); ++i) {
      const FunctionDef& fn = syntax_.functions[i];
      if (!prog->by_name_.emplace(fn.name, i).second) {
        error(fn.pos, "duplicate definition of function '" + fn.name + "'");
      }
    }
    auto main_it = prog->by_name_.find("main");
    if (main_it == prog->by_name_.end()) {
      error({1, 1}, "missing entry function 'int main(...)'");
    } else {
      prog->main_index_ = main_it->second;
    }

    arity_.clear();
    for (const auto& [name, idx] : prog->by_name_) arity_[name] = syntax_.functions[idx].params.size();

    for (const FunctionDef& fn : syntax_.functions) check_function(fn);

    if (!diags_.empty()) {
      std::stable_sort(diags_.begin(), diags_.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return std::pair(a.line, a.column) < std::pair(b.line, b.column);
      });
      return std::move(diags_);
    }
    prog->functions_ = std::move(syntax_.functions);
    return std::shared_ptr<const CheckedProgram>(std::move(prog));
  }

 private:
  void error(SourcePos pos, std::string msg) {
    diags_.push_back(Diagnostic{pos.line, pos.column, DiagnosticKind::Check, std::move(msg)});
  }

  void check_function(const FunctionDef& fn) {
    scopes_.assign(1, {});
    for (const auto& p : fn.params) {
      if (lookup(p)) {
        error(fn.pos, "duplicate parameter '" + p + "' in function '" + fn.name + "'");
        continue;
      }
      scopes_.back().emplace_back(p, VarKind::Scalar);
    }
    check_block(fn.body);
  }

  const VarKind* lookup(const std::string& name) const {
    for (auto s = scopes_.rbegin(); s != scopes_.rend(); ++s) {
      for (const auto& [n, k] : *s) {
        if (n == name) return &k;
      }
    }
    return nullptr;
  }

  void declare(SourcePos pos, const std::string& name, VarKind kind) {
    if (lookup(name)) {
      error(pos, "redeclaration of '" + name + "' (shadowing is not allowed)");
      return;
    }
    scopes_.back().emplace_back(name, kind);
  }

  void check_block(const Block& b) {
    scopes_.emplace_back();
    for (const auto& s : b.stmts) check_stmt(*s);
    scopes_.pop_back();
  }

  // Sort check first; name resolution only if the structure is well-typed.
  void check_expr(const Expr& e, Sort want, std::string_view where) {
    auto sort = expression_sort(e);
    if (auto* d = std::get_if<Diagnostic>(&sort)) {
      diags_.push_back(*d);
      return;
    }
    if (std::get<Sort>(sort) != want) {
      std::string msg = want == Sort::Int ? "expected an integer expression " : "expected a condition ";
      msg += where;
      msg += want == Sort::Int ? ", found a condition" : ", found an integer expression";
      error(e.pos, std::move(msg));
      return;
    }
    resolve(e);
  }

  void resolve(const Expr& e) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, VarRef>) {
            const VarKind* k = lookup(n.name);
            if (!k) {
              error(e.pos, "undeclared variable '" + n.name + "'");
            } else if (*k == VarKind::Array) {
              error(e.pos, "type mismatch: array '" + n.name + "' used as an integer");
            }
          } else if constexpr (std::is_same_v<T, IndexRef>) {
            const VarKind* k = lookup(n.name);
            if (!k) {
              error(e.pos, "undeclared variable '" + n.name + "'");
            } else if (*k != VarKind::Array) {
              error(e.pos, "type mismatch: '" + n.name + "' is not an array");
            }
            resolve(*n.index);
          } else if constexpr (std::is_same_v<T, CallExpr>) {
            auto it = arity_.find(n.callee);
            if (it == arity_.end()) {
              error(e.pos, "call to undefined function '" + n.callee + "'");
            } else if (it->second != n.args.size()) {
              error(e.pos, "arity mismatch: '" + n.callee + "' takes " + std::to_string(it->second) +
                               " argument(s), " + std::to_string(n.args.size()) + " given");
            }
            for (const auto& a : n.args) resolve(*a);
          } else if constexpr (std::is_same_v<T, UnaryExpr>) {
            resolve(*n.operand);
          } else if constexpr (std::is_same_v<T, BinaryExpr>) {
            resolve(*n.lhs);
            resolve(*n.rhs);
          }
        },
        e.node);
  }

  void check_stmt(const Stmt& s) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, VarDecl>) {
            check_expr(*n.init, Sort::Int, "as initializer");
            declare(s.pos, n.name, VarKind::Scalar);
          } else if constexpr (std::is_same_v<T, ArrayDecl>) {
            const auto* lit = std::get_if<IntLiteral>(&n.size->node);
            if (!lit || lit->value <= 0) {
              error(n.size->pos, "array size of '" + n.name + "' must be a positive integer literal");
            }
            declare(s.pos, n.name, VarKind::Array);
          } else if constexpr (std::is_same_v<T, Assign>) {
            const VarKind* k = lookup(n.name);
            if (!k) {
              error(s.pos, "undeclared variable '" + n.name + "'");
            } else if (n.index && *k != VarKind::Array) {
              error(s.pos, "type mismatch: '" + n.name + "' is not an array");
            } else if (!n.index && *k == VarKind::Array) {
              error(s.pos, "type mismatch: cannot assign an integer to array '" + n.name + "'");
            }
            if (n.index) check_expr(*n.index, Sort::Int, "as array index");
            check_expr(*n.value, Sort::Int, "on right-hand side of assignment");
          } else if constexpr (std::is_same_v<T, IfStmt>) {
            check_expr(*n.cond, Sort::Bool, "in 'if'");
            check_nested(*n.then_branch);
            if (n.else_branch) check_nested(*n.else_branch);
          } else if constexpr (std::is_same_v<T, WhileStmt>) {
            check_expr(*n.cond, Sort::Bool, "in 'while'");
            check_nested(*n.body);
          } else if constexpr (std::is_same_v<T, ReturnStmt>) {
            check_expr(*n.value, Sort::Int, "in 'return'");
          } else if constexpr (std::is_same_v<T, CallStmt>) {
            check_expr(*n.call, Sort::Int, "in call statement");
          } else if constexpr (std::is_same_v<T, Block>) {
            check_block(n);
          }
        },
        s.node);
  }

  // Branch and loop bodies get their own scope even when not braced.
  void check_nested(const Stmt& s) {
    scopes_.emplace_back();
    check_stmt(s);
    scopes_.pop_back();
  }

  ProgramSyntax syntax_;
  std::vector<Diagnostic> diags_;
  std::map<std::string, std::size_t> arity_;
  std::vector<std::vector<std::pair<std::string, VarKind>>> scopes_;
};

CompileResult compile(std::string_view source) {
  auto parsed = parse_program(source);
  if (auto* d = std::get_if<Diagnostic>(&parsed)) return std::vector<Diagnostic>{*d};
  Checker checker(std::move(std::get<ProgramSyntax>(parsed)));
  return checker.run(source);
}

}  // namespace dibg
