// Non-tracing evaluator behind run_result. Kept structurally separate from
// the tracer so the two can be checked against each other; it only counts
// execution points to honour the same budget.

#include <map>
#include <utility>

#include "dibg/arith.hpp"
#include "dibg/error.hpp"
#include "dibg/interpreter.hpp"

namespace dibg {

namespace {

struct Finished {
  Status status;
};

struct ReturnSignal {
  std::int64_t value;
};

using Scope = std::map<std::string, Value, std::less<>>;

class DirectEvaluator {
 public:
  DirectEvaluator(const CheckedProgram& program, const ExecutionLimits& limits)
      : program_(program), limits_(limits) {}

  Status run(std::span<const std::int64_t> inputs) {
    try {
      std::vector<std::int64_t> args(inputs.begin(), inputs.end());
      tick();  // entry point of main
      std::int64_t v = invoke(program_.main(), args, /*is_main=*/true);
      return status::Returned{v};
    } catch (Finished& f) {
      return std::move(f.status);
    }
  }

 private:
  using Env = std::vector<Scope>;

  void tick() {
    if (count_ >= limits_.max_points) throw Finished{status::BudgetExceeded{}};
    ++count_;
  }

  [[noreturn]] void trap(FaultKind kind, std::string msg) { throw Finished{status::Error{kind, std::move(msg)}}; }

  std::int64_t invoke(const FunctionDef& fn, const std::vector<std::int64_t>& args, bool is_main) {
    ++depth_;
    if (!is_main) tick();  // entry point of the callee
    Env env(1);
    for (std::size_t i = 0; i < fn.params.size(); ++i) env[0][fn.params[i]] = args[i];
    try {
      run_block(fn.body, env);
    } catch (const ReturnSignal& r) {
      // The return statement's point; main's is terminal and never counted.
      if (!is_main) tick();
      --depth_;
      return r.value;
    }
    trap(FaultKind::MissingReturn, "missing return in '" + fn.name + "'");
  }

  void run_block(const Block& b, Env& env) {
    env.emplace_back();
    for (const auto& s : b.stmts) run_stmt(*s, env);
    env.pop_back();
  }

  Value* find(Env& env, const std::string& name) {
    for (auto it = env.rbegin(); it != env.rend(); ++it) {
      auto found = it->find(name);
      if (found != it->end()) return &found->second;
    }
    return nullptr;
  }

  void run_stmt(const Stmt& s, Env& env) {
    if (const auto* d = std::get_if<VarDecl>(&s.node)) {
      std::int64_t v = value_of(*d->init, env);
      env.back()[d->name] = v;
      tick();
    } else if (const auto* a = std::get_if<ArrayDecl>(&s.node)) {
      auto n = std::get<IntLiteral>(a->size->node).value;
      env.back()[a->name] = IntArray{std::vector<std::int64_t>(n, 0)};
      tick();
    } else if (const auto* as = std::get_if<Assign>(&s.node)) {
      if (as->index) {
        std::int64_t idx = value_of(*as->index, env);
        std::int64_t v = value_of(*as->value, env);
        cell(env, as->name, idx) = v;
      } else {
        std::int64_t v = value_of(*as->value, env);
        *find(env, as->name) = v;
      }
      tick();
    } else if (const auto* i = std::get_if<IfStmt>(&s.node)) {
      bool c = truth_of(*i->cond, env);
      tick();
      const Stmt* branch = c ? i->then_branch.get() : i->else_branch.get();
      if (branch) {
        env.emplace_back();
        run_stmt(*branch, env);
        env.pop_back();
      }
    } else if (const auto* w = std::get_if<WhileStmt>(&s.node)) {
      for (;;) {
        bool c = truth_of(*w->cond, env);
        tick();
        if (!c) break;
        env.emplace_back();
        run_stmt(*w->body, env);
        env.pop_back();
      }
    } else if (const auto* r = std::get_if<ReturnStmt>(&s.node)) {
      throw ReturnSignal{value_of(*r->value, env)};
    } else if (const auto* c = std::get_if<CallStmt>(&s.node)) {
      value_of(*c->call, env);
      tick();
    } else {
      run_block(std::get<Block>(s.node), env);
    }
  }

  std::int64_t& cell(Env& env, const std::string& name, std::int64_t idx) {
    auto& elems = std::get<IntArray>(*find(env, name)).elements;
    if (idx < 0 || idx >= static_cast<std::int64_t>(elems.size())) {
      trap(FaultKind::IndexOutOfBounds, "array index out of bounds");
    }
    return elems[static_cast<std::size_t>(idx)];
  }

  bool truth_of(const Expr& e, Env& env) {
    if (const auto* u = std::get_if<UnaryExpr>(&e.node)) return !truth_of(*u->operand, env);
    const auto& b = std::get<BinaryExpr>(e.node);
    if (b.op == BinaryOp::And) {
      if (!truth_of(*b.lhs, env)) return false;
      return truth_of(*b.rhs, env);
    }
    if (b.op == BinaryOp::Or) {
      if (truth_of(*b.lhs, env)) return true;
      return truth_of(*b.rhs, env);
    }
    std::int64_t l = value_of(*b.lhs, env);
    std::int64_t r = value_of(*b.rhs, env);
    switch (b.op) {
      case BinaryOp::Eq: return l == r;
      case BinaryOp::Ne: return l != r;
      case BinaryOp::Lt: return l < r;
      case BinaryOp::Le: return l <= r;
      case BinaryOp::Gt: return l > r;
      default: return l >= r;
    }
  }

  std::int64_t value_of(const Expr& e, Env& env) {
    if (const auto* lit = std::get_if<IntLiteral>(&e.node)) return lit->value;
    if (const auto* v = std::get_if<VarRef>(&e.node)) return std::get<std::int64_t>(*find(env, v->name));
    if (const auto* ix = std::get_if<IndexRef>(&e.node)) return cell(env, ix->name, value_of(*ix->index, env));
    if (const auto* u = std::get_if<UnaryExpr>(&e.node)) return arith::neg(value_of(*u->operand, env));
    if (const auto* c = std::get_if<CallExpr>(&e.node)) {
      std::vector<std::int64_t> args;
      for (const auto& a : c->args) args.push_back(value_of(*a, env));
      if (depth_ >= limits_.max_stack_depth) trap(FaultKind::StackOverflow, "stack overflow");
      return invoke(*program_.find(c->callee), args, false);
    }
    const auto& b = std::get<BinaryExpr>(e.node);
    std::int64_t l = value_of(*b.lhs, env);
    std::int64_t r = value_of(*b.rhs, env);
    switch (b.op) {
      case BinaryOp::Add: return arith::add(l, r);
      case BinaryOp::Sub: return arith::sub(l, r);
      case BinaryOp::Mul: return arith::mul(l, r);
      case BinaryOp::Div: {
        auto q = arith::div(l, r);
        if (!q) trap(FaultKind::DivisionByZero, "division by zero");
        return *q;
      }
      default: {
        auto m = arith::mod(l, r);
        if (!m) trap(FaultKind::ModuloByZero, "modulo by zero");
        return *m;
      }
    }
  }

  const CheckedProgram& program_;
  ExecutionLimits limits_;
  std::size_t count_ = 0;
  std::size_t depth_ = 0;
};

}  // namespace

Status run_result(const CheckedProgram& program, std::span<const std::int64_t> inputs,
                  const ExecutionLimits& limits) {
  if (limits.max_points == 0 || limits.max_stack_depth == 0) {
    throw Error(ErrorCode::InvalidArgument, "execution limits must be strictly positive");
  }
  if (inputs.size() != program.main().params.size()) {
    throw Error(ErrorCode::InputArity, "input count does not match main's parameter count");
  }
  DirectEvaluator ev(program, limits);
  return ev.run(inputs);
}

}  // namespace dibg
