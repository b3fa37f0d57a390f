#include "dibg/interpreter.hpp"

#include <utility>

#include "dibg/arith.hpp"
#include "dibg/error.hpp"

namespace dibg {

namespace {

// Unwinds the interpreter once a terminal point has been recorded.
struct Halt {};

enum class Flow { Normal, Return };

class Tracer {
 public:
  Tracer(const CheckedProgram& program, const ExecutionLimits& limits) : program_(program), limits_(limits) {}

  std::vector<ExecutionPoint> run(std::span<const std::int64_t> inputs) {
    const FunctionDef& main = program_.main();
    Activation act;
    act.frame.function = main.name;
    act.frame.call_line = 0;
    for (std::size_t i = 0; i < main.params.size(); ++i) act.frame.bindings.push_back({main.params[i], inputs[i]});
    act.line = main.pos.line;
    acts_.push_back(std::move(act));

    try {
      emit(main.pos.line, status::Running{});
      if (exec_block(main.body) == Flow::Return) {
        emit(acts_.back().line, status::Returned{return_value_});
      }
      fault(FaultKind::MissingReturn, "control reached the end of '" + main.name + "' without a return",
            main.end_line);
    } catch (const Halt&) {
    }
    return std::move(points_);
  }

 private:
  struct Activation {
    Frame frame;
    CallStack parent;
    int line = 0;  // line of the statement being executed
  };

  Activation& top() { return acts_.back(); }

  void emit(int line, Status st) {
    const Activation& a = acts_.back();
    ExecutionPoint p;
    p.index = points_.size();
    p.line = line;
    p.stack = a.parent.push(std::make_shared<const Frame>(a.frame));
    if (is_running(st) && p.index >= limits_.max_points) st = status::BudgetExceeded{};
    bool terminal = !is_running(st);
    p.status = std::move(st);
    points_.push_back(std::move(p));
    if (terminal) throw Halt{};
  }

  [[noreturn]] void fault(FaultKind kind, std::string message, int line) {
    emit(line, status::Error{kind, std::move(message)});
    throw Halt{};  // unreachable: emit throws on terminal status
  }
  [[noreturn]] void fault(FaultKind kind, std::string message) { fault(kind, std::move(message), top().line); }

  Value& slot(const std::string& name) {
    for (auto& b : top().frame.bindings) {
      if (b.name == name) return b.value;
    }
    // The checker guarantees resolution.
    throw std::logic_error("unresolved variable '" + name + "'");
  }

  std::int64_t& element(const std::string& name, std::int64_t index) {
    auto& arr = std::get<IntArray>(slot(name)).elements;
    if (index < 0 || static_cast<std::uint64_t>(index) >= arr.size()) {
      fault(FaultKind::IndexOutOfBounds, "index " + std::to_string(index) + " out of bounds for array '" + name +
                                             "' of length " + std::to_string(arr.size()));
    }
    return arr[static_cast<std::size_t>(index)];
  }

  Flow exec_block(const Block& b) {
    std::size_t mark = top().frame.bindings.size();
    for (const auto& s : b.stmts) {
      if (exec(*s) == Flow::Return) return Flow::Return;
    }
    top().frame.bindings.resize(mark);
    return Flow::Normal;
  }

  Flow exec(const Stmt& s) {
    top().line = s.pos.line;
    const int line = s.pos.line;
    return std::visit(
        [&](const auto& n) -> Flow {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, VarDecl>) {
            std::int64_t v = eval(*n.init);
            top().frame.bindings.push_back({n.name, v});
            emit(line, status::Running{});
          } else if constexpr (std::is_same_v<T, ArrayDecl>) {
            auto size = std::get<IntLiteral>(n.size->node).value;
            top().frame.bindings.push_back({n.name, IntArray{std::vector<std::int64_t>(size, 0)}});
            emit(line, status::Running{});
          } else if constexpr (std::is_same_v<T, Assign>) {
            if (n.index) {
              std::int64_t idx = eval(*n.index);
              std::int64_t v = eval(*n.value);
              top().line = line;
              element(n.name, idx) = v;
            } else {
              std::int64_t v = eval(*n.value);
              slot(n.name) = v;
            }
            emit(line, status::Running{});
          } else if constexpr (std::is_same_v<T, IfStmt>) {
            bool c = test(*n.cond);
            emit(line, status::Running{});
            if (c) return exec_nested(*n.then_branch);
            if (n.else_branch) return exec_nested(*n.else_branch);
          } else if constexpr (std::is_same_v<T, WhileStmt>) {
            for (;;) {
              top().line = line;
              bool c = test(*n.cond);
              emit(line, status::Running{});
              if (!c) break;
              if (exec_nested(*n.body) == Flow::Return) return Flow::Return;
            }
          } else if constexpr (std::is_same_v<T, ReturnStmt>) {
            return_value_ = eval(*n.value);
            top().line = line;
            return Flow::Return;
          } else if constexpr (std::is_same_v<T, CallStmt>) {
            eval(*n.call);
            emit(line, status::Running{});
          } else if constexpr (std::is_same_v<T, Block>) {
            return exec_block(n);
          }
          return Flow::Normal;
        },
        s.node);
  }

  Flow exec_nested(const Stmt& s) {
    std::size_t mark = top().frame.bindings.size();
    Flow f = exec(s);
    if (f == Flow::Normal) top().frame.bindings.resize(mark);
    return f;
  }

  std::int64_t call(const CallExpr& c) {
    std::vector<std::int64_t> args;
    args.reserve(c.args.size());
    for (const auto& a : c.args) args.push_back(eval(*a));

    if (acts_.size() >= limits_.max_stack_depth) {
      fault(FaultKind::StackOverflow, "call to '" + c.callee + "' exceeds the maximum stack depth of " +
                                          std::to_string(limits_.max_stack_depth));
    }
    const FunctionDef& fn = *program_.find(c.callee);
    Activation callee;
    callee.frame.function = fn.name;
    callee.frame.call_line = top().line;
    for (std::size_t i = 0; i < fn.params.size(); ++i) callee.frame.bindings.push_back({fn.params[i], args[i]});
    callee.parent = top().parent.push(std::make_shared<const Frame>(top().frame));
    callee.line = fn.pos.line;
    acts_.push_back(std::move(callee));
    emit(fn.pos.line, status::Running{});

    if (exec_block(fn.body) != Flow::Return) {
      fault(FaultKind::MissingReturn, "control reached the end of '" + fn.name + "' without a return",
            fn.end_line);
    }
    // The return statement's point belongs to the callee's frame.
    emit(top().line, status::Running{});
    std::int64_t result = return_value_;
    acts_.pop_back();
    return result;
  }

  bool test(const Expr& e) {
    if (const auto* u = std::get_if<UnaryExpr>(&e.node)) return !test(*u->operand);  // only `!` is boolean
    const auto* b = std::get_if<BinaryExpr>(&e.node);
    switch (b->op) {
      case BinaryOp::And: return test(*b->lhs) && test(*b->rhs);
      case BinaryOp::Or: return test(*b->lhs) || test(*b->rhs);
      default: break;
    }
    std::int64_t l = eval(*b->lhs);
    std::int64_t r = eval(*b->rhs);
    switch (b->op) {
      case BinaryOp::Eq: return l == r;
      case BinaryOp::Ne: return l != r;
      case BinaryOp::Lt: return l < r;
      case BinaryOp::Le: return l <= r;
      case BinaryOp::Gt: return l > r;
      case BinaryOp::Ge: return l >= r;
      default: throw std::logic_error("not a condition");
    }
  }

  std::int64_t eval(const Expr& e) {
    return std::visit(
        [&](const auto& n) -> std::int64_t {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, IntLiteral>) {
            return n.value;
          } else if constexpr (std::is_same_v<T, VarRef>) {
            return std::get<std::int64_t>(slot(n.name));
          } else if constexpr (std::is_same_v<T, IndexRef>) {
            return element(n.name, eval(*n.index));
          } else if constexpr (std::is_same_v<T, CallExpr>) {
            return call(n);
          } else if constexpr (std::is_same_v<T, UnaryExpr>) {
            return arith::neg(eval(*n.operand));
          } else {
            std::int64_t l = eval(*n.lhs);
            std::int64_t r = eval(*n.rhs);
            switch (n.op) {
              case BinaryOp::Add: return arith::add(l, r);
              case BinaryOp::Sub: return arith::sub(l, r);
              case BinaryOp::Mul: return arith::mul(l, r);
              case BinaryOp::Div:
                if (auto q = arith::div(l, r)) return *q;
                fault(FaultKind::DivisionByZero, "division by zero");
              case BinaryOp::Mod:
                if (auto m = arith::mod(l, r)) return *m;
                fault(FaultKind::ModuloByZero, "modulo by zero");
              default: throw std::logic_error("condition used as integer");
            }
          }
        },
        e.node);
  }

  const CheckedProgram& program_;
  ExecutionLimits limits_;
  std::vector<Activation> acts_;
  std::vector<ExecutionPoint> points_;
  std::int64_t return_value_ = 0;
};

void validate(const CheckedProgram& program, std::span<const std::int64_t> inputs, const ExecutionLimits& limits) {
  if (limits.max_points == 0 || limits.max_stack_depth == 0) {
    throw Error(ErrorCode::InvalidArgument, "execution limits must be strictly positive");
  }
  const auto arity = program.main().params.size();
  if (inputs.size() != arity) {
    throw Error(ErrorCode::InputArity, "main takes " + std::to_string(arity) + " input(s), " +
                                           std::to_string(inputs.size()) + " given");
  }
}

}  // namespace

Trace execute(std::shared_ptr<const CheckedProgram> program, std::span<const std::int64_t> inputs,
              const ExecutionLimits& limits) {
  validate(*program, inputs, limits);
  Tracer tracer(*program, limits);
  auto points = tracer.run(inputs);
  return Trace(std::move(program), {inputs.begin(), inputs.end()}, std::move(points));
}

}  // namespace dibg
